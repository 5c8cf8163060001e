from decoders.tanner import TannerGraph, build, degree_profile, gather
from decoders.bp import (
    ATANH_CLIP,
    BPDecoder,
    DecodeConfig,
    DecodeResult,
    MessagePassingDecoder,
    MessageState,
    check_to_var,
    decode,
    hard_decision,
    marginalize,
    var_to_check,
)
from decoders.hyper import HyperDecoder, clip_damping, compute_x0, hyper_decode, hyper_odd_update
from decoders.uncoded import UncodedDecoder

__all__ = [
    "ATANH_CLIP",
    "BPDecoder",
    "DecodeConfig",
    "DecodeResult",
    "HyperDecoder",
    "MessagePassingDecoder",
    "MessageState",
    "TannerGraph",
    "UncodedDecoder",
    "build",
    "check_to_var",
    "clip_damping",
    "compute_x0",
    "decode",
    "degree_profile",
    "gather",
    "hard_decision",
    "hyper_decode",
    "hyper_odd_update",
    "marginalize",
    "var_to_check",
]
