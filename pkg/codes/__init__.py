from codes.parity_check import (
    BitVector,
    ParityCheckMatrix,
    enumerate_codewords,
    gf2_rank,
    syndrome,
    to_systematic,
)
from codes.alist import AlistParseError, parse_alist, parse_dense, serialize_alist
from codes.code_loader import CodeLoader, code_loader

__all__ = [
    "AlistParseError",
    "BitVector",
    "CodeLoader",
    "ParityCheckMatrix",
    "code_loader",
    "enumerate_codewords",
    "gf2_rank",
    "parse_alist",
    "parse_dense",
    "serialize_alist",
    "syndrome",
    "to_systematic",
]
