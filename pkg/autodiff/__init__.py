from autodiff.tape import Tape, Value
from autodiff.nn import MlpSpec, dynamic_mlp_forward, init_mlp, mlp_forward
from autodiff.optim import ParameterStore, adam_step, clip_grad_norm
from autodiff.checkpoint import CheckpointError, load_checkpoint, save_checkpoint

__all__ = [
    "CheckpointError",
    "MlpSpec",
    "ParameterStore",
    "Tape",
    "Value",
    "adam_step",
    "clip_grad_norm",
    "dynamic_mlp_forward",
    "init_mlp",
    "load_checkpoint",
    "mlp_forward",
    "save_checkpoint",
]
