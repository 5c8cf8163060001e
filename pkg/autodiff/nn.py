from dataclasses import dataclass
from typing import Dict, List, Tuple
import numpy as np
from autodiff.tape import (
    Value,
    add,
    batched_matvec,
    matmul,
    reshape,
    shifted_softplus,
    slice_last,
    tanh_op,
)

ACTIVATIONS = ("tanh", "shifted_softplus", "linear")


@dataclass(frozen=True)
class MlpSpec:
    """
    Especificação de um MLP: larguras [entrada, ocultas..., saída] e uma ativação por camada
    """

    widths: Tuple[int, ...]
    activations: Tuple[str, ...]
    bias: bool = False

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        object.__setattr__(self, "activations", tuple(self.activations))
        if len(self.widths) < 2:
            raise ValueError("MlpSpec precisa de pelo menos uma camada")
        if min(self.widths) <= 0:
            raise ValueError(f"Larguras devem ser positivas: {self.widths}")
        if len(self.activations) != len(self.widths) - 1:
            raise ValueError("Uma ativação por camada é obrigatória")
        for act in self.activations:
            if act not in ACTIVATIONS:
                raise ValueError(f"Ativação '{act}' não suportada. Use {ACTIVATIONS}")

    @classmethod
    def uniform(cls, widths, activation: str = "tanh", bias: bool = False, last: str = None) -> "MlpSpec":
        """Mesma ativação em todas as camadas (opcionalmente outra na última)"""
        acts = [activation] * (len(widths) - 1)
        if last is not None:
            acts[-1] = last
        return cls(tuple(widths), tuple(acts), bias)

    @property
    def in_width(self) -> int:
        return self.widths[0]

    @property
    def out_width(self) -> int:
        return self.widths[-1]

    def layer_shapes(self) -> List[Tuple[int, int]]:
        return list(zip(self.widths[:-1], self.widths[1:]))

    def num_params(self) -> int:
        """Σ camadas (in·out) (+ out se houver bias)"""
        return sum(i * o + (o if self.bias else 0) for i, o in self.layer_shapes())


def _activate(x: Value, activation: str) -> Value:
    if activation == "tanh":
        return tanh_op(x)
    if activation == "shifted_softplus":
        return shifted_softplus(x)
    return x


def init_mlp(spec: MlpSpec, rng: np.random.Generator, gain: float = 1.0) -> Dict[str, np.ndarray]:
    """Pesos iniciais (Glorot uniforme) nomeados W0, b0, W1, ..."""
    params = {}
    for layer, (i, o) in enumerate(spec.layer_shapes()):
        limit = gain * np.sqrt(6.0 / (i + o))
        params[f"W{layer}"] = rng.uniform(-limit, limit, size=(i, o))
        if spec.bias:
            params[f"b{layer}"] = np.zeros(o)
    return params


def mlp_forward(spec: MlpSpec, params: Dict[str, Value], x: Value) -> Value:
    """
    MLP com pesos estáticos (affine por camada + ativação)

    Args:
        params: Values ligados à fita com as chaves W0, b0, W1, ...
        x: entrada (N, in)
    """
    h = x
    for layer, act in enumerate(spec.activations):
        h = matmul(h, params[f"W{layer}"])
        if spec.bias:
            h = add(h, params[f"b{layer}"])
        h = _activate(h, act)
    return h


def dynamic_mlp_forward(spec: MlpSpec, theta: Value, x: Value) -> Value:
    """
    MLP cujos pesos vêm de outra rede: cada linha de `theta` (N, P) é o vetor plano de
    parâmetros de g para a linha correspondente de `x` (N, in)

    Raises:
        ValueError: largura de theta diferente de spec.num_params()
    """
    rows, width = theta.shape
    if width != spec.num_params():
        raise ValueError(
            f"Saída de f tem largura {width}, mas g espera {spec.num_params()} parâmetros"
        )
    h = x
    offset = 0
    for (i, o), act in zip(spec.layer_shapes(), spec.activations):
        w = reshape(slice_last(theta, offset, offset + i * o), (rows, i, o))
        offset += i * o
        h = batched_matvec(h, w)
        if spec.bias:
            h = add(h, slice_last(theta, offset, offset + o))
            offset += o
        h = _activate(h, act)
    return h
