from typing import Dict, Iterable, Optional, Tuple
import numpy as np
from autodiff.tape import Tape, Value


class ParameterStore:
    """
    Parâmetros nomeados (arrays float64) e os buffers de momento do Adam

    Parâmetros com `bounds` são recortados ao intervalo após cada passo do otimizador
    (é assim que o fator de amortecimento fica em [0, 1]).
    """

    def __init__(self):
        self.params: Dict[str, np.ndarray] = {}
        self.m: Dict[str, np.ndarray] = {}
        self.v: Dict[str, np.ndarray] = {}
        self.bounds: Dict[str, Tuple[float, float]] = {}
        self.step = 0

    def add(self, name: str, value, bounds: Optional[Tuple[float, float]] = None):
        if name in self.params:
            raise KeyError(f"Parâmetro '{name}' já existe")
        value = np.array(value, dtype=np.float64)
        self.params[name] = value
        self.m[name] = np.zeros_like(value)
        self.v[name] = np.zeros_like(value)
        if bounds is not None:
            self.bounds[name] = bounds
            self.params[name] = np.clip(value, *bounds)

    def add_group(self, prefix: str, arrays: Dict[str, np.ndarray]):
        for key, value in arrays.items():
            self.add(f"{prefix}.{key}", value)

    def group(self, values: Dict[str, Value], prefix: str) -> Dict[str, Value]:
        """Recorta um grupo de Values ligados ('f.W0' -> 'W0')"""
        head = prefix + "."
        return {k[len(head):]: v for k, v in values.items() if k.startswith(head)}

    def __getitem__(self, name: str) -> np.ndarray:
        return self.params[name]

    def __contains__(self, name: str) -> bool:
        return name in self.params

    def names(self) -> Iterable[str]:
        return self.params.keys()

    def bind(self, tape: Tape) -> Dict[str, Value]:
        """Cria uma folha na fita para cada parâmetro"""
        return {name: tape.variable(value) for name, value in self.params.items()}

    def num_params(self) -> int:
        return int(sum(p.size for p in self.params.values()))

    def apply_bounds(self):
        for name, (lo, hi) in self.bounds.items():
            np.clip(self.params[name], lo, hi, out=self.params[name])

    def copy(self) -> "ParameterStore":
        other = ParameterStore()
        other.params = {k: v.copy() for k, v in self.params.items()}
        other.m = {k: v.copy() for k, v in self.m.items()}
        other.v = {k: v.copy() for k, v in self.v.items()}
        other.bounds = dict(self.bounds)
        other.step = self.step
        return other


def clip_grad_norm(grads: Dict[str, np.ndarray], max_norm: float) -> float:
    """Reescala os gradientes (in-place) para norma global <= max_norm; devolve a norma original"""
    total = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))
    if np.isfinite(total) and total > max_norm > 0:
        factor = max_norm / total
        for g in grads.values():
            g *= factor
    return total


def adam_step(
    store: ParameterStore,
    grads: Dict[str, np.ndarray],
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> ParameterStore:
    """
    Um passo do Adam com correção de viés, seguido do corte dos parâmetros com limites

    Raises:
        ValueError: gradiente com shape diferente do parâmetro
    """
    store.step += 1
    bc1 = 1.0 - beta1 ** store.step
    bc2 = 1.0 - beta2 ** store.step

    for name, g in grads.items():
        p = store.params[name]
        if g.shape != p.shape:
            raise ValueError(f"Gradiente de '{name}' com shape {g.shape}, esperado {p.shape}")
        m, v = store.m[name], store.v[name]
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * (g * g)
        p -= lr * (m / bc1) / (np.sqrt(v / bc2) + eps)

    store.apply_bounds()
    return store
