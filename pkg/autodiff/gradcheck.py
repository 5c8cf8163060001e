from typing import Callable, Dict, Optional
import numpy as np
from autodiff.optim import ParameterStore
from autodiff.tape import Tape, Value

# Função de perda: recebe a fita e os parâmetros ligados, devolve um Value escalar
LossFn = Callable[[Tape, Dict[str, Value]], Value]


def analytic_gradients(loss_fn: LossFn, store: ParameterStore):
    tape = Tape()
    bound = store.bind(tape)
    loss = loss_fn(tape, bound)
    return loss.item(), tape.backward(loss, bound)


def _loss_value(loss_fn: LossFn, store: ParameterStore) -> float:
    tape = Tape(record=False)
    return loss_fn(tape, store.bind(tape)).item()


def relative_error(analytic: float, numeric: float, floor: float = 1e-7) -> float:
    """Erro relativo com piso absoluto: diferenças abaixo do piso contam como zero"""
    diff = abs(analytic - numeric)
    if diff <= floor:
        return 0.0
    return diff / max(abs(analytic), abs(numeric), floor)


def finite_difference_check(
    loss_fn: LossFn,
    store: ParameterStore,
    h: float = 1e-5,
    max_coords: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    floor: float = 1e-7,
) -> Dict[str, float]:
    """
    Compara o gradiente reverso com diferenças centrais

    Args:
        max_coords: se dado, sorteia no máximo esse número de coordenadas por parâmetro

    Returns:
        dict nome -> maior erro relativo encontrado
    """
    rng = rng or np.random.default_rng(0)
    _, grads = analytic_gradients(loss_fn, store)
    worst = {}
    for name, param in store.params.items():
        flat = param.reshape(-1)
        coords = np.arange(flat.size)
        if max_coords is not None and flat.size > max_coords:
            coords = rng.choice(flat.size, size=max_coords, replace=False)
        g = grads[name].reshape(-1)
        err = 0.0
        for i in coords:
            original = flat[i]
            flat[i] = original + h
            up = _loss_value(loss_fn, store)
            flat[i] = original - h
            down = _loss_value(loss_fn, store)
            flat[i] = original
            numeric = (up - down) / (2.0 * h)
            err = max(err, relative_error(float(g[i]), numeric, floor))
        worst[name] = err
    return worst
