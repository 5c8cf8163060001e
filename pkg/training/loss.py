from typing import List, Literal
import numpy as np
from autodiff.tape import Value, bce_with_logits, neg, scale, sum_op

Normalization = Literal["bit", "frame"]


def multiloss(marginals: List[Value], targets: np.ndarray, normalization: Normalization = "bit") -> Value:
    """
    Entropia cruzada binária de sigmoid(-o_v) contra os bits alvo, somada sobre todas as
    iterações desenroladas

    Args:
        marginals: uma marginal (B, n) por par ímpar/par
        targets: bits transmitidos (B, n)
        normalization: 'bit' divide por B·n, 'frame' divide por B

    Marginais não finitas produzem uma perda não finita (sinal de divergência).
    """
    if not marginals:
        raise ValueError("multiloss exige pelo menos uma iteração de marginais")
    targets = np.asarray(targets, dtype=np.float64)
    batch, n = targets.shape
    total = None
    for o in marginals:
        # P(bit=1) = sigmoid(-o)
        term = sum_op(bce_with_logits(neg(o), targets))
        total = term if total is None else total + term
    denominator = batch * n if normalization == "bit" else batch
    return scale(total, 1.0 / denominator)
