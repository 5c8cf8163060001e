from typing import Optional, Sequence, Tuple
import numpy as np
from channel.awgn import llr, modulate, sigma_from_ebn0, transmit
from codes.parity_check import ParityCheckMatrix


def make_batch(
    code: ParityCheckMatrix,
    batch_size: int,
    snr_range_db: Sequence[float],
    rng: np.random.Generator,
    sigma: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lote de treino com a palavra-código toda zero

    Cada frame recebe um Eb/N0 sorteado uniformemente em `snr_range_db`. O canal e o
    decodificador são simétricos, então a palavra nula representa qualquer palavra.

    Args:
        sigma: se dado, substitui o sigma derivado do SNR (modo de injeção)

    Returns:
        (llr (B, n), alvos (B, n) todos zero)
    """
    low, high = snr_range_db
    if low > high:
        raise ValueError(f"Intervalo de SNR inválido: {low} > {high}")
    n = code.num_vars
    ebn0 = rng.uniform(low, high, size=batch_size) if high > low else np.full(batch_size, float(low))
    if sigma is None:
        sigmas = np.array([sigma_from_ebn0(s, code.code_rate) for s in ebn0])[:, None]
    else:
        sigmas = np.full((batch_size, 1), float(sigma))

    targets = np.zeros((batch_size, n), dtype=np.uint8)
    received = transmit(modulate(targets), sigmas, rng)
    return llr(received, sigmas), targets
