import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union
import numpy as np
from scipy.special import erfc

# Algoritmo gaussiano registrado nos metadados das execuções
GAUSSIAN_METHOD = "box-muller"

Rate = Union[float, Fraction]


def sigma_from_ebn0(ebn0_db: float, rate: Rate) -> float:
    """
    Desvio padrão do ruído para um Eb/N0 (dB) e taxa de código

    sigma = (2 · R · 10^(Eb/N0 / 10))^(-1/2)
    """
    rate = float(rate)
    if rate <= 0 or rate > 1:
        raise ValueError(f"Taxa de código deve estar em (0, 1], recebida {rate}")
    return (2.0 * rate * 10.0 ** (ebn0_db / 10.0)) ** -0.5


@dataclass(frozen=True)
class ChannelConfig:
    """Canal AWGN com modulação BPSK para um ponto de Eb/N0"""

    ebn0_db: float
    code_rate: float

    @property
    def sigma(self) -> float:
        return sigma_from_ebn0(self.ebn0_db, self.code_rate)


def modulate(bits: np.ndarray) -> np.ndarray:
    """BPSK: bit 0 -> +1.0, bit 1 -> -1.0"""
    bits = np.asarray(bits)
    return 1.0 - 2.0 * bits.astype(np.float64)


def standard_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Amostras N(0,1) pelo método de Box-Muller a partir de uniformes do gerador"""
    size = int(np.prod(shape))
    half = (size + 1) // 2
    u1 = 1.0 - rng.random(half)  # (0, 1], evita log(0)
    u2 = rng.random(half)
    radius = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([radius * np.cos(2.0 * np.pi * u2), radius * np.sin(2.0 * np.pi * u2)])
    return z[:size].reshape(shape)


def transmit(signal: np.ndarray, sigma, rng: np.random.Generator) -> np.ndarray:
    """
    y = s + sigma·z, com z i.i.d. N(0,1); determinístico dado o gerador

    `sigma` pode ser escalar ou um array que faz broadcast com o sinal (ex. (B, 1)).
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    if (sigma < 0).any():
        raise ValueError("sigma deve ser >= 0")
    signal = np.asarray(signal, dtype=np.float64)
    if not sigma.any():
        return signal.copy()
    return signal + sigma * standard_normal(rng, signal.shape)


def llr(received: np.ndarray, sigma) -> np.ndarray:
    """
    LLR de cada amostra: l = 2·y / sigma²

    Positivo favorece o bit 0. `sigma` pode ser escalar ou um vetor (um por frame,
    com shape (B, 1)).
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    if (sigma <= 0).any():
        raise ValueError("sigma deve ser > 0 para calcular LLRs (use um sigma pequeno para saturar)")
    return 2.0 * np.asarray(received, dtype=np.float64) / sigma ** 2


def q_function(x) -> np.ndarray:
    """Q(x) = P(N(0,1) > x)"""
    return 0.5 * erfc(np.asarray(x, dtype=np.float64) / math.sqrt(2.0))


def uncoded_ber(ebn0_db) -> np.ndarray:
    """BER analítica de BPSK sem codificação: Q(sqrt(2·Eb/N0))"""
    return q_function(np.sqrt(2.0 * 10.0 ** (np.asarray(ebn0_db, dtype=np.float64) / 10.0)))
