"""
Varredura BER x Eb/N0 por Monte Carlo

Cada lote de frames tem semente própria SeedSequence([seed, índice do SNR, índice do
lote]); os lotes rodam em paralelo mas são acumulados em ordem, e a parada antecipada
olha só o prefixo acumulado. O resultado não depende do número de workers, e todas as
variantes veem o mesmo ruído (números aleatórios comuns).
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple
import numpy as np
from channel.awgn import GAUSSIAN_METHOD, llr, modulate, sigma_from_ebn0, transmit, uncoded_ber
from codes.code_loader import CodeLoader, code_loader
from codes.parity_check import ParityCheckMatrix
from config.decoder_factory import DecoderFactory
from config.schemas import CodeRef, DecoderConfig, SweepConfig
from config.settings import log, settings
from decoders.tanner import TannerGraph, build


@dataclass
class BerPoint:
    """Estatísticas de um ponto de SNR"""

    snr_db: float
    sigma: float
    n: int
    frames: int = 0
    bit_errors: int = 0
    frame_errors: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.n) if self.frames else float("nan")

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else float("nan")

    @property
    def ci95(self) -> float:
        """Meia largura do intervalo de 95% (aproximação normal)"""
        if not self.frames:
            return float("nan")
        p = self.ber
        return 1.96 * math.sqrt(p * (1.0 - p) / (self.frames * self.n))

    def to_row(self, variant: str, include_uncoded: bool = True) -> Dict[str, Any]:
        row = {
            "variant": variant,
            "snr_db": self.snr_db,
            "sigma": self.sigma,
            "frames": self.frames,
            "bit_errors": self.bit_errors,
            "frame_errors": self.frame_errors,
            "ber": self.ber,
            "fer": self.fer,
            "ci95": self.ci95,
        }
        if include_uncoded:
            row["uncoded_ber"] = float(uncoded_ber(self.snr_db))
        return row


@dataclass
class SweepResult:
    code: str
    n: int
    k: int
    rate: float
    seed: int
    points: Dict[str, List[BerPoint]] = field(default_factory=dict)
    include_uncoded: bool = True

    def rows(self) -> List[Dict[str, Any]]:
        return [p.to_row(variant, self.include_uncoded) for variant, pts in self.points.items() for p in pts]

    def metadata(self) -> Dict[str, Any]:
        return {
            "code": self.code,
            "n": self.n,
            "k": self.k,
            "rate": self.rate,
            "seed": self.seed,
            "snr_axis": "Eb/N0 [dB], sigma = (2·R·10^(Eb/N0/10))^(-1/2)",
            "gaussian": GAUSSIAN_METHOD,
            "codeword": "all-zero",
        }

    def ber(self, variant: str) -> np.ndarray:
        return np.array([p.ber for p in self.points[variant]])


def point_sigma(snr_db: float, H: ParityCheckMatrix, noise_sigma: Optional[float] = None) -> float:
    return float(noise_sigma) if noise_sigma is not None else sigma_from_ebn0(snr_db, H.code_rate)


def batch_seed(seed: int, snr_index: int, batch_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, snr_index, batch_index])


def simulate_frames(H: ParityCheckMatrix, sigma: float, frames: int, seed: np.random.SeedSequence) -> np.ndarray:
    """LLRs de `frames` transmissões da palavra nula"""
    rng = np.random.default_rng(seed)
    signal = modulate(np.zeros((frames, H.num_vars), dtype=np.uint8))
    return llr(transmit(signal, sigma, rng), sigma)


def count_errors(decoder, H: ParityCheckMatrix, sigma: float, frames: int, seed: np.random.SeedSequence) -> Tuple[int, int]:
    """(erros de bit, erros de frame) de um lote"""
    result = decoder.decode(simulate_frames(H, sigma, frames, seed))
    wrong = result.bits != 0
    return int(wrong.sum()), int(wrong.any(axis=1).sum())


def simulate_point(
    decoder,
    H: ParityCheckMatrix,
    snr_db: float,
    snr_index: int,
    sweep: SweepConfig,
    pool: Optional[ThreadPoolExecutor] = None,
    workers: int = 1,
) -> BerPoint:
    """
    Simula até min_bit_errors erros de bit ou max_frames frames

    O estimador usa exatamente os frames simulados no prefixo aceito.
    """
    sigma = point_sigma(snr_db, H, sweep.noise_sigma)
    point = BerPoint(snr_db=snr_db, sigma=sigma, n=H.num_vars)
    wave = max(1, workers if pool is not None else 1)
    batch_index = 0
    while point.frames < sweep.max_frames and point.bit_errors < sweep.min_bit_errors:
        jobs = []
        planned = point.frames
        for _ in range(wave):
            if planned >= sweep.max_frames:
                break
            size = min(sweep.frames_per_batch, sweep.max_frames - planned)
            jobs.append((size, batch_seed(sweep.seed, snr_index, batch_index)))
            planned += size
            batch_index += 1

        if pool is not None:
            futures = [pool.submit(count_errors, decoder, H, sigma, size, seed) for size, seed in jobs]
            outcomes = [f.result() for f in futures]
        else:
            outcomes = [count_errors(decoder, H, sigma, size, seed) for size, seed in jobs]

        for (size, _), (bits, frames_wrong) in zip(jobs, outcomes):
            point.frames += size
            point.bit_errors += bits
            point.frame_errors += frames_wrong
            if point.bit_errors >= sweep.min_bit_errors:
                break
    return point


def decoder_for(
    variant: str,
    decoder_config: DecoderConfig,
    sweep: SweepConfig,
    graph: TannerGraph,
):
    """Decodificador de uma coluna da varredura (checkpoint por variante quando configurado)"""
    checkpoint = sweep.checkpoints.get(variant)
    if checkpoint is None and variant == decoder_config.variant:
        checkpoint = decoder_config.checkpoint
    config = decoder_config.model_copy(update={
        "variant": variant,
        "checkpoint": checkpoint,
        "iterations": sweep.iterations or decoder_config.iterations,
        "early_stop": True,
    })
    return DecoderFactory.create_decoder(config, graph, require_checkpoint=not sweep.allow_untrained)


def run_sweep(
    sweep: SweepConfig,
    decoder_config: Optional[DecoderConfig] = None,
    code: Optional[CodeRef] = None,
    loader: Optional[CodeLoader] = None,
    threads: Optional[int] = None,
) -> SweepResult:
    """
    Tabela de BerPoints por variante

    Raises:
        KeyError: código desconhecido
        CheckpointError: variante aprendida sem checkpoint (a menos que allow_untrained)
    """
    decoder_config = decoder_config or DecoderConfig()
    code = sweep.code or code or CodeRef()
    loader = loader or code_loader
    threads = threads or settings.THREADS

    H = loader.load(code.name, form=code.form)
    graph = build(H)
    decoders = {variant: decoder_for(variant, decoder_config, sweep, graph) for variant in sweep.variants}
    result = SweepResult(
        code=H.name, n=H.num_vars, k=H.k, rate=float(H.code_rate), seed=sweep.seed, include_uncoded=sweep.include_uncoded
    )

    log("SWEEP", f"✓ {H.name}: variantes {list(decoders)}, {len(sweep.snr_points_db)} pontos, {threads} workers")
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for variant, decoder in decoders.items():
            points = []
            for i, snr in enumerate(sweep.snr_points_db):
                point = simulate_point(decoder, H, snr, i, sweep, pool, threads)
                points.append(point)
                log("SWEEP", f"{variant} @ {snr:.2f} dB: BER={point.ber:.3e} ({point.bit_errors} erros, {point.frames} frames)")
            result.points[variant] = points
    finally:
        if pool is not None:
            pool.shutdown()
    return result
