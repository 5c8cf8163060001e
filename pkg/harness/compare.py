from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import numpy as np
from scipy.stats import binomtest
from autodiff.checkpoint import load_checkpoint
from codes.code_loader import CodeLoader, code_loader
from config.decoder_factory import DecoderFactory
from config.schemas import CodeRef, DecoderConfig, SweepConfig
from config.settings import log
from decoders.tanner import build
from harness.sweep import batch_seed, point_sigma, simulate_frames


@dataclass
class ComparePoint:
    """Resultado pareado de A contra B num ponto de SNR"""

    snr_db: float
    frames: int
    n: int
    bit_errors_a: int = 0
    bit_errors_b: int = 0
    a_better: int = 0     # frames em que A erra menos bits que B
    b_better: int = 0
    agreeing_bits: int = 0

    @property
    def ber_a(self) -> float:
        return self.bit_errors_a / (self.frames * self.n)

    @property
    def ber_b(self) -> float:
        return self.bit_errors_b / (self.frames * self.n)

    @property
    def delta(self) -> float:
        """BER(A) - BER(B); negativo quando A é melhor"""
        return self.ber_a - self.ber_b

    @property
    def ratio(self) -> float:
        if self.bit_errors_b == 0:
            return 1.0 if self.bit_errors_a == 0 else float("inf")
        return self.ber_a / self.ber_b

    @property
    def sign_test_p(self) -> float:
        """Teste do sinal bilateral sobre os frames discordantes"""
        discordant = self.a_better + self.b_better
        if discordant == 0:
            return 1.0
        return float(binomtest(self.a_better, discordant, 0.5).pvalue)

    @property
    def agreement(self) -> float:
        """Fração de decisões duras idênticas entre A e B"""
        return self.agreeing_bits / (self.frames * self.n)

    def to_row(self) -> Dict[str, Any]:
        return {
            "snr_db": self.snr_db,
            "frames": self.frames,
            "ber_a": self.ber_a,
            "ber_b": self.ber_b,
            "delta": self.delta,
            "ratio": self.ratio,
            "a_better": self.a_better,
            "b_better": self.b_better,
            "sign_test_p": self.sign_test_p,
            "agreement": self.agreement,
        }


@dataclass
class CompareResult:
    code: str
    label_a: str
    label_b: str
    points: List[ComparePoint] = field(default_factory=list)

    def rows(self) -> List[Dict[str, Any]]:
        return [p.to_row() for p in self.points]

    def metadata(self) -> Dict[str, Any]:
        return {"code": self.code, "a": self.label_a, "b": self.label_b, "pairing": "common random numbers"}


def _label(config: DecoderConfig) -> str:
    update = config.check_update if config.q is None else f"{config.check_update}(q={config.q})"
    return f"{config.variant}/{update}"


def _trained_code(config: DecoderConfig) -> Optional[str]:
    if not config.checkpoint:
        return None
    _, header = load_checkpoint(config.checkpoint)
    return header.get("code", {}).get("name")


def compare(
    a: DecoderConfig,
    b: DecoderConfig,
    sweep: SweepConfig,
    code: Optional[CodeRef] = None,
    frames: int = 10000,
    loader: Optional[CodeLoader] = None,
) -> CompareResult:
    """
    Simulação pareada: os mesmos frames ruidosos passam pelos dois decodificadores

    Raises:
        ValueError: checkpoints de A e B treinados em códigos diferentes
        CheckpointError: checkpoint incompatível com o código da comparação
    """
    code_a, code_b = _trained_code(a), _trained_code(b)
    if code_a and code_b and code_a != code_b:
        raise ValueError(f"Configurações incompatíveis: A treinado em {code_a}, B em {code_b}")

    code = sweep.code or code or CodeRef()
    H = (loader or code_loader).load(code.name, form=code.form)
    graph = build(H)
    dec_a = DecoderFactory.create_decoder(a, graph, require_checkpoint=not sweep.allow_untrained)
    dec_b = DecoderFactory.create_decoder(b, graph, require_checkpoint=not sweep.allow_untrained)
    result = CompareResult(code=H.name, label_a=_label(a), label_b=_label(b))
    log("COMPARE", f"✓ {result.label_a} x {result.label_b} em {H.name}, {frames} frames por ponto")

    for i, snr in enumerate(sweep.snr_points_db):
        sigma = point_sigma(snr, H, sweep.noise_sigma)
        point = ComparePoint(snr_db=snr, frames=0, n=H.num_vars)
        batch = 0
        while point.frames < frames:
            size = min(sweep.frames_per_batch, frames - point.frames)
            llr = simulate_frames(H, sigma, size, batch_seed(sweep.seed, i, batch))
            bits_a = dec_a.decode(llr).bits
            bits_b = dec_b.decode(llr).bits
            errs_a = (bits_a != 0).sum(axis=1)
            errs_b = (bits_b != 0).sum(axis=1)
            point.frames += size
            point.bit_errors_a += int(errs_a.sum())
            point.bit_errors_b += int(errs_b.sum())
            point.a_better += int((errs_a < errs_b).sum())
            point.b_better += int((errs_a > errs_b).sum())
            point.agreeing_bits += int((bits_a == bits_b).sum())
            batch += 1
        result.points.append(point)
        log("COMPARE", f"{snr:.2f} dB: Δ={point.delta:+.3e}, p={point.sign_test_p:.3g}, concordância={point.agreement:.4f}")
    return result


def coding_gain_holds(result: CompareResult, top: int = 2, alpha: float = 0.05) -> bool:
    """A não é pior que B nos `top` maiores SNRs (teste do sinal ao nível alpha)"""
    for point in result.points[-top:]:
        if point.b_better > point.a_better and point.sign_test_p < alpha:
            return False
    return True
