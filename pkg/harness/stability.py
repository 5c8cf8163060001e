"""
Experimento de estabilidade: o mesmo treino repetido por semente, com e sem amortecimento

A incidência de divergência é o resultado do experimento; nenhuma divergência é erro.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
from codes.code_loader import CodeLoader, code_loader
from config.decoder_factory import DecoderFactory
from config.schemas import CodeRef, DecoderConfig, StabilityConfig, TrainConfig
from config.settings import log
from decoders.tanner import build
from training.trainer import TrainReport, train


@dataclass
class StabilityResult:
    code: str
    check_update: str
    reports: List[TrainReport] = field(default_factory=list)

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "variant": r.variant,
                "seed": r.seed,
                "steps": len(r.losses),
                "diverged": r.diverged,
                "divergence_step": r.divergence_step if r.divergence_step is not None else "",
                "final_loss": r.losses[-1] if r.losses else "",
                "final_damping": r.final_damping if r.final_damping is not None else "",
                "best_ber": r.best_ber,
            }
            for r in self.reports
        ]

    def divergences(self) -> Dict[str, Dict[str, int]]:
        """variante -> {'runs', 'diverged'}"""
        table: Dict[str, Dict[str, int]] = {}
        for r in self.reports:
            entry = table.setdefault(r.variant, {"runs": 0, "diverged": 0})
            entry["runs"] += 1
            entry["diverged"] += int(r.diverged)
        return table

    def metadata(self) -> Dict[str, Any]:
        return {"code": self.code, "check_update": self.check_update, "divergences": self.divergences()}


def run_stability(
    stability: StabilityConfig,
    train_config: TrainConfig,
    decoder_config: Optional[DecoderConfig] = None,
    code: Optional[CodeRef] = None,
    loader: Optional[CodeLoader] = None,
) -> StabilityResult:
    """
    Treina cada variante com cada semente (inicialização e lotes) a partir do zero

    Checkpoints não são gravados; o decodificador parte sempre de parâmetros novos.
    """
    decoder_config = decoder_config or DecoderConfig()
    code = code or CodeRef()
    H = (loader or code_loader).load(code.name, form=code.form)
    graph = build(H)
    budget = train_config.model_copy(update={"steps": stability.steps, "checkpoint_path": None})
    result = StabilityResult(code=H.name, check_update=decoder_config.check_update)

    log("STABILITY", f"✓ {H.name}: {stability.variants} x sementes {stability.seeds}, {stability.steps} passos")
    for variant in stability.variants:
        for seed in stability.seeds:
            config = decoder_config.model_copy(update={"variant": variant, "seed": seed, "checkpoint": None, "early_stop": False})
            model = DecoderFactory.create_decoder(config, graph)
            report = train(model, budget, seed=seed)
            result.reports.append(report)
            status = f"✗ divergiu no passo {report.divergence_step}" if report.diverged else "✓ estável"
            log("STABILITY", f"{variant} semente {seed}: {status}")

    for variant, counts in result.divergences().items():
        log("STABILITY", f"{variant}: {counts['diverged']}/{counts['runs']} divergências")
    return result
