"""
Laço de treino dos decodificadores aprendidos (BP ponderado e hiper-redes)

Adam com recorte do amortecimento após cada passo, aborto no primeiro valor não finito
e checkpoint no melhor BER de validação. Divergência é um resultado, não uma exceção.
"""
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple
import numpy as np
from autodiff.checkpoint import save_checkpoint
from autodiff.optim import adam_step, clip_grad_norm
from autodiff.tape import Tape
from config.schemas import TrainConfig
from config.settings import log
from decoders.guardrails import TrainingGuardrails
from decoders.hyper import clip_damping
from training.batches import make_batch
from training.loss import multiloss


@dataclass
class TrainReport:
    """Resultado de um treino"""

    variant: str
    seed: int
    losses: List[float] = field(default_factory=list)
    damping: List[float] = field(default_factory=list)
    validation: List[Tuple[int, float]] = field(default_factory=list)
    diverged: bool = False
    divergence_step: Optional[int] = None
    divergence_reason: Optional[str] = None
    best_ber: Optional[float] = None
    best_step: Optional[int] = None
    checkpoint: Optional[str] = None
    wall_clock: float = 0.0

    @property
    def final_damping(self) -> Optional[float]:
        return self.damping[-1] if self.damping else None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["final_damping"] = self.final_damping
        data["steps"] = len(self.losses)
        return data

    def trace_rows(self) -> List[Dict[str, Any]]:
        """Linhas do CSV: uma por passo (step, loss, damping, val_ber)"""
        val = dict(self.validation)
        rows = []
        for step, loss in enumerate(self.losses, start=1):
            rows.append({
                "step": step,
                "loss": loss,
                "damping": self.damping[step - 1] if step - 1 < len(self.damping) else "",
                "val_ber": val.get(step, ""),
            })
        return rows


def validation_ber(model, llr: np.ndarray) -> float:
    """BER por decisão dura, sem parada antecipada (palavra nula como alvo)"""
    result = model.decode(llr, early_stop=False)
    return float(np.mean(result.bits != 0))


def _header(model, config: TrainConfig, seed: int, best_ber: Optional[float]) -> Dict[str, Any]:
    H = model.graph.H
    header = {
        "variant": model.variant,
        "code": {"name": H.name, "n": H.num_vars, "m": H.num_checks},
        "decoder": model.config.model_dump(mode="json"),
        "train": config.model_dump(mode="json"),
        "seed": seed,
        "best_ber": best_ber,
    }
    if hasattr(model, "f_spec"):
        header["f_spec"] = {"widths": list(model.f_spec.widths), "activations": list(model.f_spec.activations)}
        header["g_spec"] = {"widths": list(model.g_spec.widths), "activations": list(model.g_spec.activations)}
    return header


def checkpoint_file(config: TrainConfig, variant: str, seed: int, code_name: str) -> Optional[str]:
    """Caminho do checkpoint de um treino (None desliga o salvamento)"""
    if config.checkpoint_path is None:
        return None
    if config.checkpoint_path.endswith(".npz"):
        return config.checkpoint_path
    stem = "".join(c if c.isalnum() else "_" for c in code_name).strip("_")
    return os.path.join(config.checkpoint_path, f"{stem}_{variant}_seed{seed}.npz")


def train(model, config: TrainConfig, seed: Optional[int] = None) -> TrainReport:
    """
    Treina `model` in-place

    Args:
        model: BPDecoder (ponderado) ou HyperDecoder
        config: hiperparâmetros de treino
        seed: semente dos lotes (default: config.seeds[0])

    Returns:
        TrainReport; se houver checkpoint_path, salva o melhor checkpoint
    """
    seed = config.seeds[0] if seed is None else seed
    started = time.perf_counter()
    store = model.store
    H = model.graph.H
    report = TrainReport(variant=model.variant, seed=seed)

    rng = np.random.default_rng(seed)
    val_llr, _ = make_batch(H, config.validation_frames, config.snr_range_db, np.random.default_rng([seed, 1]))
    path = checkpoint_file(config, model.variant, seed, H.name)

    best_store = store.copy()
    report.best_ber = validation_ber(model, val_llr)
    report.best_step = 0
    report.validation.append((0, report.best_ber))
    log("TRAIN", f"✓ {model.variant} em {H.name}: {store.num_params()} parâmetros, BER inicial {report.best_ber:.3e}")

    plateau_reported = False
    for step in range(1, config.steps + 1):
        llr, targets = make_batch(H, config.batch_size, config.snr_range_db, rng)

        tape = Tape()
        params = store.bind(tape)
        marginals = model.unroll(tape, params, tape.constant(llr))
        loss = multiloss(marginals, targets, config.loss_normalization)
        loss_value = loss.item()
        report.losses.append(loss_value)

        check = TrainingGuardrails.check_divergence(loss_value, {})
        if not check["diverged"]:
            grads = tape.backward(loss, params) if params else {}
            if config.gradient_clip_norm is not None:
                clip_grad_norm(grads, config.gradient_clip_norm)
            adam_step(store, grads, config.lr, config.beta1, config.beta2, config.eps)
            if "damping" in store:
                clip_damping(store)
                report.damping.append(float(store["damping"][0]))
            check = TrainingGuardrails.check_divergence(loss_value, store.params)

        if check["diverged"]:
            report.diverged = True
            report.divergence_step = step
            report.divergence_reason = check["reason"]
            log("TRAIN", f"✗ Divergência no passo {step}: {check['reason']}")
            break

        if step % config.eval_every == 0 or step == config.steps:
            ber = validation_ber(model, val_llr)
            report.validation.append((step, ber))
            if ber < report.best_ber:
                report.best_ber, report.best_step = ber, step
                best_store = store.copy()
            log("TRAIN", f"passo {step}: loss={loss_value:.5f} val_ber={ber:.3e}")

        if not plateau_reported and TrainingGuardrails.detect_plateau(report.losses):
            log("TRAIN", f"⚠️ Perda estagnada em {loss_value:.5f} (passo {step})")
            plateau_reported = True

    if path is not None:
        report.checkpoint = save_checkpoint(best_store, path, _header(model, config, seed, report.best_ber))
        log("TRAIN", f"✓ Checkpoint salvo em {report.checkpoint}")

    report.wall_clock = time.perf_counter() - started
    return report
