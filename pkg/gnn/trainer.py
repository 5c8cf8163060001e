import os
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence
import numpy as np
from autodiff.checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from autodiff.optim import adam_step, clip_grad_norm
from autodiff.tape import Tape, mean_op, softmax_cross_entropy
from config.schemas import GinConfig
from config.settings import log
from decoders.guardrails import TrainingGuardrails
from decoders.hyper import clip_damping
from gnn.graphs import GraphInstance, collate
from gnn.model import GinModel


@dataclass
class GinReport:
    kind: str
    seed: int
    losses: List[float] = field(default_factory=list)
    damping: List[float] = field(default_factory=list)
    train_accuracy: Optional[float] = None
    test_accuracy: Optional[float] = None
    diverged: bool = False
    divergence_step: Optional[int] = None
    checkpoint: Optional[str] = None
    wall_clock: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def build_model(config: GinConfig, feature_dim: int = 1, require_checkpoint: bool = False) -> GinModel:
    """
    Cria o modelo descrito em `config`, carregando o checkpoint quando ele existe

    Raises:
        CheckpointError: require_checkpoint e checkpoint ausente
    """
    store = None
    if config.checkpoint and (require_checkpoint or os.path.exists(config.checkpoint)):
        store, _ = load_checkpoint(config.checkpoint)
    elif require_checkpoint:
        raise CheckpointError("gin-eval exige gin.checkpoint")
    return GinModel(
        kind=config.model,
        feature_dim=feature_dim,
        hidden=config.hidden,
        iterations=config.iterations,
        f_hidden=config.f_hidden,
        g_hidden=config.g_hidden,
        learn_eps=config.learn_eps,
        seed=config.seed,
        store=store,
    )


def classification_loss(model: GinModel, tape: Tape, params, graphs: Sequence[GraphInstance]):
    batch = collate(graphs)
    scores, _ = model.forward(tape, params, batch)
    return mean_op(softmax_cross_entropy(scores, batch.labels))


def accuracy(model: GinModel, graphs: Sequence[GraphInstance]) -> float:
    if not graphs:
        return float("nan")
    labels = np.array([g.label for g in graphs])
    return float(np.mean(model.predict(graphs) == labels))


def train_gin(
    model: GinModel,
    train_set: Sequence[GraphInstance],
    config: GinConfig,
    test_set: Sequence[GraphInstance] = (),
) -> GinReport:
    """
    Adam sobre minibatches de grafos com entropia cruzada softmax

    O amortecimento é recortado para [0, 1] após cada passo; divergência encerra o laço.
    """
    started = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    store = model.store
    report = GinReport(kind=model.kind, seed=config.seed)

    for step in range(1, config.steps + 1):
        idx = rng.choice(len(train_set), size=min(config.batch_size, len(train_set)), replace=False)
        tape = Tape()
        params = store.bind(tape)
        loss = classification_loss(model, tape, params, [train_set[i] for i in idx])
        loss_value = loss.item()
        report.losses.append(loss_value)

        check = TrainingGuardrails.check_divergence(loss_value, {})
        if not check["diverged"]:
            grads = tape.backward(loss, params)
            if config.gradient_clip_norm is not None:
                clip_grad_norm(grads, config.gradient_clip_norm)
            adam_step(store, grads, config.lr)
            if "damping" in store:
                clip_damping(store)
                report.damping.append(float(store["damping"][0]))
            check = TrainingGuardrails.check_divergence(loss_value, store.params)
        if check["diverged"]:
            report.diverged = True
            report.divergence_step = step
            log("GIN", f"✗ Divergência no passo {step}: {check['reason']}")
            break

        if step % 50 == 0:
            log("GIN", f"passo {step}: loss={loss_value:.4f}")

    report.train_accuracy = accuracy(model, train_set)
    report.test_accuracy = accuracy(model, test_set)
    if config.checkpoint:
        report.checkpoint = save_checkpoint(store, config.checkpoint, {"model": model.kind, "gin": config.model_dump(mode="json")})
    report.wall_clock = time.perf_counter() - started
    log("GIN", f"✓ {model.kind}: acurácia treino {report.train_accuracy:.3f}, teste {report.test_accuracy:.3f}")
    return report
