"""
Suíte de verificação de gradientes

Cada caso sorteia uma configuração pequena (MLP, composição f∘g, arctanh por Taylor,
valor absoluto, decodificador hiper amortecido, BP ponderado, hyper-GIN) e compara
o gradiente reverso com diferenças centrais.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple
import numpy as np
from autodiff.gradcheck import LossFn, finite_difference_check
from autodiff.nn import ACTIVATIONS, MlpSpec, dynamic_mlp_forward, init_mlp, mlp_forward
from autodiff.optim import ParameterStore
from autodiff.tape import Tape, Value, abs_val, mul, sum_op, taylor_arctanh_op, tanh_op
from codes.code_loader import code_loader
from config.settings import log
from decoders.bp import BPDecoder, DecodeConfig
from decoders.hyper import HyperDecoder
from decoders.tanner import build
from gnn.graphs import cycle_graph, path_graph
from gnn.model import GinModel
from gnn.trainer import classification_loss
from training.loss import multiloss

KINDS = ("mlp", "hyper_fg", "taylor", "abs", "hyper_decoder", "weighted_bp", "hyper_gin")
TOLERANCE = 1e-4
FLOOR = 1e-7

Case = Tuple[ParameterStore, LossFn]


@dataclass
class GradCheckCase:
    index: int
    kind: str
    seed: int
    worst: Dict[str, float] = field(default_factory=dict)

    @property
    def max_error(self) -> float:
        return max(self.worst.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_error <= TOLERANCE

    def to_row(self) -> Dict[str, object]:
        return {"case": self.index, "kind": self.kind, "seed": self.seed, "max_rel_error": self.max_error, "passed": self.passed}


@dataclass
class GradCheckSummary:
    cases: List[GradCheckCase] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> List[GradCheckCase]:
        return [c for c in self.cases if not c.passed]

    def rows(self) -> List[Dict[str, object]]:
        return [c.to_row() for c in self.cases]

    def by_kind(self) -> Dict[str, Dict[str, int]]:
        table: Dict[str, Dict[str, int]] = {}
        for c in self.cases:
            entry = table.setdefault(c.kind, {"passed": 0, "failed": 0})
            entry["passed" if c.passed else "failed"] += 1
        return table


def _projection(rng: np.random.Generator, shape) -> np.ndarray:
    """Pesos fixos para reduzir uma saída a escalar sem simetrias acidentais"""
    return rng.normal(size=shape)


def _random_spec(rng: np.random.Generator, in_width: int = None, out_width: int = None, bias: bool = None) -> MlpSpec:
    depth = int(rng.integers(1, 4))
    widths = [in_width or int(rng.integers(1, 5))]
    widths += [int(rng.integers(1, 5)) for _ in range(depth - 1)]
    widths.append(out_width or int(rng.integers(1, 4)))
    acts = tuple(str(rng.choice(ACTIVATIONS)) for _ in range(depth))
    return MlpSpec(tuple(widths), acts, bool(rng.integers(0, 2)) if bias is None else bias)


def _mlp_case(rng: np.random.Generator) -> Case:
    spec = _random_spec(rng)
    store = ParameterStore()
    store.add_group("net", init_mlp(spec, rng))
    if spec.bias:
        for name in store.names():
            if name.startswith("net.b"):
                store.params[name][:] = rng.normal(scale=0.3, size=store[name].shape)
    x = rng.normal(size=(3, spec.in_width))
    r = _projection(rng, (3, spec.out_width))

    def loss(tape: Tape, params: Dict[str, Value]) -> Value:
        out = mlp_forward(spec, store.group(params, "net"), tape.constant(x))
        return sum_op(mul(out, r))

    return store, loss


def _hyper_fg_case(rng: np.random.Generator) -> Case:
    g_spec = _random_spec(rng, bias=bool(rng.integers(0, 2)))
    f_spec = _random_spec(rng, out_width=g_spec.num_params())
    store = ParameterStore()
    store.add_group("f", init_mlp(f_spec, rng))
    z = rng.normal(size=(4, f_spec.in_width))
    x = rng.normal(size=(4, g_spec.in_width))
    r = _projection(rng, (4, g_spec.out_width))

    def loss(tape: Tape, params: Dict[str, Value]) -> Value:
        theta = mlp_forward(f_spec, store.group(params, "f"), tape.constant(z))
        return sum_op(mul(dynamic_mlp_forward(g_spec, theta, tape.constant(x)), r))

    return store, loss


def _taylor_case(rng: np.random.Generator) -> Case:
    q = int(rng.integers(0, 12))
    store = ParameterStore()
    store.add("p", rng.uniform(-0.9, 0.9, size=5))
    r = _projection(rng, 5)

    def loss(tape: Tape, params: Dict[str, Value]) -> Value:
        return sum_op(mul(taylor_arctanh_op(params["p"], q), r))

    return store, loss


def _abs_case(rng: np.random.Generator) -> Case:
    # valores longe de 0, onde |x| é diferenciável
    store = ParameterStore()
    store.add("x", rng.choice([-1.0, 1.0], size=6) * rng.uniform(0.1, 2.0, size=6))
    r = _projection(rng, 6)

    def loss(tape: Tape, params: Dict[str, Value]) -> Value:
        return sum_op(mul(tanh_op(abs_val(params["x"])), r))

    return store, loss


def _small_graph(rng: np.random.Generator):
    name = str(rng.choice(["REPETITION_3_1", "HAMMING_7_4"]))
    return build(code_loader.load(name))


def _hyper_decoder_case(rng: np.random.Generator) -> Case:
    graph = _small_graph(rng)
    config = DecodeConfig(
        iterations=int(rng.integers(1, 3)),
        variant="hyper_damped",
        early_stop=False,
        **({"check_update": "taylor", "q": int(rng.integers(1, 6))} if rng.integers(0, 2) else {}),
    )
    dec = HyperDecoder(graph, config, seed=int(rng.integers(0, 2**31)), f_hidden=3, g_hidden=3, f_layers=2, g_layers=2)
    # c longe das bordas, onde o recorte não interfere nas diferenças finitas
    dec.store.params["damping"][:] = rng.uniform(0.1, 0.9, size=1)
    llr = rng.normal(loc=1.0, scale=1.0, size=(2, graph.num_vars))
    targets = np.zeros_like(llr, dtype=np.uint8)

    def loss(tape: Tape, params: Dict[str, Value]) -> Value:
        return multiloss(dec.unroll(tape, params, tape.constant(llr)), targets)

    return dec.store, loss


def _weighted_bp_case(rng: np.random.Generator) -> Case:
    graph = _small_graph(rng)
    store = ParameterStore()
    store.add("w", rng.uniform(0.5, 1.5, size=graph.num_edges))
    dec = BPDecoder(graph, DecodeConfig(iterations=int(rng.integers(1, 4)), variant="weighted", early_stop=False), store)
    llr = rng.normal(loc=1.0, scale=1.0, size=(2, graph.num_vars))
    targets = np.zeros_like(llr, dtype=np.uint8)

    def loss(tape: Tape, params: Dict[str, Value]) -> Value:
        return multiloss(dec.unroll(tape, params, tape.constant(llr)), targets)

    return store, loss


def _hyper_gin_case(rng: np.random.Generator) -> Case:
    model = GinModel("hyper_gin", hidden=2, iterations=2, f_hidden=2, g_hidden=2, seed=int(rng.integers(0, 2**31)))
    model.store.params["damping"][:] = rng.uniform(0.1, 0.9, size=1)
    model.store.params["eps0"][:] = rng.normal(scale=0.2, size=1)
    graphs = [cycle_graph(int(rng.integers(3, 6))), path_graph(int(rng.integers(3, 6)))]

    def loss(tape: Tape, params: Dict[str, Value]) -> Value:
        return classification_loss(model, tape, params, graphs)

    return model.store, loss


BUILDERS: Dict[str, Callable[[np.random.Generator], Case]] = {
    "mlp": _mlp_case,
    "hyper_fg": _hyper_fg_case,
    "taylor": _taylor_case,
    "abs": _abs_case,
    "hyper_decoder": _hyper_decoder_case,
    "weighted_bp": _weighted_bp_case,
    "hyper_gin": _hyper_gin_case,
}


def run_gradcheck(num_cases: int = 100, seed: int = 0, max_coords: int = 6, h: float = 1e-5) -> GradCheckSummary:
    """
    Roda `num_cases` verificações, alternando entre os tipos de KINDS

    Returns:
        GradCheckSummary; passed é True somente se todos os casos ficam abaixo de TOLERANCE
    """
    summary = GradCheckSummary()
    for index in range(num_cases):
        kind = KINDS[index % len(KINDS)]
        case_seed = int(np.random.SeedSequence([seed, index]).generate_state(1)[0])
        rng = np.random.default_rng(case_seed)
        store, loss = BUILDERS[kind](rng)
        case = GradCheckCase(index=index, kind=kind, seed=case_seed)
        case.worst = finite_difference_check(loss, store, h=h, max_coords=max_coords, rng=rng, floor=FLOOR)
        summary.cases.append(case)
        if not case.passed:
            log("GRADCHECK", f"✗ caso {index} ({kind}): erro relativo {case.max_error:.2e}")

    status = "✓" if summary.passed else "✗"
    log("GRADCHECK", f"{status} {num_cases - len(summary.failures)}/{num_cases} casos dentro de {TOLERANCE:g}")
    return summary
