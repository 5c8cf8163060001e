"""
GIN-ε e hyper-GIN

No hyper-GIN, a cada iteração k ≥ 1 uma rede f gera, por nó, os pesos de g a partir de
z_v = c·h⁰_v + (1-c)·(h^(k-1)_v + Σ_{u∈N(v)} h^(k-1)_u); então h^(k)_v = g(z_v; θ_g).
Diferente do decodificador, f recebe z_v sem valor absoluto. A leitura é a mesma do
GIN: concatenação das somas por iteração seguida de um MLP.
"""
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union
import numpy as np
from autodiff.nn import MlpSpec, dynamic_mlp_forward, init_mlp, mlp_forward
from autodiff.optim import ParameterStore
from autodiff.tape import Tape, Value, add, concat, matmul, mul
from config.settings import log
from gnn.graphs import GraphBatch, GraphInstance, collate

GinKind = Literal["gin", "hyper_gin", "hyper_gin_undamped"]
GraphLike = Union[GraphInstance, GraphBatch, Sequence[GraphInstance]]


def as_batch(graphs: GraphLike) -> GraphBatch:
    if isinstance(graphs, GraphBatch):
        return graphs
    if isinstance(graphs, GraphInstance):
        return collate([graphs])
    return collate(list(graphs))


class GinModel:
    """
    Classificador de grafos por passagem de mensagens

    Args:
        kind: 'gin' (MLP por iteração), 'hyper_gin' (f gera g, com amortecimento c)
            ou 'hyper_gin_undamped' (c fixo em 0)
        feature_dim: dimensão das features de entrada
        hidden: largura dos estados h_v
        iterations: K
        learn_eps: ε^(k) aprendidos (GIN-ε) ou fixos em 0
    """

    def __init__(
        self,
        kind: GinKind = "hyper_gin",
        feature_dim: int = 1,
        hidden: int = 16,
        iterations: int = 3,
        f_hidden: int = 16,
        g_hidden: int = 16,
        learn_eps: bool = True,
        seed: int = 0,
        store: Optional[ParameterStore] = None,
    ):
        if kind not in ("gin", "hyper_gin", "hyper_gin_undamped"):
            raise ValueError(f"Modelo '{kind}' não suportado")
        if iterations < 1:
            raise ValueError("iterations deve ser >= 1")
        self.kind = kind
        self.feature_dim = feature_dim
        self.hidden = hidden
        self.iterations = iterations
        self.learn_eps = learn_eps

        self.mlp0_spec = MlpSpec.uniform([feature_dim, hidden, hidden], "tanh", bias=True)
        self.step_spec = MlpSpec.uniform([hidden, hidden, hidden], "tanh", bias=True)
        # g: duas camadas ocultas; f: três camadas ocultas, saída linear com um valor por parâmetro de g
        self.g_spec = MlpSpec.uniform([hidden, g_hidden, g_hidden, hidden], "tanh")
        self.f_spec = MlpSpec.uniform([hidden, f_hidden, f_hidden, f_hidden, self.g_spec.num_params()], "tanh", last="linear")
        self.head_spec = MlpSpec.uniform([iterations * hidden, hidden, 2], "tanh", bias=True, last="linear")

        if store is not None:
            self.store = store
            return
        rng = np.random.default_rng(seed)
        self.store = ParameterStore()
        self.store.add_group("mlp0", init_mlp(self.mlp0_spec, rng))
        if learn_eps:
            # passos da hiper-rede não usam ε; só h^(0) tem ε
            for k in range(iterations + 1 if kind == "gin" else 1):
                self.store.add(f"eps{k}", np.zeros(1))
        if kind == "gin":
            for k in range(1, iterations + 1):
                self.store.add_group(f"mlp{k}", init_mlp(self.step_spec, rng))
        else:
            self.store.add_group("f", init_mlp(self.f_spec, rng))
            if kind == "hyper_gin":
                self.store.add("damping", rng.uniform(0.0, 1.0, size=1), bounds=(0.0, 1.0))
        self.store.add_group("head", init_mlp(self.head_spec, rng))
        log("GIN", f"✓ {kind}: K={iterations}, largura {hidden}, {self.store.num_params()} parâmetros")

    @property
    def damped(self) -> bool:
        return self.kind == "hyper_gin"

    def eps(self, params: Dict[str, Value], tape: Tape, k: int) -> Value:
        return params[f"eps{k}"] if self.learn_eps else tape.constant(np.zeros(1))

    def forward(self, tape: Tape, params: Dict[str, Value], batch: GraphBatch) -> Tuple[Value, List[Value]]:
        """
        Returns:
            (scores (G, 2), [h^(0), h^(1), ..., h^(K)])
        """
        h0 = gin_step_0(self, params, batch, tape)
        states = [h0]
        for k in range(1, self.iterations + 1):
            if self.kind == "gin":
                states.append(gin_step(self, params, batch, states[-1], k, tape))
            else:
                states.append(hyper_gin_step(self, params, batch, states[-1], h0, k))
        return readout(self, params, batch, states), states

    def node_states(self, graphs: GraphLike) -> List[np.ndarray]:
        tape = Tape(record=False)
        _, states = self.forward(tape, self.store.bind(tape), as_batch(graphs))
        return [h.data for h in states]

    def scores(self, graphs: GraphLike) -> np.ndarray:
        tape = Tape(record=False)
        scores, _ = self.forward(tape, self.store.bind(tape), as_batch(graphs))
        return scores.data

    def predict(self, graphs: GraphLike) -> np.ndarray:
        return np.argmax(self.scores(graphs), axis=1)


def _aggregate(batch: GraphBatch, h: Value) -> Value:
    """Σ_{u∈N(v)} h_u para todos os nós do lote"""
    return matmul(h.tape.constant(batch.adjacency), h)


def gin_step_0(model: GinModel, params: Dict[str, Value], graph: GraphLike, tape: Optional[Tape] = None) -> Value:
    """h_v^(0) = MLP^(0)((1+ε^(0))·x_v + Σ_{u∈N(v)} x_u)"""
    batch = as_batch(graph)
    tape = tape or next(iter(params.values())).tape
    x = tape.constant(batch.features)
    z = mul(1.0 + model.eps(params, tape, 0), x) + _aggregate(batch, x)
    return mlp_forward(model.mlp0_spec, model.store.group(params, "mlp0"), z)


def gin_step(model: GinModel, params: Dict[str, Value], graph: GraphLike, h_prev: Value, k: int, tape: Tape) -> Value:
    """GIN-ε: h_v^(k) = MLP^(k)((1+ε^(k))·h_v^(k-1) + Σ h_u^(k-1))"""
    batch = as_batch(graph)
    z = mul(1.0 + model.eps(params, tape, k), h_prev) + _aggregate(batch, h_prev)
    return mlp_forward(model.step_spec, model.store.group(params, f"mlp{k}"), z)


def hyper_gin_step(model: GinModel, params: Dict[str, Value], graph: GraphLike, h_prev: Value, h0: Value, k: int) -> Value:
    """
    Passo k ≥ 1 do hyper-GIN

    z_v = c·h⁰_v + (1-c)·(h^(k-1)_v + Σ h^(k-1)_u); θ_g = f(z_v); h^(k)_v = g(z_v; θ_g)
    """
    if k < 1:
        raise ValueError("hyper_gin_step exige k >= 1")
    batch = as_batch(graph)
    aggregated = add(h_prev, _aggregate(batch, h_prev))
    if model.damped:
        c = params["damping"]
        z = c * h0 + (1.0 - c) * aggregated
    else:
        z = aggregated
    theta = mlp_forward(model.f_spec, model.store.group(params, "f"), z)
    return dynamic_mlp_forward(model.g_spec, theta, z)


def graph_embedding(graph: GraphLike, states: Sequence[Value]) -> Value:
    """h_G = [Σ_v h^(1)_v, ..., Σ_v h^(K)_v] por grafo, shape (G, K·largura)"""
    batch = as_batch(graph)
    if batch.num_nodes == 0:
        raise ValueError("Leitura exige pelo menos um nó")
    if len(states) < 2:
        raise ValueError("Leitura exige pelo menos uma iteração completa")
    pool = states[0].tape.constant(batch.pooling)
    return concat([matmul(pool, h) for h in states[1:]], axis=-1)


def readout(model: GinModel, params: Dict[str, Value], graph: GraphLike, states: Sequence[Value]) -> Value:
    """Scores de classe: MLP M aplicado a h_G"""
    return mlp_forward(model.head_spec, model.store.group(params, "head"), graph_embedding(graph, states))
