"""
Decodificador por hiper-rede: uma rede f gera, a cada iteração ímpar, os pesos θ_g
da rede g que calcula as mensagens variável -> verificação.

Na variante amortecida, f e g recebem c·x⁰ + (1-c)·x^(j-1) em vez de x^(j-1),
onde x⁰ é a primeira mensagem do frame e c ∈ [0, 1] é aprendido.
"""
from typing import Dict, Literal, Optional
import numpy as np
from autodiff.nn import MlpSpec, dynamic_mlp_forward, init_mlp, mlp_forward
from autodiff.optim import ParameterStore
from autodiff.tape import (
    Tape,
    Value,
    abs_val,
    broadcast_to,
    concat,
    gather,
    mean_op,
    reshape,
)
from config.settings import log
from decoders.bp import (
    DecodeConfig,
    MessagePassingDecoder,
    MessageState,
    check_to_var,
    initial_state,
    var_to_check,
)
from decoders.tanner import TannerGraph

X0Mode = Literal["half", "pair"]
ThetaScope = Literal["edge", "iteration"]


def default_g_spec(graph: TannerGraph, hidden: int = 16, layers: int = 2) -> MlpSpec:
    """g: entrada [l_v, mensagens extrínsecas preenchidas], saída tanh de largura 1"""
    width = graph.ext_var_table.shape[1] + 1
    return MlpSpec.uniform([width] + [hidden] * (layers - 1) + [1], "tanh")


def default_f_spec(graph: TannerGraph, g_spec: MlpSpec, hidden: int = 32, layers: int = 4) -> MlpSpec:
    """f: entrada |mensagens extrínsecas|, saída com um valor por parâmetro de g"""
    width = graph.ext_var_table.shape[1]
    return MlpSpec.uniform([width] + [hidden] * (layers - 1) + [g_spec.num_params()], "tanh", last="linear")


def compute_x0(graph: TannerGraph, llr: Value, mode: X0Mode = "half", config: Optional[DecodeConfig] = None) -> Value:
    """
    Primeira mensagem do frame

    'half': um meio-passo ímpar do BP clássico a partir do estado nulo, x⁰ = tanh(l_v/2).
    'pair': um par completo ímpar + par (exige `config` para o passo par).
    """
    tape = llr.tape
    state = var_to_check(graph, llr, initial_state(tape, graph, llr.shape[0]))
    if mode == "pair":
        if config is None:
            raise ValueError("x0_mode='pair' exige a configuração do passo par")
        state = check_to_var(graph, state, config)
    return state.x


def clip_damping(store: ParameterStore, name: str = "damping") -> ParameterStore:
    """Recorta o fator de amortecimento bruto para [0, 1]"""
    np.clip(store.params[name], 0.0, 1.0, out=store.params[name])
    return store


class HyperDecoder(MessagePassingDecoder):
    """
    Decodificador BP com passo ímpar gerado por hiper-rede

    Args:
        graph: grafo de Tanner do código
        config: configuração de decodificação (variant 'hyper' ou 'hyper_damped')
        store: parâmetros existentes (checkpoint); se None, inicializa com `seed`
        f_spec, g_spec: especificações de f e g (defaults: f com 4 camadas, g com 2, tanh, sem bias)
        x0_mode: interpretação de "uma iteração" para x⁰
        theta_scope: 'edge' gera θ_g por aresta; 'iteration' aplica f à média de |u| e compartilha θ_g
    """

    def __init__(
        self,
        graph: TannerGraph,
        config: DecodeConfig,
        store: Optional[ParameterStore] = None,
        f_spec: Optional[MlpSpec] = None,
        g_spec: Optional[MlpSpec] = None,
        x0_mode: X0Mode = "half",
        theta_scope: ThetaScope = "edge",
        seed: int = 0,
        f_hidden: int = 32,
        g_hidden: int = 16,
        f_layers: int = 4,
        g_layers: int = 2,
    ):
        super().__init__(graph, config, store)
        if config.variant not in ("hyper", "hyper_damped"):
            raise ValueError(f"HyperDecoder não suporta a variante '{config.variant}'")
        self.variant = config.variant
        self.damped = config.variant == "hyper_damped"
        self.x0_mode = x0_mode
        self.theta_scope = theta_scope

        self.g_spec = g_spec or default_g_spec(graph, g_hidden, g_layers)
        self.f_spec = f_spec or default_f_spec(graph, self.g_spec, f_hidden, f_layers)
        ext_width = graph.ext_var_table.shape[1]
        if self.f_spec.out_width != self.g_spec.num_params():
            raise ValueError(
                f"Largura de saída de f ({self.f_spec.out_width}) difere do número de parâmetros de g ({self.g_spec.num_params()})"
            )
        if self.g_spec.in_width != ext_width + 1 or self.f_spec.in_width != ext_width:
            raise ValueError(
                f"Entradas incompatíveis: f espera {self.f_spec.in_width} e g {self.g_spec.in_width}; "
                f"o grafo fornece {ext_width} mensagens extrínsecas"
            )

        if not any(name.startswith("f.") for name in self.store.names()):
            rng = np.random.default_rng(seed)
            self.store.add_group("f", init_mlp(self.f_spec, rng))
            # c ~ U[0, 1], recortado após cada passo do otimizador
            self.store.add("damping", rng.uniform(0.0, 1.0, size=1), bounds=(0.0, 1.0))
            log("HYPER", f"✓ f {self.f_spec.widths} -> θ_g com {self.g_spec.num_params()} parâmetros")

    @property
    def damping(self) -> float:
        """c efetivo (sempre em [0, 1])"""
        return float(np.clip(self.store["damping"][0], 0.0, 1.0))

    def prepare(self, tape: Tape, params: Dict[str, Value], llr: Value) -> MessageState:
        state = initial_state(tape, self.graph, llr.shape[0])
        state.x0 = compute_x0(self.graph, llr, self.x0_mode, self.config)
        return state

    def odd_step(self, params: Dict[str, Value], llr: Value, state: MessageState) -> MessageState:
        return hyper_odd_update(self, params, llr, state, state.x0, self.damped)


def hyper_odd_update(
    dec: HyperDecoder,
    params: Dict[str, Value],
    llr: Value,
    prev: MessageState,
    x0: Value,
    damped: bool,
) -> MessageState:
    """
    Passo ímpar da hiper-rede

    u = prev (sem amortecimento) ou c·x⁰ + (1-c)·prev; θ_g = f(|u extrínseco|);
    x_e = g(l_v, u extrínseco; θ_g). Posições de preenchimento valem 0, o que as anula
    na primeira camada de f e de g.
    """
    if prev.parity != 0:
        raise ValueError("hyper_odd_update exige um estado par")
    graph = dec.graph
    if damped:
        c = params["damping"]
        u = c * x0 + (1.0 - c) * prev.x
    else:
        u = prev.x

    batch, num_edges = u.shape
    gathered = gather(u, graph.ext_var_table, fill=0.0)        # (B, E, W)
    width = gathered.shape[-1]
    flat = reshape(gathered, (batch * num_edges, width))
    f_params = dec.store.group(params, "f")

    if dec.theta_scope == "edge":
        theta = mlp_forward(dec.f_spec, f_params, abs_val(flat))
    else:
        pooled = mean_op(abs_val(gathered), axis=1)                 # (B, W)
        shared = mlp_forward(dec.f_spec, f_params, pooled)          # (B, P)
        num_params = shared.shape[-1]
        theta = reshape(
            broadcast_to(reshape(shared, (batch, 1, num_params)), (batch, num_edges, num_params)),
            (batch * num_edges, num_params),
        )

    lv = reshape(gather(llr, graph.edge_var), (batch * num_edges, 1))
    g_in = concat([lv, flat], axis=-1)
    x = reshape(dynamic_mlp_forward(dec.g_spec, theta, g_in), (batch, num_edges))
    return MessageState(x, parity=1, x0=prev.x0)


def hyper_decode(dec: HyperDecoder, llr: np.ndarray, iterations: Optional[int] = None, damped: Optional[bool] = None):
    """
    x⁰ uma vez, depois `iterations` pares (passo ímpar da hiper-rede + passo par do BP);
    leitura pelo marginalize + decisão dura do BP

    Returns:
        DecodeResult
    """
    if damped is not None and damped != dec.damped:
        dec = HyperDecoder(
            dec.graph,
            dec.config.model_copy(update={"variant": "hyper_damped" if damped else "hyper"}),
            dec.store,
            f_spec=dec.f_spec,
            g_spec=dec.g_spec,
            x0_mode=dec.x0_mode,
            theta_scope=dec.theta_scope,
        )
    return dec.decode(llr, iterations=iterations)
