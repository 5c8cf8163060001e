"""
Belief propagation soma-produto (clássico e ponderado) sobre um TannerGraph

Passos ímpares (variável -> verificação) ficam no domínio tanh; passos pares
(verificação -> variável) devolvem LLRs via 2·arctanh exato ou a série de Taylor.
Agendamento por inundação: todas as arestas são atualizadas simultaneamente.
"""
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional
import numpy as np
from pydantic import BaseModel, Field, model_validator
from autodiff.optim import ParameterStore
from autodiff.tape import (
    Tape,
    Value,
    arctanh_op,
    clip_op,
    gather,
    mul,
    prod_last,
    scale,
    sum_op,
    tanh_op,
    taylor_arctanh_op,
)
from codes.parity_check import syndrome
from config.settings import settings
from decoders.guardrails import InputGuardrails
from decoders.tanner import TannerGraph

# |p| é recortado a este valor antes do arctanh exato; o caminho de Taylor não recorta
ATANH_CLIP = 1.0 - 1e-9

Variant = Literal["plain", "weighted", "hyper", "hyper_damped"]
CheckUpdate = Literal["exact_arctanh", "taylor"]


class DecodeConfig(BaseModel):
    """Configuração de decodificação"""

    iterations: int = Field(default_factory=lambda: settings.ITERATIONS, ge=1, description="Pares ímpar/par")
    check_update: CheckUpdate = Field(default="exact_arctanh")
    q: Optional[int] = Field(default=None, ge=0, description="Grau da série de Taylor (só com taylor)")
    variant: Variant = Field(default="plain")
    early_stop: bool = Field(default=True, description="Para cada frame quando a síndrome zera")

    @model_validator(mode="after")
    def _q_iff_taylor(self):
        if self.check_update == "taylor" and self.q is None:
            raise ValueError("check_update='taylor' exige q")
        if self.check_update != "taylor" and self.q is not None:
            raise ValueError("q só é permitido com check_update='taylor'")
        return self


@dataclass
class MessageState:
    """Mensagens por aresta x^j (B, E), paridade da última meia-iteração e x⁰ em cache"""

    x: Value
    parity: int
    x0: Optional[Value] = None


@dataclass
class DecodeResult:
    bits: np.ndarray        # (B, n) uint8
    marginals: np.ndarray   # (B, n)
    converged: np.ndarray   # (B,) bool
    iterations: np.ndarray  # (B,) pares executados até a parada

    def squeeze(self) -> "DecodeResult":
        """Versão de um único frame"""
        return DecodeResult(self.bits[0], self.marginals[0], self.converged[0], self.iterations[0])


def initial_state(tape: Tape, graph: TannerGraph, batch: int) -> MessageState:
    """Estado par inicial com todas as mensagens nulas"""
    return MessageState(tape.constant(np.zeros((batch, graph.num_edges))), parity=0)


def var_to_check(graph: TannerGraph, llr: Value, prev: MessageState, weights: Optional[Value] = None) -> MessageState:
    """
    x_e = tanh(½(l_v + Σ_{e'∈N(v)∖{e}} w_e'·x_e'))

    Raises:
        ValueError: se `prev` não vier de um passo par
    """
    if prev.parity != 0:
        raise ValueError("var_to_check exige um estado par")
    weighted = mul(prev.x, weights) if weights is not None else prev.x
    extrinsic = sum_op(gather(weighted, graph.ext_var_table, fill=0.0), axis=-1)
    lv = gather(llr, graph.edge_var)
    x = tanh_op(scale(lv + extrinsic, 0.5))
    return MessageState(x, parity=1, x0=prev.x0)


def check_to_var(graph: TannerGraph, prev: MessageState, config: DecodeConfig) -> MessageState:
    """
    x_e = 2·arctanh(p) ou 2·Σ_{m≤q} p^(2m+1)/(2m+1), p = Π_{e'∈N(c)∖{e}} x_e'

    Verificações de grau 1 têm produto vazio p = 1, que o recorte mantém finito.
    """
    if prev.parity != 1:
        raise ValueError("check_to_var exige um estado ímpar")
    p = prod_last(gather(prev.x, graph.ext_check_table, fill=1.0))
    if config.check_update == "taylor":
        x = scale(taylor_arctanh_op(p, config.q), 2.0)
    else:
        x = scale(arctanh_op(clip_op(p, -ATANH_CLIP, ATANH_CLIP)), 2.0)
    return MessageState(x, parity=0, x0=prev.x0)


def marginalize(graph: TannerGraph, llr: Value, state: MessageState) -> Value:
    """o_v = l_v + Σ_{e∈N(v)} x_e (leitura padrão do BP)"""
    if state.parity != 0:
        raise ValueError("marginalize exige um estado par")
    return llr + sum_op(gather(state.x, graph.var_table, fill=0.0), axis=-1)


def hard_decision(o) -> np.ndarray:
    """bit 0 se o_v >= 0 (empate vai para 0), bit 1 se o_v < 0"""
    o = o.data if isinstance(o, Value) else np.asarray(o)
    return (o < 0).astype(np.uint8)


class MessagePassingDecoder:
    """
    Laço comum a todos os decodificadores por passagem de mensagens

    As subclasses definem apenas o passo ímpar; o passo par, a leitura e a parada
    antecipada são sempre os do BP.
    """

    variant: str = "plain"

    def __init__(self, graph: TannerGraph, config: DecodeConfig, store: Optional[ParameterStore] = None):
        self.graph = graph
        self.config = config
        self.store = store if store is not None else ParameterStore()
        self.input_guardrails = InputGuardrails()

    def prepare(self, tape: Tape, params: Dict[str, Value], llr: Value) -> MessageState:
        return initial_state(tape, self.graph, llr.shape[0])

    def odd_step(self, params: Dict[str, Value], llr: Value, state: MessageState) -> MessageState:
        raise NotImplementedError

    def unroll(self, tape: Tape, params: Dict[str, Value], llr: Value, iterations: Optional[int] = None) -> List[Value]:
        """Desenrola um número fixo de pares (sem parada antecipada) e devolve as marginais de cada par"""
        state = self.prepare(tape, params, llr)
        marginals = []
        for _ in range(iterations or self.config.iterations):
            state = self.odd_step(params, llr, state)
            state = check_to_var(self.graph, state, self.config)
            marginals.append(marginalize(self.graph, llr, state))
        return marginals

    def decode(self, llr: np.ndarray, iterations: Optional[int] = None, early_stop: Optional[bool] = None) -> DecodeResult:
        """
        Decodifica um frame (n,) ou um lote (B, n) de LLRs

        Com parada antecipada, cada frame congela sua decisão no primeiro par cuja
        síndrome é nula; o laço termina quando todos convergiram.
        """
        validation = self.input_guardrails.validate_llr(llr, self.graph.num_vars)
        if not validation["valid"]:
            raise ValueError(validation["message"])
        llr_arr = validation["sanitized"]
        single = llr_arr.ndim == 1
        if single:
            llr_arr = llr_arr[None, :]

        early_stop = self.config.early_stop if early_stop is None else early_stop
        iterations = iterations or self.config.iterations
        batch = llr_arr.shape[0]

        tape = Tape(record=False)
        params = self.store.bind(tape)
        llr_v = tape.constant(llr_arr)
        state = self.prepare(tape, params, llr_v)

        bits = hard_decision(llr_arr)
        marginals = llr_arr.copy()
        done = np.zeros(batch, dtype=bool)
        used = np.zeros(batch, dtype=np.int64)
        for it in range(iterations):
            state = self.odd_step(params, llr_v, state)
            state = check_to_var(self.graph, state, self.config)
            o = marginalize(self.graph, llr_v, state).data
            active = ~done if early_stop else np.ones(batch, dtype=bool)
            bits[active] = hard_decision(o[active])
            marginals[active] = o[active]
            used[active] = it + 1
            valid = ~syndrome(self.graph.H, bits).any(axis=1)
            done = done | valid if early_stop else valid
            if early_stop and done.all():
                break

        result = DecodeResult(bits, marginals, done, used)
        return result.squeeze() if single else result


class BPDecoder(MessagePassingDecoder):
    """BP clássico (w ≡ 1) ou ponderado (pesos w_e aprendidos por aresta)"""

    def __init__(self, graph: TannerGraph, config: DecodeConfig, store: Optional[ParameterStore] = None):
        super().__init__(graph, config, store)
        self.variant = config.variant
        if self.variant not in ("plain", "weighted"):
            raise ValueError(f"BPDecoder não suporta a variante '{self.variant}'")
        if self.variant == "weighted" and "w" not in self.store:
            self.store.add("w", np.ones(graph.num_edges))

    def odd_step(self, params: Dict[str, Value], llr: Value, state: MessageState) -> MessageState:
        return var_to_check(self.graph, llr, state, params.get("w") if self.variant == "weighted" else None)


def decode(graph: TannerGraph, llr: np.ndarray, config: DecodeConfig, weights: Optional[np.ndarray] = None) -> DecodeResult:
    """Atalho funcional: BP clássico, ou ponderado quando `weights` é dado"""
    if weights is None:
        return BPDecoder(graph, config.model_copy(update={"variant": "plain"})).decode(llr)
    store = ParameterStore()
    store.add("w", weights)
    return BPDecoder(graph, config.model_copy(update={"variant": "weighted"}), store).decode(llr)
