from typing import Optional
import numpy as np
from decoders.bp import DecodeResult, hard_decision
from decoders.guardrails import InputGuardrails
from decoders.tanner import TannerGraph


class UncodedDecoder:
    """
    Linha de base sem decodificação: decisão dura direto sobre os LLRs do canal

    Usada pelo harness para a coluna 'uncoded' das varreduras.
    """

    variant = "uncoded"

    def __init__(self, graph: TannerGraph):
        self.graph = graph
        self.store = None

    def decode(self, llr: np.ndarray, iterations: Optional[int] = None, early_stop: Optional[bool] = None) -> DecodeResult:
        validation = InputGuardrails.validate_llr(llr, self.graph.num_vars)
        if not validation["valid"]:
            raise ValueError(validation["message"])
        arr = validation["sanitized"]
        single = arr.ndim == 1
        if single:
            arr = arr[None, :]
        batch = arr.shape[0]
        result = DecodeResult(
            bits=hard_decision(arr),
            marginals=arr.copy(),
            converged=np.ones(batch, dtype=bool),
            iterations=np.zeros(batch, dtype=np.int64),
        )
        return result.squeeze() if single else result
