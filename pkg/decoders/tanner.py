from dataclasses import dataclass
from typing import List, Sequence, Tuple
import numpy as np
from codes.parity_check import ParityCheckMatrix


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """
    Grafo bipartido de H com tabelas de vizinhos extrínsecos pré-computadas

    Arestas são ids inteiros densos na ordem de varredura por linhas de H. As tabelas
    `*_table` são versões retangulares das listas, preenchidas com o id `num_edges`
    (posição de preenchimento usada por `autodiff.tape.gather(..., fill=...)`).
    """

    H: ParityCheckMatrix
    edges: np.ndarray            # (E, 2): (check, var)
    var_edges: Tuple[np.ndarray, ...]
    check_edges: Tuple[np.ndarray, ...]
    extrinsic_var: Tuple[np.ndarray, ...]
    extrinsic_check: Tuple[np.ndarray, ...]
    ext_var_table: np.ndarray    # (E, max(dv_max - 1, 1))
    ext_check_table: np.ndarray  # (E, dc_max - 1)
    var_table: np.ndarray        # (n, dv_max)

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def num_vars(self) -> int:
        return self.H.num_vars

    @property
    def num_checks(self) -> int:
        return self.H.num_checks

    @property
    def edge_check(self) -> np.ndarray:
        return self.edges[:, 0]

    @property
    def edge_var(self) -> np.ndarray:
        return self.edges[:, 1]


def _pad(lists: Sequence[np.ndarray], width: int, pad: int) -> np.ndarray:
    table = np.full((len(lists), width), pad, dtype=np.int64)
    for i, ids in enumerate(lists):
        table[i, :len(ids)] = ids
    return table


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build(H: ParityCheckMatrix) -> TannerGraph:
    """Constrói o grafo de Tanner (determinístico: mesma H, mesma ordem de arestas)"""
    checks, variables = np.nonzero(H.entries)  # varredura por linhas
    edges = np.stack([checks, variables], axis=1).astype(np.int64)
    num_edges = edges.shape[0]

    var_edges = tuple(_readonly(np.nonzero(variables == v)[0]) for v in range(H.num_vars))
    check_edges = tuple(_readonly(np.nonzero(checks == c)[0]) for c in range(H.num_checks))

    extrinsic_var = tuple(
        _readonly(var_edges[variables[e]][var_edges[variables[e]] != e]) for e in range(num_edges)
    )
    extrinsic_check = tuple(
        _readonly(check_edges[checks[e]][check_edges[checks[e]] != e]) for e in range(num_edges)
    )

    dv_max = max(len(ids) for ids in var_edges)
    dc_max = max(len(ids) for ids in check_edges)

    return TannerGraph(
        H=H,
        edges=_readonly(edges),
        var_edges=var_edges,
        check_edges=check_edges,
        extrinsic_var=extrinsic_var,
        extrinsic_check=extrinsic_check,
        # largura mínima 1 mantém a entrada de f não vazia em códigos com variáveis de grau 1
        ext_var_table=_readonly(_pad(extrinsic_var, max(dv_max - 1, 1), num_edges)),
        ext_check_table=_readonly(_pad(extrinsic_check, dc_max - 1, num_edges)),
        var_table=_readonly(_pad(var_edges, dv_max, num_edges)),
    )


def gather(messages, indices: Sequence[int]) -> np.ndarray:
    """
    Valores das mensagens nos ids pedidos, na ordem da tabela

    Aceita um MessageState (usa `.x`) ou um array indexado por aresta no último eixo.

    Raises:
        IndexError: id de aresta fora do intervalo
    """
    x = getattr(messages, "x", messages)
    x = np.asarray(getattr(x, "data", x))
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size and (indices.min() < 0 or indices.max() >= x.shape[-1]):
        raise IndexError(f"Id de aresta fora do intervalo 0..{x.shape[-1] - 1}")
    return x[..., indices]


def degree_profile(graph: TannerGraph) -> Tuple[List[int], List[int]]:
    """Sequências de graus ordenadas (variáveis, verificações), invariantes por isomorfismo"""
    return (
        sorted(len(e) for e in graph.var_edges),
        sorted(len(e) for e in graph.check_edges),
    )
