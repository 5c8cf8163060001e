from dataclasses import dataclass, field
from fractions import Fraction
from typing import Set, Tuple
import numpy as np

# Vetores binários são arrays uint8 com valores em {0,1}
BitVector = np.ndarray

MAX_ENUMERATION_VARS = 24


def gf2_rref(matrix: np.ndarray) -> Tuple[np.ndarray, list]:
    """
    Forma escalonada reduzida sobre GF(2) por eliminação gaussiana

    Args:
        matrix: matriz binária (m x n)

    Returns:
        (R, pivots): R com apenas as linhas não nulas, e a lista de colunas pivô
    """
    R = np.array(matrix, dtype=np.uint8) % 2
    rows, cols = R.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        candidates = np.nonzero(R[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot = row + candidates[0]
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
        # zera a coluna em todas as outras linhas
        mask = R[:, col].astype(bool)
        mask[row] = False
        R[mask] ^= R[row]
        pivots.append(col)
        row += 1
    return R[:row], pivots


def gf2_rank(matrix: np.ndarray) -> int:
    """Posto sobre GF(2)"""
    return len(gf2_rref(matrix)[1])


@dataclass(frozen=True, eq=False)
class ParityCheckMatrix:
    """Matriz de verificação de paridade H (m x n) de um código linear binário"""

    entries: np.ndarray
    name: str = "unnamed"
    rank: int = field(init=False)

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.ndim != 2 or entries.size == 0:
            raise ValueError("H deve ser uma matriz 2D não vazia")
        if not np.isin(entries, (0, 1)).all():
            raise ValueError("H deve conter apenas 0 e 1")
        entries = entries.astype(np.uint8)
        if (entries.sum(axis=1) == 0).any():
            raise ValueError("Toda linha de H precisa de pelo menos um 1")
        if (entries.sum(axis=0) == 0).any():
            raise ValueError("Toda coluna de H precisa de pelo menos um 1")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "rank", gf2_rank(entries))

    @property
    def num_checks(self) -> int:
        return self.entries.shape[0]

    @property
    def num_vars(self) -> int:
        return self.entries.shape[1]

    @property
    def k(self) -> int:
        """Dimensão do código, sempre derivada do posto (nunca dos metadados do arquivo)"""
        return self.num_vars - self.rank

    @property
    def code_rate(self) -> Fraction:
        return Fraction(self.k, self.num_vars)

    @property
    def num_edges(self) -> int:
        return int(self.entries.sum())

    def __repr__(self) -> str:
        return f"ParityCheckMatrix(name={self.name!r}, m={self.num_checks}, n={self.num_vars}, k={self.k})"


def syndrome(H: ParityCheckMatrix, v: np.ndarray) -> np.ndarray:
    """
    Síndrome H·vᵀ sobre GF(2)

    Aceita um vetor (n,) ou um lote (B, n); devolve (m,) ou (B, m).
    """
    v = np.asarray(v)
    if v.shape[-1] != H.num_vars:
        raise ValueError(f"Comprimento {v.shape[-1]} incompatível com n={H.num_vars}")
    return ((v.astype(np.int64) @ H.entries.T.astype(np.int64)) % 2).astype(np.uint8)


def null_space_basis(H: ParityCheckMatrix) -> np.ndarray:
    """Base (k x n) do espaço nulo de H sobre GF(2)"""
    R, pivots = gf2_rref(H.entries)
    n = H.num_vars
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            basis[i, p] = R[row, f]
    return basis


def enumerate_codewords(H: ParityCheckMatrix) -> Set[Tuple[int, ...]]:
    """
    Enumera todas as 2^k palavras-código (oráculo para códigos pequenos)

    Raises:
        ValueError: se n > 24 (explosão exponencial)
    """
    if H.num_vars > MAX_ENUMERATION_VARS:
        raise ValueError(
            f"Enumeração recusada: n={H.num_vars} excede o limite de {MAX_ENUMERATION_VARS}"
        )
    basis = null_space_basis(H)
    k = basis.shape[0]
    if k == 0:
        return {tuple([0] * H.num_vars)}
    messages = ((np.arange(2 ** k)[:, None] >> np.arange(k)[None, :]) & 1).astype(np.int64)
    words = (messages @ basis.astype(np.int64)) % 2
    return {tuple(int(b) for b in w) for w in words}


def to_systematic(H: ParityCheckMatrix) -> ParityCheckMatrix:
    """
    Remove linhas dependentes e leva H à forma escalonada reduzida

    As colunas não são permutadas, então o código é exatamente o mesmo;
    apenas as verificações redundantes de uma H sobrecompleta desaparecem.
    """
    R, _ = gf2_rref(H.entries)
    return ParityCheckMatrix(R, name=f"{H.name}-systematic")
