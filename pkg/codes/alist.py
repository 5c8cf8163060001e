from typing import List, Tuple
import numpy as np
from codes.parity_check import ParityCheckMatrix


class AlistParseError(ValueError):
    """Erro de parsing com o número da linha (1-based) onde o problema foi detectado"""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"linha {line_number}: {message}")


def _numbered_lines(text: str) -> List[Tuple[int, List[str]]]:
    """Divide o texto em linhas não vazias, preservando o número original de cada uma"""
    lines = []
    for number, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if tokens:
            lines.append((number, tokens))
    return lines


def _ints(number: int, tokens: List[str]) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise AlistParseError(number, f"valor não inteiro em {' '.join(tokens)!r}")


def parse_alist(text: str, name: str = "unnamed") -> ParityCheckMatrix:
    """
    Lê uma matriz de paridade no formato alist

    Gramática:
        - linha 1: `n m`
        - linha 2: `max_col_deg max_row_deg`
        - linha 3: graus das n colunas
        - linha 4: graus das m linhas
        - n linhas com os índices (1-based) das linhas de cada coluna, com zeros de preenchimento
        - m linhas com os índices (1-based) das colunas de cada linha, com zeros de preenchimento

    Raises:
        AlistParseError: dimensões, índices ou graus inconsistentes
    """
    lines = _numbered_lines(text)
    if len(lines) < 4:
        last = lines[-1][0] if lines else 1
        raise AlistParseError(last, "cabeçalho alist incompleto")

    number, tokens = lines[0]
    header = _ints(number, tokens)
    if len(header) != 2 or min(header) <= 0:
        raise AlistParseError(number, "esperado 'n m' com inteiros positivos")
    n, m = header

    number, tokens = lines[1]
    max_degrees = _ints(number, tokens)
    if len(max_degrees) != 2:
        raise AlistParseError(number, "esperado 'max_col_deg max_row_deg'")
    max_col_deg, max_row_deg = max_degrees

    number, tokens = lines[2]
    col_degrees = _ints(number, tokens)
    if len(col_degrees) != n:
        raise AlistParseError(number, f"esperados {n} graus de coluna, encontrados {len(col_degrees)}")
    if max(col_degrees) != max_col_deg:
        raise AlistParseError(number, f"grau máximo de coluna {max(col_degrees)} difere do declarado {max_col_deg}")

    number, tokens = lines[3]
    row_degrees = _ints(number, tokens)
    if len(row_degrees) != m:
        raise AlistParseError(number, f"esperados {m} graus de linha, encontrados {len(row_degrees)}")
    if max(row_degrees) != max_row_deg:
        raise AlistParseError(number, f"grau máximo de linha {max(row_degrees)} difere do declarado {max_row_deg}")

    expected = 4 + n + m
    if len(lines) != expected:
        last = lines[-1][0]
        raise AlistParseError(last, f"esperadas {expected} linhas não vazias, encontradas {len(lines)}")

    entries = np.zeros((m, n), dtype=np.uint8)
    for col in range(n):
        number, tokens = lines[4 + col]
        indices = _ints(number, tokens)
        if len(indices) > max_col_deg:
            raise AlistParseError(number, f"coluna {col + 1} tem mais de {max_col_deg} entradas")
        # zeros de preenchimento são aceitos e ignorados
        support = [i for i in indices if i != 0]
        if len(support) != col_degrees[col]:
            raise AlistParseError(number, f"coluna {col + 1}: grau declarado {col_degrees[col]}, lista tem {len(support)}")
        for i in support:
            if not 1 <= i <= m:
                raise AlistParseError(number, f"índice de linha {i} fora do intervalo 1..{m}")
            if entries[i - 1, col]:
                raise AlistParseError(number, f"índice de linha {i} repetido")
            entries[i - 1, col] = 1

    for row in range(m):
        number, tokens = lines[4 + n + row]
        indices = _ints(number, tokens)
        if len(indices) > max_row_deg:
            raise AlistParseError(number, f"linha {row + 1} tem mais de {max_row_deg} entradas")
        support = [j for j in indices if j != 0]
        if len(support) != row_degrees[row]:
            raise AlistParseError(number, f"linha {row + 1}: grau declarado {row_degrees[row]}, lista tem {len(support)}")
        for j in support:
            if not 1 <= j <= n:
                raise AlistParseError(number, f"índice de coluna {j} fora do intervalo 1..{n}")
        if sorted(support) != sorted(np.nonzero(entries[row])[0] + 1):
            raise AlistParseError(number, f"linha {row + 1} inconsistente com as listas de colunas")

    return ParityCheckMatrix(entries, name=name)


def serialize_alist(H: ParityCheckMatrix) -> str:
    """Serializa H no formato alist, com zeros de preenchimento até o grau máximo"""
    entries = H.entries
    col_degrees = entries.sum(axis=0).astype(int)
    row_degrees = entries.sum(axis=1).astype(int)
    max_col, max_row = int(col_degrees.max()), int(row_degrees.max())

    out = [
        f"{H.num_vars} {H.num_checks}",
        f"{max_col} {max_row}",
        " ".join(str(d) for d in col_degrees),
        " ".join(str(d) for d in row_degrees),
    ]
    for col in range(H.num_vars):
        rows = list(np.nonzero(entries[:, col])[0] + 1) + [0] * (max_col - col_degrees[col])
        out.append(" ".join(str(int(r)) for r in rows))
    for row in range(H.num_checks):
        cols = list(np.nonzero(entries[row])[0] + 1) + [0] * (max_row - row_degrees[row])
        out.append(" ".join(str(int(c)) for c in cols))
    return "\n".join(out) + "\n"


def parse_dense(text: str, name: str = "unnamed") -> ParityCheckMatrix:
    """
    Lê o formato denso de teste: cabeçalho `m n` seguido de m linhas de 0/1

    Cada linha pode vir separada por espaços ("1 1 0") ou contígua ("110").
    """
    lines = _numbered_lines(text)
    if not lines:
        raise AlistParseError(1, "arquivo denso vazio")
    number, tokens = lines[0]
    header = _ints(number, tokens)
    if len(header) != 2 or min(header) <= 0:
        raise AlistParseError(number, "esperado 'm n' com inteiros positivos")
    m, n = header
    if len(lines) != m + 1:
        raise AlistParseError(lines[-1][0], f"esperadas {m} linhas de matriz, encontradas {len(lines) - 1}")

    rows = []
    for number, tokens in lines[1:]:
        chars = list("".join(tokens)) if len(tokens) == 1 else tokens
        if len(chars) != n or any(c not in ("0", "1") for c in chars):
            raise AlistParseError(number, f"esperados {n} valores binários")
        rows.append([int(c) for c in chars])
    return ParityCheckMatrix(np.array(rows, dtype=np.uint8), name=name)


def normalize_whitespace(text: str) -> str:
    """Normalização usada na comparação de ida e volta: espaços simples, sem linhas vazias"""
    return "\n".join(" ".join(line.split()) for line in text.splitlines() if line.strip())
