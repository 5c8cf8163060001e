"""
Grafos pequenos para classificação: instâncias, lotes bloco-diagonais, datasets
sintéticos e persistência em texto
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple
import numpy as np
from config.settings import log

Family = Literal["cycle-vs-path", "triangle-count-parity", "density-pair"]
FAMILIES = ("cycle-vs-path", "triangle-count-parity", "density-pair")


@dataclass(frozen=True, eq=False)
class GraphInstance:
    """Grafo não direcionado com features por nó e rótulo binário"""

    adjacency: np.ndarray  # (N, N) simétrica, diagonal nula
    features: np.ndarray   # (N, F)
    label: int = 0

    def __post_init__(self):
        adj = np.asarray(self.adjacency)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("Adjacência deve ser quadrada")
        if not np.isin(adj, (0, 1)).all():
            raise ValueError("Adjacência deve ser binária")
        if not (adj == adj.T).all():
            raise ValueError("Adjacência deve ser simétrica")
        if adj.shape[0] and np.diag(adj).any():
            raise ValueError("Auto-laços não são permitidos")
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 2 or feats.shape[0] != adj.shape[0]:
            raise ValueError(f"Features com shape {feats.shape}; esperado ({adj.shape[0]}, F)")
        if self.label not in (0, 1):
            raise ValueError("Rótulo deve ser 0 ou 1")
        object.__setattr__(self, "adjacency", adj.astype(np.uint8))
        object.__setattr__(self, "features", feats)

    @property
    def num_nodes(self) -> int:
        return self.adjacency.shape[0]

    @property
    def num_edges(self) -> int:
        return int(self.adjacency.sum() // 2)

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    def edge_list(self) -> List[Tuple[int, int]]:
        rows, cols = np.nonzero(np.triu(self.adjacency))
        return list(zip(rows.tolist(), cols.tolist()))


def from_edges(num_nodes: int, edges: Sequence[Tuple[int, int]], label: int = 0, features: Optional[np.ndarray] = None) -> GraphInstance:
    """Monta um GraphInstance a partir de uma lista de arestas (features default: uns)"""
    adj = np.zeros((num_nodes, num_nodes), dtype=np.uint8)
    for u, v in edges:
        adj[u, v] = adj[v, u] = 1
    if features is None:
        features = np.ones((num_nodes, 1))
    return GraphInstance(adj, features, label)


def permute(graph: GraphInstance, perm: Sequence[int]) -> GraphInstance:
    """Reetiqueta os nós: o nó i do resultado é o nó perm[i] do original"""
    perm = np.asarray(perm)
    return GraphInstance(graph.adjacency[np.ix_(perm, perm)], graph.features[perm], graph.label)


def disjoint_union(a: GraphInstance, b: GraphInstance) -> GraphInstance:
    na = a.num_nodes
    adj = np.zeros((na + b.num_nodes,) * 2, dtype=np.uint8)
    adj[:na, :na] = a.adjacency
    adj[na:, na:] = b.adjacency
    return GraphInstance(adj, np.concatenate([a.features, b.features]), a.label)


@dataclass(frozen=True, eq=False)
class GraphBatch:
    """Vários grafos como um único grafo bloco-diagonal, com matriz de pooling por grafo"""

    adjacency: np.ndarray  # (N_total, N_total) float64
    features: np.ndarray   # (N_total, F)
    pooling: np.ndarray    # (G, N_total): 1 onde o nó pertence ao grafo
    labels: np.ndarray     # (G,)

    @property
    def num_graphs(self) -> int:
        return self.pooling.shape[0]

    @property
    def num_nodes(self) -> int:
        return self.adjacency.shape[0]


def collate(graphs: Sequence[GraphInstance]) -> GraphBatch:
    """
    Junta grafos num lote

    Raises:
        ValueError: lote vazio, grafo sem nós ou dimensões de features diferentes
    """
    if not graphs:
        raise ValueError("Lote vazio")
    if any(g.num_nodes == 0 for g in graphs):
        raise ValueError("Grafos precisam de pelo menos um nó")
    if len({g.feature_dim for g in graphs}) != 1:
        raise ValueError("Todos os grafos do lote precisam da mesma dimensão de features")
    sizes = [g.num_nodes for g in graphs]
    total = sum(sizes)
    adj = np.zeros((total, total))
    pooling = np.zeros((len(graphs), total))
    offset = 0
    for i, g in enumerate(graphs):
        adj[offset:offset + g.num_nodes, offset:offset + g.num_nodes] = g.adjacency
        pooling[i, offset:offset + g.num_nodes] = 1.0
        offset += g.num_nodes
    features = np.concatenate([g.features for g in graphs])
    labels = np.array([g.label for g in graphs], dtype=np.int64)
    return GraphBatch(adj, features, pooling, labels)


# --- famílias sintéticas ---

def cycle_graph(n: int, label: int = 1) -> GraphInstance:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)], label)


def path_graph(n: int, label: int = 0) -> GraphInstance:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)], label)


def random_graph(n: int, p: float, rng: np.random.Generator, label: int = 0) -> GraphInstance:
    """Erdős–Rényi G(n, p)"""
    upper = np.triu((rng.random((n, n)) < p).astype(np.uint8), k=1)
    return GraphInstance(upper + upper.T, np.ones((n, 1)), label)


def triangle_count(graph: GraphInstance) -> int:
    a = graph.adjacency.astype(np.int64)
    return int(np.trace(a @ a @ a) // 6)


def _relabel(graph: GraphInstance, rng: np.random.Generator) -> GraphInstance:
    return permute(graph, rng.permutation(graph.num_nodes))


def _sample(family: str, label: int, n: int, rng: np.random.Generator) -> GraphInstance:
    if family == "cycle-vs-path":
        return cycle_graph(n) if label == 1 else path_graph(n)
    if family == "density-pair":
        return random_graph(n, 0.6 if label == 1 else 0.2, rng, label)
    # triangle-count-parity: amostragem por rejeição até a paridade pedida
    while True:
        g = random_graph(n, 0.4, rng)
        if triangle_count(g) % 2 == label:
            return GraphInstance(g.adjacency, g.features, label)


def make_synthetic_dataset(
    family: str,
    sizes: Tuple[int, int] = (6, 12),
    seed: int = 0,
    num_graphs: int = 200,
) -> Tuple[List[GraphInstance], List[GraphInstance]]:
    """
    Dataset sintético balanceado com divisão treino/teste 80/20 estratificada

    Args:
        family: 'cycle-vs-path', 'triangle-count-parity' ou 'density-pair'
        sizes: (mínimo, máximo) de nós, sorteados uniformemente
        seed: semente (determinístico)
        num_graphs: total de grafos (metade por classe)

    Returns:
        (treino, teste)
    """
    if family not in FAMILIES:
        raise ValueError(f"Família '{family}' não suportada. Use {FAMILIES}")
    low, high = sizes
    if low < 3 or low > high:
        raise ValueError(f"Tamanhos inválidos: {sizes}")
    rng = np.random.default_rng(seed)
    per_class = num_graphs // 2
    train, test = [], []
    for label in (0, 1):
        graphs = [
            _relabel(_sample(family, label, int(rng.integers(low, high + 1)), rng), rng)
            for _ in range(per_class)
        ]
        cut = int(round(0.8 * per_class))
        train.extend(graphs[:cut])
        test.extend(graphs[cut:])
    train = [train[i] for i in rng.permutation(len(train))]
    test = [test[i] for i in rng.permutation(len(test))]
    log("GIN", f"✓ Dataset {family}: {len(train)} treino / {len(test)} teste")
    return train, test


def wl_colors(graph: GraphInstance, rounds: int) -> List[Tuple]:
    """Multiconjunto ordenado de cores do refinamento 1-WL após `rounds` rodadas"""
    colors = [tuple(np.round(row, 12)) for row in graph.features]
    neighbors = [np.nonzero(row)[0] for row in graph.adjacency]
    for _ in range(rounds):
        colors = [(colors[v], tuple(sorted(colors[u] for u in neighbors[v]))) for v in range(graph.num_nodes)]
    return sorted(colors, key=repr)


# --- persistência ---

def dump_dataset(graphs: Sequence[GraphInstance], path: str, family: str = "custom") -> str:
    """
    Grava grafos em texto, um bloco por grafo:

        dataset <família> <quantidade>
        graph <nós> <arestas> <dim features> <rótulo>
        <u> <v>            (uma linha por aresta)
        <x_1> ... <x_F>    (uma linha por nó)
    """
    lines = [f"dataset {family} {len(graphs)}"]
    for g in graphs:
        edges = g.edge_list()
        lines.append(f"graph {g.num_nodes} {len(edges)} {g.feature_dim} {g.label}")
        lines.extend(f"{u} {v}" for u, v in edges)
        lines.extend(" ".join(repr(float(x)) for x in row) for row in g.features)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def load_dataset(path: str) -> Tuple[str, List[GraphInstance]]:
    """
    Lê um arquivo gravado por dump_dataset

    Raises:
        FileNotFoundError: arquivo inexistente
        ValueError: conteúdo mal formado (a mensagem traz a linha)
    """
    file = Path(path)
    if not file.exists():
        raise FileNotFoundError(f"Dataset não encontrado: {path}")
    lines = [line.split() for line in file.read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines or lines[0][0] != "dataset" or len(lines[0]) != 3:
        raise ValueError("linha 1: cabeçalho 'dataset <família> <quantidade>' esperado")
    family, count = lines[0][1], int(lines[0][2])
    graphs = []
    i = 1
    for _ in range(count):
        if i >= len(lines) or lines[i][0] != "graph" or len(lines[i]) != 5:
            raise ValueError(f"linha {i + 1}: cabeçalho 'graph' esperado")
        n, m, dim, label = (int(x) for x in lines[i][1:])
        edges = [(int(u), int(v)) for u, v in lines[i + 1:i + 1 + m]]
        rows = lines[i + 1 + m:i + 1 + m + n]
        if len(edges) != m or len(rows) != n or any(len(r) != dim for r in rows):
            raise ValueError(f"linha {i + 1}: bloco do grafo incompleto")
        graphs.append(from_edges(n, edges, label, np.array(rows, dtype=np.float64).reshape(n, dim)))
        i += 1 + m + n
    return family, graphs
