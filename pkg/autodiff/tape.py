"""
Núcleo de diferenciação reversa

Cada Value guarda um array float64 (um escalar é o caso de tamanho 1). A fita é
uma lista só de inclusão: os pais sempre têm id menor que os filhos, então o
backward percorre os ids em ordem decrescente.
"""
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union
import numpy as np

ArrayLike = Union[float, int, np.ndarray]
Vjp = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]


class _Node:
    __slots__ = ("op", "parents", "vjp")

    def __init__(self, op: str, parents: Tuple[int, ...], vjp: Optional[Vjp]):
        self.op = op
        self.parents = parents
        self.vjp = vjp


class Tape:
    """
    Fita de operações

    Args:
        record: se False, nenhum nó é gravado (modo inferência, sem custo de memória)
    """

    def __init__(self, record: bool = True):
        self.record = record
        self.nodes: List[_Node] = []

    def __len__(self) -> int:
        return len(self.nodes)

    def _push(self, data: np.ndarray, op: str, parents: Sequence["Value"], vjp: Optional[Vjp]) -> "Value":
        ids = tuple(p.id for p in parents)
        if not self.record or all(i < 0 for i in ids):
            return Value(self, -1, data, op)
        self.nodes.append(_Node(op, ids, vjp))
        return Value(self, len(self.nodes) - 1, data, op)

    def constant(self, data: ArrayLike) -> "Value":
        """Valor sem gradiente"""
        return Value(self, -1, np.asarray(data, dtype=np.float64), "const")

    def variable(self, data: ArrayLike) -> "Value":
        """Folha cujo gradiente pode ser pedido no backward"""
        data = np.array(data, dtype=np.float64)
        if not self.record:
            return Value(self, -1, data, "leaf")
        self.nodes.append(_Node("leaf", (), None))
        return Value(self, len(self.nodes) - 1, data, "leaf")

    def backward(self, loss: "Value", wrt: Dict[str, "Value"]) -> Dict[str, np.ndarray]:
        """
        Propaga adjuntos da perda até as folhas pedidas

        Returns:
            dict nome -> ∂loss/∂folha (zeros se a folha não influencia a perda)

        Raises:
            ValueError: perda fora da fita ou não escalar
        """
        if loss.tape is not self or loss.id < 0 or loss.id >= len(self.nodes):
            raise ValueError("A perda não está nesta fita")
        if loss.data.size != 1:
            raise ValueError(f"A perda deve ser escalar, shape recebido {loss.data.shape}")

        wanted = {v.id for v in wrt.values() if v.id >= 0}
        adjoints: Dict[int, np.ndarray] = {loss.id: np.ones_like(loss.data)}
        leaves: Dict[int, np.ndarray] = {}

        for node_id in range(loss.id, -1, -1):
            g = adjoints.pop(node_id, None)
            if g is None:
                continue
            node = self.nodes[node_id]
            if node.vjp is None:
                if node_id in wanted:
                    leaves[node_id] = g
                continue
            for pid, pg in zip(node.parents, node.vjp(g)):
                if pid < 0 or pg is None:
                    continue
                adjoints[pid] = adjoints[pid] + pg if pid in adjoints else pg

        return {
            name: leaves.get(v.id, np.zeros_like(v.data)) if v.id >= 0 else np.zeros_like(v.data)
            for name, v in wrt.items()
        }


class Value:
    """Resultado de uma operação na fita"""

    __slots__ = ("tape", "id", "data", "op")
    __array_priority__ = 100  # garante que ndarray + Value caia em Value.__radd__

    def __init__(self, tape: Tape, node_id: int, data: np.ndarray, op: str):
        self.tape = tape
        self.id = node_id
        self.data = data
        self.op = op

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def __repr__(self) -> str:
        return f"Value(op={self.op}, shape={self.data.shape}, id={self.id})"

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __neg__(self):
        return neg(self)


def _lift(x, tape: Tape) -> Value:
    return x if isinstance(x, Value) else tape.constant(x)


def _tape_of(*xs) -> Tape:
    for x in xs:
        if isinstance(x, Value):
            return x.tape
    raise ValueError("Pelo menos um operando precisa ser um Value")


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Soma o gradiente sobre os eixos criados ou expandidos pelo broadcasting"""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


# --- aritmética ---

def add(a, b) -> Value:
    tape = _tape_of(a, b)
    a, b = _lift(a, tape), _lift(b, tape)
    sa, sb = a.shape, b.shape
    return tape._push(a.data + b.data, "add", (a, b),
                      lambda g: (_unbroadcast(g, sa), _unbroadcast(g, sb)))


def sub(a, b) -> Value:
    tape = _tape_of(a, b)
    a, b = _lift(a, tape), _lift(b, tape)
    sa, sb = a.shape, b.shape
    return tape._push(a.data - b.data, "sub", (a, b),
                      lambda g: (_unbroadcast(g, sa), _unbroadcast(-g, sb)))


def mul(a, b) -> Value:
    tape = _tape_of(a, b)
    a, b = _lift(a, tape), _lift(b, tape)
    ad, bd = a.data, b.data
    return tape._push(ad * bd, "mul", (a, b),
                      lambda g: (_unbroadcast(g * bd, ad.shape), _unbroadcast(g * ad, bd.shape)))


def neg(a: Value) -> Value:
    return a.tape._push(-a.data, "neg", (a,), lambda g: (-g,))


def scale(a: Value, k: float) -> Value:
    return a.tape._push(a.data * k, "scale", (a,), lambda g: (g * k,))


def sum_op(a: Value, axis=None, keepdims: bool = False) -> Value:
    shape = a.shape
    out = np.sum(a.data, axis=axis, keepdims=keepdims)

    def vjp(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, shape).copy(),)

    return a.tape._push(np.asarray(out, dtype=np.float64), "sum", (a,), vjp)


def mean_op(a: Value, axis=None, keepdims: bool = False) -> Value:
    count = a.data.size if axis is None else a.data.shape[axis]
    return scale(sum_op(a, axis=axis, keepdims=keepdims), 1.0 / max(count, 1))


# --- funções elementares ---

def abs_val(a: Value) -> Value:
    sign = np.sign(a.data)
    return a.tape._push(np.abs(a.data), "abs", (a,), lambda g: (g * sign,))


def tanh_op(a: Value) -> Value:
    out = np.tanh(a.data)
    return a.tape._push(out, "tanh", (a,), lambda g: (g * (1.0 - out * out),))


def arctanh_op(a: Value) -> Value:
    """arctanh exato; a saturação é responsabilidade de quem chama (clip antes)"""
    x = a.data
    return a.tape._push(np.arctanh(x), "arctanh", (a,), lambda g: (g / (1.0 - x * x),))


def taylor_arctanh_op(a: Value, q: int) -> Value:
    """
    Série de Taylor truncada de arctanh: Σ_{m=0..q} x^(2m+1)/(2m+1)

    O fator 2 da atualização de verificação fica no BP, não aqui.
    """
    if q < 0:
        raise ValueError("q deve ser >= 0")
    x = a.data
    x2 = x * x
    out = np.zeros_like(x)
    deriv = np.zeros_like(x)
    power = np.ones_like(x)  # x^(2m)
    for m in range(q + 1):
        deriv = deriv + power
        out = out + power * x / (2 * m + 1)
        power = power * x2
    return a.tape._push(out, "taylor_arctanh", (a,), lambda g: (g * deriv,))


def clip_op(a: Value, lo: float, hi: float) -> Value:
    """Corte em [lo, hi]; o gradiente passa apenas dentro do intervalo"""
    x = a.data
    inside = ((x >= lo) & (x <= hi)).astype(np.float64)
    return a.tape._push(np.clip(x, lo, hi), "clip", (a,), lambda g: (g * inside,))


def sigmoid(a: Value) -> Value:
    out = 0.5 * (1.0 + np.tanh(0.5 * a.data))
    return a.tape._push(out, "sigmoid", (a,), lambda g: (g * out * (1.0 - out),))


def softplus(a: Value) -> Value:
    x = a.data
    sig = 0.5 * (1.0 + np.tanh(0.5 * x))
    return a.tape._push(np.logaddexp(0.0, x), "softplus", (a,), lambda g: (g * sig,))


def shifted_softplus(a: Value) -> Value:
    return sub(softplus(a), float(np.log(2.0)))


def bce_with_logits(z: Value, target: np.ndarray) -> Value:
    """
    Entropia cruzada binária de sigmoid(z) contra alvos em {0,1}, elemento a elemento

    Forma estável: softplus(z) - t·z
    """
    x = z.data
    t = np.asarray(target, dtype=np.float64)
    sig = 0.5 * (1.0 + np.tanh(0.5 * x))
    return z.tape._push(np.logaddexp(0.0, x) - t * x, "bce", (z,), lambda g: (g * (sig - t),))


def softmax_cross_entropy(logits: Value, labels: np.ndarray) -> Value:
    """Perda por exemplo (B,) de logits (B, C) contra rótulos inteiros (B,)"""
    x = logits.data
    labels = np.asarray(labels, dtype=np.int64)
    shifted = x - x.max(axis=1, keepdims=True)
    logsumexp = np.log(np.exp(shifted).sum(axis=1))
    rows = np.arange(x.shape[0])
    out = logsumexp - shifted[rows, labels]
    probs = np.exp(shifted - logsumexp[:, None])
    onehot = np.zeros_like(x)
    onehot[rows, labels] = 1.0
    return logits.tape._push(out, "softmax_xent", (logits,), lambda g: (g[:, None] * (probs - onehot),))


# --- álgebra linear ---

def matmul(a, b) -> Value:
    """Produto de matrizes 2D (qualquer um dos operandos pode ser constante)"""
    tape = _tape_of(a, b)
    a, b = _lift(a, tape), _lift(b, tape)
    ad, bd = a.data, b.data
    return tape._push(ad @ bd, "matmul", (a, b), lambda g: (g @ bd.T, ad.T @ g))


def batched_matvec(x: Value, w: Value) -> Value:
    """Para cada linha n: y[n] = x[n] @ w[n], com x (N, i) e w (N, i, o)"""
    xd, wd = x.data, w.data
    out = np.einsum("ni,nio->no", xd, wd)
    return x.tape._push(out, "batched_matvec", (x, w),
                        lambda g: (np.einsum("no,nio->ni", g, wd), xd[:, :, None] * g[:, None, :]))


# --- indexação e forma ---

def gather(a: Value, index: np.ndarray, fill: Optional[float] = None) -> Value:
    """
    Coleta ao longo do último eixo: out[..., *index.shape] = a[..., index]

    Com `fill`, o índice igual a a.shape[-1] aponta para uma posição extra com
    esse valor (preenchimento de tabelas extrínsecas de tamanho variável).
    """
    index = np.asarray(index, dtype=np.int64)
    data = a.data
    size = data.shape[-1]
    if fill is not None:
        pad = np.full(data.shape[:-1] + (1,), fill, dtype=np.float64)
        data = np.concatenate([data, pad], axis=-1)
    width = data.shape[-1]
    if index.size and (index.min() < 0 or index.max() >= width):
        raise IndexError(f"Índice fora do intervalo 0..{width - 1}")
    out = data[..., index]
    lead = data.shape[:-1]
    flat = index.reshape(-1)

    def vjp(g):
        acc = np.zeros(lead + (width,), dtype=np.float64)
        acc2 = acc.reshape(-1, width)
        np.add.at(acc2, (slice(None), flat), g.reshape(acc2.shape[0], -1))
        return (acc[..., :size],)

    return a.tape._push(out, "gather", (a,), vjp)


def prod_last(a: Value) -> Value:
    """Produto sobre o último eixo, com gradiente por produtos 'deixa-um-de-fora'"""
    x = a.data
    d = x.shape[-1]
    out = np.prod(x, axis=-1)

    def vjp(g):
        if d == 0:
            return (np.zeros_like(x),)
        ones = np.ones(x.shape[:-1] + (1,), dtype=np.float64)
        prefix = np.concatenate([ones, np.cumprod(x[..., :-1], axis=-1)], axis=-1)
        suffix = np.concatenate([np.cumprod(x[..., :0:-1], axis=-1)[..., ::-1], ones], axis=-1)
        return (g[..., None] * prefix * suffix,)

    return a.tape._push(out, "prod", (a,), vjp)


def reshape(a: Value, shape: Tuple[int, ...]) -> Value:
    old = a.shape
    return a.tape._push(a.data.reshape(shape), "reshape", (a,), lambda g: (g.reshape(old),))


def broadcast_to(a: Value, shape: Tuple[int, ...]) -> Value:
    old = a.shape
    return a.tape._push(np.broadcast_to(a.data, shape).copy(), "broadcast", (a,),
                        lambda g: (_unbroadcast(g, old),))


def concat(values: Iterable[Value], axis: int = -1) -> Value:
    values = list(values)
    tape = _tape_of(*values)
    values = [_lift(v, tape) for v in values]
    sizes = [v.shape[axis] for v in values]
    splits = np.cumsum(sizes)[:-1]
    out = np.concatenate([v.data for v in values], axis=axis)
    return tape._push(out, "concat", values, lambda g: tuple(np.split(g, splits, axis=axis)))


def slice_last(a: Value, start: int, stop: int) -> Value:
    """a[..., start:stop]"""
    shape = a.shape

    def vjp(g):
        full = np.zeros(shape, dtype=np.float64)
        full[..., start:stop] = g
        return (full,)

    return a.tape._push(a.data[..., start:stop], "slice", (a,), vjp)
