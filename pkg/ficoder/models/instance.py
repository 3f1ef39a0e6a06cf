"""
FICP instances: receivers with Has/Want functions over F_q^{nK}.

Evaluation is vectorised: every instance keeps a lazily built table of all
q^{nK} message vectors and, per receiver, the Has/Want values of each vertex
together with their class ids (vertices with equal values share an id).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import InstanceError
from ..field import PrimeField, Word, all_words, rank
from .expressions import Expr


@dataclass(frozen=True)
class FuncDef:
    """A vector-valued function, one expression per output symbol."""
    outputs: Tuple[Expr, ...]

    @property
    def arity_out(self) -> int:
        return len(self.outputs)

    def evaluate(self, xs: np.ndarray, q: int) -> np.ndarray:
        """Evaluate on (..., nK) messages, giving (..., arity_out)."""
        xs = np.asarray(xs)
        columns = [e.evaluate(xs, q) for e in self.outputs]
        return np.stack(columns, axis=-1) if columns else np.zeros(xs.shape[:-1] + (0,), dtype=np.int64)

    def render(self, n: int = 1) -> str:
        if self.arity_out == 1:
            return self.outputs[0].render(n)
        return "(" + ", ".join(e.render(n) for e in self.outputs) + ")"

    def variables(self):
        return frozenset().union(*(e.variables() for e in self.outputs))


@dataclass(frozen=True)
class Receiver:
    """R_i = (H_i, W_i)."""
    has: Tuple[FuncDef, ...]
    wants: Tuple[FuncDef, ...]

    @property
    def has_arity(self) -> int:
        return sum(f.arity_out for f in self.has)

    @property
    def want_arity(self) -> int:
        return sum(f.arity_out for f in self.wants)


@dataclass(frozen=True)
class FicpInstance:
    """
    A functional index coding problem F(X, R).

    Attributes:
        field: The symbol alphabet F_q
        n: Block length (sub-packets per message)
        K: Number of messages
        receivers: Receiver list R_1..R_N
        name: Optional label carried into reports
    """
    field: PrimeField
    n: int
    K: int
    receivers: Tuple[Receiver, ...]
    name: Optional[str] = None
    _cache: Dict[tuple, np.ndarray] = dc_field(
        default_factory=dict, compare=False, repr=False, hash=False
    )

    def __post_init__(self):
        if self.n < 1 or self.K < 1:
            raise InstanceError(f"need n >= 1 and K >= 1, got n={self.n}, K={self.K}")
        if not self.receivers:
            raise InstanceError("an instance needs at least one receiver")
        object.__setattr__(self, "receivers", tuple(self.receivers))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def nk(self) -> int:
        return self.n * self.K

    @property
    def vcount(self) -> int:
        return self.q ** self.nk

    @property
    def N(self) -> int:
        return len(self.receivers)

    @property
    def messages(self) -> np.ndarray:
        """All message vectors, row x holding the vector with label x."""
        return all_words(self.q, self.nk)

    def _table(self, kind: str, i: int) -> np.ndarray:
        key = (kind, i)
        if key not in self._cache:
            receiver = self.receivers[i]
            funcs = receiver.has if kind == "has" else receiver.wants
            xs = self.messages
            if funcs:
                table = np.concatenate([f.evaluate(xs, self.q) for f in funcs], axis=1)
            else:
                table = np.zeros((self.vcount, 0), dtype=np.int64)
            table.setflags(write=False)
            self._cache[key] = table
        return self._cache[key]

    def has_table(self, i: int) -> np.ndarray:
        """(q^{nK}, |H_i| outputs) array of Has-values."""
        return self._table("has", i)

    def want_table(self, i: int) -> np.ndarray:
        return self._table("want", i)

    def _classes(self, kind: str, i: int) -> np.ndarray:
        key = (kind + "_classes", i)
        if key not in self._cache:
            table = self._table(kind, i)
            if table.shape[1] == 0:
                ids = np.zeros(self.vcount, dtype=np.int64)
            else:
                _, inverse = np.unique(table, axis=0, return_inverse=True)
                ids = np.asarray(inverse, dtype=np.int64).reshape(-1)
            ids.setflags(write=False)
            self._cache[key] = ids
        return self._cache[key]

    def has_classes(self, i: int) -> np.ndarray:
        """Class id per vertex; equal ids mean equal Has-values."""
        return self._classes("has", i)

    def want_classes(self, i: int) -> np.ndarray:
        return self._classes("want", i)

    def describe(self) -> Dict[str, int]:
        return {"q": self.q, "n": self.n, "K": self.K, "N": self.N}


MessageLike = Union[Word, int, Sequence[int]]


def as_label(inst: FicpInstance, x: MessageLike) -> int:
    """Vertex label of a message given as Word, label or symbol sequence."""
    if isinstance(x, (int, np.integer)):
        label = int(x)
        if not 0 <= label < inst.vcount:
            raise InstanceError(f"vertex {label} outside [0, {inst.vcount})")
        return label
    word = x if isinstance(x, Word) else Word.of(inst.field, x)
    if len(word) != inst.nk:
        raise InstanceError(f"message vector needs {inst.nk} symbols, got {len(word)}")
    return rank(word)


def eval_func(f: FuncDef, x: Word) -> Word:
    """Evaluate a function on one message vector."""
    values = f.evaluate(x.to_array(), x.q)
    return Word(x.field, tuple(int(v) for v in values))


def _split(inst: FicpInstance, row: np.ndarray, funcs: Tuple[FuncDef, ...]) -> Tuple[Word, ...]:
    out = []
    pos = 0
    for f in funcs:
        out.append(Word(inst.field, tuple(int(v) for v in row[pos:pos + f.arity_out])))
        pos += f.arity_out
    return tuple(out)


def has_value(inst: FicpInstance, i: int, x: MessageLike) -> Tuple[Word, ...]:
    """H_i(x): one word per Has-function."""
    label = as_label(inst, x)
    return _split(inst, inst.has_table(i)[label], inst.receivers[i].has)


def want_value(inst: FicpInstance, i: int, x: MessageLike) -> Tuple[Word, ...]:
    """W_i(x): one word per Want-function."""
    label = as_label(inst, x)
    return _split(inst, inst.want_table(i)[label], inst.receivers[i].wants)


def lift_instance(inst: FicpInstance, m: int) -> FicpInstance:
    """
    Replicate a scalar instance over m sub-packets.

    Each output e of each function becomes m outputs, the j-th reading
    sub-packet j of every message (scalar variable k maps to k*m + j).
    """
    if inst.n != 1:
        raise InstanceError(f"only scalar instances can be lifted, this one has n={inst.n}")
    if m < 1:
        raise InstanceError(f"block length must be positive, got {m}")
    if m == 1:
        return inst

    def lift_func(f: FuncDef) -> FuncDef:
        outputs = []
        for e in f.outputs:
            for j in range(m):
                outputs.append(e.remap(lambda k, j=j: k * m + j))
        return FuncDef(tuple(outputs))

    receivers = tuple(
        Receiver(
            has=tuple(lift_func(f) for f in r.has),
            wants=tuple(lift_func(f) for f in r.wants),
        )
        for r in inst.receivers
    )
    name = f"{inst.name} (n={m})" if inst.name else None
    return FicpInstance(field=inst.field, n=m, K=inst.K, receivers=receivers, name=name)
