"""
Prime-field arithmetic and fixed-length words over F_q.

Vertex labels are big-endian radix-q integers: the first symbol of a word is
the most significant digit, so label 13 over F_2 with length 4 is (1,1,0,1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    FieldError,
    LengthMismatchError,
    OutOfRangeError,
    ZeroInverseError,
)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_q for a prime q."""
    q: int

    def __post_init__(self):
        if isinstance(self.q, bool) or not isinstance(self.q, (int, np.integer)):
            raise FieldError(f"field size must be an integer, got {self.q!r}")
        if not is_prime(int(self.q)):
            raise FieldError(f"field size must be prime, got {self.q}")
        object.__setattr__(self, "q", int(self.q))

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise FieldError(f"symbol {a} is not an element of F_{self.q}")
        return a

    def __str__(self) -> str:
        return f"F_{self.q}"


FieldLike = Union[PrimeField, int]


def as_field(field: FieldLike) -> PrimeField:
    return field if isinstance(field, PrimeField) else PrimeField(field)


def field_op(field: FieldLike, kind: str, a: int, b: Optional[int] = None) -> int:
    """
    Apply one of add, sub, mul, neg in F_q.

    Args:
        field: The field (or its prime size)
        kind: "add", "sub", "mul" or "neg"
        a: Left operand
        b: Right operand (unused for neg)
    """
    f = as_field(field)
    a = f.check(a)
    if kind == "neg":
        return (-a) % f.q
    if b is None:
        raise FieldError(f"operation {kind!r} needs two operands")
    b = f.check(b)
    if kind == "add":
        return (a + b) % f.q
    if kind == "sub":
        return (a - b) % f.q
    if kind == "mul":
        return (a * b) % f.q
    raise FieldError(f"unknown field operation {kind!r}")


def inv(field: FieldLike, a: int) -> int:
    """Multiplicative inverse by Fermat's little theorem."""
    f = as_field(field)
    a = f.check(a)
    if a == 0:
        raise ZeroInverseError(f.q)
    return pow(a, f.q - 2, f.q)


@dataclass(frozen=True)
class Word:
    """A fixed-length word over F_q (message vector or codeword)."""
    field: PrimeField
    symbols: Tuple[int, ...]

    def __post_init__(self):
        symbols = tuple(self.field.check(s) for s in self.symbols)
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def of(cls, field: FieldLike, symbols: Union[str, Iterable[int]]) -> "Word":
        """Build a word from symbols or a digit string such as "0121"."""
        f = as_field(field)
        if isinstance(symbols, str):
            text = symbols.replace(" ", "").replace(",", "")
            return cls(f, tuple(int(ch) for ch in text))
        return cls(f, tuple(int(s) for s in symbols))

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __getitem__(self, index: int) -> int:
        return self.symbols[index]

    def _combine(self, other: "Word", sign: int) -> "Word":
        if self.q != other.q:
            raise FieldError(f"cannot combine words over F_{self.q} and F_{other.q}")
        if len(self) != len(other):
            raise LengthMismatchError(len(self), len(other))
        return Word(self.field, tuple((a + sign * b) % self.q for a, b in zip(self, other)))

    def __add__(self, other: "Word") -> "Word":
        return self._combine(other, 1)

    def __sub__(self, other: "Word") -> "Word":
        return self._combine(other, -1)

    def __neg__(self) -> "Word":
        return Word(self.field, tuple((-s) % self.q for s in self.symbols))

    def to_array(self) -> np.ndarray:
        return np.array(self.symbols, dtype=np.int64)

    def __str__(self) -> str:
        return format_symbols(self.symbols, self.q)


def format_symbols(symbols: Sequence[int], q: int) -> str:
    """Digits run together for q <= 10, space separated otherwise."""
    if q <= 10:
        return "".join(str(int(s)) for s in symbols)
    return " ".join(str(int(s)) for s in symbols)


def weight(w: Word) -> int:
    """Hamming weight: number of nonzero symbols."""
    return sum(1 for s in w.symbols if s != 0)


def distance(a: Word, b: Word) -> int:
    """Hamming distance, equal to weight(a - b)."""
    if len(a) != len(b):
        raise LengthMismatchError(len(a), len(b))
    return sum(1 for x, y in zip(a.symbols, b.symbols) if x != y)


def rank(w: Word) -> int:
    """Big-endian radix-q value of a word."""
    value = 0
    for s in w.symbols:
        value = value * w.q + s
    return value


def unrank(i: int, length: int, field: FieldLike) -> Word:
    """Inverse of rank: the word of the given length whose label is i."""
    f = as_field(field)
    limit = f.q ** length
    if not 0 <= int(i) < limit:
        raise OutOfRangeError(int(i), limit)
    value = int(i)
    digits = [0] * length
    for pos in range(length - 1, -1, -1):
        value, digits[pos] = divmod(value, f.q)
    return Word(f, tuple(digits))


@lru_cache(maxsize=32)
def all_words(q: int, length: int) -> np.ndarray:
    """
    Table of every word of the given length, row i holding unrank(i).

    The table is read-only and shared; callers must copy before mutating.
    """
    count = q ** length
    if length == 0:
        table = np.zeros((1, 0), dtype=np.uint8)
    else:
        labels = np.arange(count, dtype=np.int64)
        powers = q ** np.arange(length - 1, -1, -1, dtype=np.int64)
        table = ((labels[:, None] // powers[None, :]) % q).astype(np.uint8)
    table.setflags(write=False)
    return table


def rank_rows(rows: np.ndarray, q: int) -> np.ndarray:
    """Labels of each row of a 2-D symbol array."""
    rows = np.asarray(rows, dtype=np.int64)
    length = rows.shape[-1]
    if length == 0:
        return np.zeros(rows.shape[:-1], dtype=np.int64)
    powers = q ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return (rows % q) @ powers


def words_of_weight_at_most(q: int, length: int, radius: int) -> np.ndarray:
    """All words of weight <= radius, in label order."""
    table = all_words(q, length)
    weights = np.count_nonzero(table, axis=1)
    return np.asarray(table[weights <= radius], dtype=np.int64)


def ceil_log(count: int, q: int) -> int:
    """Smallest L with q^L >= count: the length needed for ``count`` codewords."""
    length = 0
    while q ** length < count:
        length += 1
    return length
