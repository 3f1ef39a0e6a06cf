"""
Function expression language for Has/Want functions.

Grammar (ASCII, whitespace ignored):

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := INT | var | "maj" "(" expr "," expr "," expr ")"
            | "not" "(" expr ")" | "-" factor | "(" expr ")"
    var    := "x" INT ("_" INT)?

Variables are 1-based in text (``x3``, ``x2_1``) and 0-based internally:
sub-packet j of message k is scalar index (k-1)*n + (j-1).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, FrozenSet, Optional, Tuple

import numpy as np
from lark import Lark, Transformer
from lark.exceptions import UnexpectedInput, VisitError

from ..exceptions import BadVariableError, ExprSyntaxError, MajUnsupportedError


GRAMMAR = r"""
?start: expr

?expr: term
     | expr "+" term   -> add
     | expr "-" term   -> sub

?term: factor
     | term "*" factor -> mul

?factor: INT                              -> const
       | VAR                              -> var
       | "maj" "(" expr "," expr "," expr ")" -> maj
       | "not" "(" expr ")"               -> not_
       | "-" factor                       -> neg
       | "(" expr ")"

VAR: /x[0-9]+(_[0-9]+)?/

%import common.INT
%import common.WS
%ignore WS
"""

_PARSER = Lark(GRAMMAR, parser="lalr")


# =============================================================================
# AST
# =============================================================================

class Expr(ABC):
    """An expression over the nK scalar message symbols."""

    @abstractmethod
    def evaluate(self, xs: np.ndarray, q: int) -> np.ndarray:
        """Evaluate on a (..., nK) array of message vectors."""

    @abstractmethod
    def render(self, n: int = 1) -> str:
        """Canonical text that parses back to this expression."""

    @abstractmethod
    def variables(self) -> FrozenSet[int]:
        pass

    @abstractmethod
    def remap(self, mapping: Callable[[int], int]) -> "Expr":
        """Rename every variable index through mapping."""

    @abstractmethod
    def affine(self, nvars: int, q: int) -> Optional[Tuple[np.ndarray, int]]:
        """
        Structural affine expansion.

        Returns (coefficients, constant) or None when the expression is built
        from a product of non-constants or a majority vote.
        """

    def __str__(self) -> str:
        return self.render()


def _wrap(child: Expr, n: int, loose: Tuple[type, ...]) -> str:
    text = child.render(n)
    return f"({text})" if isinstance(child, loose) else text


@dataclass(frozen=True)
class Const(Expr):
    value: int

    def evaluate(self, xs, q):
        return np.full(xs.shape[:-1], self.value % q, dtype=np.int64)

    def render(self, n=1):
        return str(self.value)

    def variables(self):
        return frozenset()

    def remap(self, mapping):
        return self

    def affine(self, nvars, q):
        return np.zeros(nvars, dtype=np.int64), self.value % q


@dataclass(frozen=True)
class Var(Expr):
    index: int

    def evaluate(self, xs, q):
        return np.asarray(xs[..., self.index], dtype=np.int64)

    def render(self, n=1):
        return variable_name(self.index, n)

    def variables(self):
        return frozenset({self.index})

    def remap(self, mapping):
        return Var(mapping(self.index))

    def affine(self, nvars, q):
        coeffs = np.zeros(nvars, dtype=np.int64)
        coeffs[self.index] = 1
        return coeffs, 0


@dataclass(frozen=True)
class Add(Expr):
    terms: Tuple[Expr, ...]

    def evaluate(self, xs, q):
        total = self.terms[0].evaluate(xs, q)
        for term in self.terms[1:]:
            total = (total + term.evaluate(xs, q)) % q
        return total % q

    def render(self, n=1):
        return " + ".join(t.render(n) for t in self.terms)

    def variables(self):
        return frozenset().union(*(t.variables() for t in self.terms))

    def remap(self, mapping):
        return Add(tuple(t.remap(mapping) for t in self.terms))

    def affine(self, nvars, q):
        coeffs = np.zeros(nvars, dtype=np.int64)
        constant = 0
        for term in self.terms:
            part = term.affine(nvars, q)
            if part is None:
                return None
            coeffs = (coeffs + part[0]) % q
            constant = (constant + part[1]) % q
        return coeffs, constant


@dataclass(frozen=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]

    def evaluate(self, xs, q):
        product = self.factors[0].evaluate(xs, q)
        for factor in self.factors[1:]:
            product = (product * factor.evaluate(xs, q)) % q
        return product % q

    def render(self, n=1):
        return "*".join(_wrap(f, n, (Add,)) for f in self.factors)

    def variables(self):
        return frozenset().union(*(f.variables() for f in self.factors))

    def remap(self, mapping):
        return Mul(tuple(f.remap(mapping) for f in self.factors))

    def affine(self, nvars, q):
        scale = 1
        linear_part: Optional[Tuple[np.ndarray, int]] = None
        for factor in self.factors:
            part = factor.affine(nvars, q)
            if part is None:
                return None
            if part[0].any():
                if linear_part is not None:
                    return None
                linear_part = part
            else:
                scale = (scale * part[1]) % q
        if linear_part is None:
            return np.zeros(nvars, dtype=np.int64), scale
        return (linear_part[0] * scale) % q, (linear_part[1] * scale) % q


@dataclass(frozen=True)
class Neg(Expr):
    child: Expr

    def evaluate(self, xs, q):
        return (-self.child.evaluate(xs, q)) % q

    def render(self, n=1):
        return "-" + _wrap(self.child, n, (Add, Mul))

    def variables(self):
        return self.child.variables()

    def remap(self, mapping):
        return Neg(self.child.remap(mapping))

    def affine(self, nvars, q):
        part = self.child.affine(nvars, q)
        if part is None:
            return None
        return (-part[0]) % q, (-part[1]) % q


@dataclass(frozen=True)
class Maj(Expr):
    """Majority of three bits (F_2 only)."""
    args: Tuple[Expr, Expr, Expr]

    def evaluate(self, xs, q):
        total = sum(a.evaluate(xs, q) for a in self.args)
        return (total >= 2).astype(np.int64)

    def render(self, n=1):
        return "maj(" + ", ".join(a.render(n) for a in self.args) + ")"

    def variables(self):
        return frozenset().union(*(a.variables() for a in self.args))

    def remap(self, mapping):
        return Maj(tuple(a.remap(mapping) for a in self.args))

    def affine(self, nvars, q):
        return None


@dataclass(frozen=True)
class Not(Expr):
    """Boolean complement, 1 + e over F_2."""
    child: Expr

    def evaluate(self, xs, q):
        return (1 - self.child.evaluate(xs, q)) % 2

    def render(self, n=1):
        return f"not({self.child.render(n)})"

    def variables(self):
        return self.child.variables()

    def remap(self, mapping):
        return Not(self.child.remap(mapping))

    def affine(self, nvars, q):
        part = self.child.affine(nvars, q)
        if part is None:
            return None
        return part[0] % 2, (1 + part[1]) % 2


def variable_name(index: int, n: int = 1) -> str:
    """Text name of a 0-based scalar variable index."""
    if n == 1:
        return f"x{index + 1}"
    k, j = divmod(index, n)
    return f"x{k + 1}_{j + 1}"


# =============================================================================
# Parsing
# =============================================================================

class _ExprBuilder(Transformer):
    """Builds Expr nodes from the parse tree, validating names against q, n, K."""

    def __init__(self, q: int, n: int, K: int):
        super().__init__()
        self.q = q
        self.n = n
        self.K = K

    def const(self, items):
        return Const(int(items[0]) % self.q)

    def var(self, items):
        name = str(items[0])
        body = name[1:]
        if "_" in body:
            k_text, j_text = body.split("_", 1)
            k, j = int(k_text), int(j_text)
        else:
            if self.n != 1:
                raise BadVariableError(
                    f"'{name}' needs a sub-packet index (x<k>_<j>) when n = {self.n}"
                )
            k, j = int(body), 1
        if not 1 <= k <= self.K:
            raise BadVariableError(f"'{name}': message index {k} outside 1..{self.K}")
        if not 1 <= j <= self.n:
            raise BadVariableError(f"'{name}': sub-packet index {j} outside 1..{self.n}")
        return Var((k - 1) * self.n + (j - 1))

    def add(self, items):
        return Add(_flatten(items, Add, "terms"))

    def sub(self, items):
        return Add(_flatten([items[0]], Add, "terms") + (Neg(items[1]),))

    def mul(self, items):
        return Mul(_flatten(items, Mul, "factors"))

    def neg(self, items):
        return Neg(items[0])

    def maj(self, items):
        if self.q != 2:
            raise MajUnsupportedError(f"maj() is only defined over F_2, not F_{self.q}")
        return Maj(tuple(items))

    def not_(self, items):
        if self.q != 2:
            raise MajUnsupportedError(f"not() is only defined over F_2, not F_{self.q}")
        return Not(items[0])


def _flatten(items, kind: type, attr: str) -> Tuple[Expr, ...]:
    out = []
    for item in items:
        if isinstance(item, kind):
            out.extend(getattr(item, attr))
        else:
            out.append(item)
    return tuple(out)


def parse_expr(text: str, q: int, n: int, K: int) -> Expr:
    """
    Parse one expression.

    Raises:
        ExprSyntaxError: text does not match the grammar
        BadVariableError: variable outside the instance
        MajUnsupportedError: maj/not over a field other than F_2
    """
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        column = getattr(e, "column", None)
        if column is not None and column < 0:
            column = None
        raise ExprSyntaxError("unexpected input", text, column) from None
    try:
        return _ExprBuilder(q, n, K).transform(tree)
    except VisitError as e:
        raise e.orig_exc from None
