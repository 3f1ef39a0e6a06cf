"""
Linearity extraction for Has/Want functions.

A function f is affine when f(x) = x @ coeffs + constant for every x, and
linear when additionally constant = 0. Small instances are checked
exhaustively; larger ones fall back to a structural expansion of the AST.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from ..exceptions import NotLinearReceiverError
from .instance import FicpInstance, FuncDef

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 2 ** 16


@dataclass(frozen=True, eq=False)
class LinearForm:
    """coeffs: nK x arity_out matrix; constant: length arity_out vector."""
    coeffs: np.ndarray
    constant: Tuple[int, ...]

    @property
    def is_linear(self) -> bool:
        return not any(self.constant)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearForm):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs) and self.constant == other.constant

    __hash__ = None


@dataclass(frozen=True)
class NotAffine:
    """Extraction result for functions with no affine representation."""
    reason: str
    witness: Optional[int] = None


def extract_linear(
    f: FuncDef,
    inst: FicpInstance,
    limit: int = EXHAUSTIVE_LIMIT,
) -> Union[LinearForm, NotAffine]:
    """
    Find coeffs and constant with f(x) = x @ coeffs + constant.

    Args:
        f: Function to classify
        inst: Instance giving q and nK
        limit: Exhaustive verification is used when q^{nK} <= limit

    Returns:
        LinearForm, or NotAffine when no such form exists
    """
    q, nk = inst.q, inst.nk
    if inst.vcount <= limit:
        xs = inst.messages
        values = f.evaluate(xs, q)
        constant = values[0]
        # unit vector e_k has label q^(nK-1-k)
        units = [q ** (nk - 1 - k) for k in range(nk)]
        coeffs = (values[units] - constant[None, :]) % q
        predicted = (np.asarray(xs, dtype=np.int64) @ coeffs + constant[None, :]) % q
        mismatch = np.flatnonzero((predicted != values).any(axis=1))
        if mismatch.size:
            return NotAffine("no affine form matches every input", int(mismatch[0]))
        return LinearForm(coeffs.astype(np.int64), tuple(int(c) for c in constant))

    logger.debug("extract_linear: structural expansion for q^nK = %d", inst.vcount)
    columns = []
    constant = []
    for e in f.outputs:
        part = e.affine(nk, q)
        if part is None:
            return NotAffine("expression contains a product of non-constants or maj()")
        columns.append(part[0])
        constant.append(int(part[1]))
    coeffs = np.stack(columns, axis=1) if columns else np.zeros((nk, 0), dtype=np.int64)
    return LinearForm(coeffs, tuple(constant))


def receiver_matrices(
    inst: FicpInstance,
    i: int,
    limit: int = EXHAUSTIVE_LIMIT,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    M_{H_i} and M_{W_i}: the stacked coefficient matrices of receiver i.

    Raises:
        NotLinearReceiverError: some function is not linear
    """
    blocks = {"has": [], "wants": []}
    receiver = inst.receivers[i]
    for kind, funcs in (("has", receiver.has), ("wants", receiver.wants)):
        for f in funcs:
            form = extract_linear(f, inst, limit)
            if isinstance(form, NotAffine):
                raise NotLinearReceiverError(i, f"{f.render(inst.n)}: {form.reason}")
            if not form.is_linear:
                raise NotLinearReceiverError(i, f"{f.render(inst.n)} has a constant term")
            blocks[kind].append(form.coeffs)

    def stack(parts):
        if not parts:
            return np.zeros((inst.nk, 0), dtype=np.int64)
        return np.concatenate(parts, axis=1) % inst.q

    return stack(blocks["has"]), stack(blocks["wants"])


def classify_instance(inst: FicpInstance, limit: int = EXHAUSTIVE_LIMIT) -> str:
    """One of "linear", "affine" or "nonlinear"."""
    kind = "linear"
    for receiver in inst.receivers:
        for f in receiver.has + receiver.wants:
            form = extract_linear(f, inst, limit)
            if isinstance(form, NotAffine):
                return "nonlinear"
            if not form.is_linear:
                kind = "affine"
    return kind


def is_linear_instance(inst: FicpInstance, limit: int = EXHAUSTIVE_LIMIT) -> bool:
    return classify_instance(inst, limit) == "linear"
