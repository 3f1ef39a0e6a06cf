"""
Functional index codes: synthesis, decoding tables and verification.

A Fic maps every message vector (vertex label) to one codeword of a
codebook B over F_q^L. Receiver R_i decodes from the pair
(codeword, H_i(x)); the code is valid exactly when no such pair is shared
by two vectors with different Want-values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .coloring import (
    Coloring,
    dsatur,
    exact_chromatic,
    linear_coloring,
    mu_bound,
)
from .confusion import ConfusionGraph, build_graph
from .exceptions import (
    AssignmentCollisionError,
    CodecError,
    ImproperColoringError,
    SearchTimeout,
    UnknownKeyError,
)
from .field import Word, ceil_log, format_symbols, rank_rows, unrank
from .linalg import matmul
from .models.expressions import variable_name
from .models.instance import FicpInstance, MessageLike, as_label, lift_instance
from .pipeline.artifacts import format_assignment, format_matrix

logger = logging.getLogger(__name__)

DecoderTable = Dict[Tuple[int, Tuple[int, ...]], Tuple[Word, ...]]


@dataclass(frozen=True)
class Conflict:
    """GEL violation: x and x2 share (codeword, H_i) but differ in W_i."""
    receiver: int
    x: int
    x2: int

    def to_dict(self) -> Dict[str, int]:
        return {"receiver": self.receiver + 1, "x": self.x, "x2": self.x2}

    def __str__(self) -> str:
        return f"R{self.receiver + 1}: vertices {self.x} and {self.x2} are confused"


@dataclass(frozen=True, eq=False)
class Fic:
    """
    An encoding of every message vector plus per-receiver decoder tables.

    Attributes:
        instance: The instance this code serves
        encoding: Codeword index per vertex label
        codebook: (|B|, L) array of distinct codewords
        decoders: Per receiver, (codeword index, Has symbols) -> Want-value
        conflicts: Every GEL violation, empty for a valid code
    """
    instance: FicpInstance
    encoding: np.ndarray
    codebook: np.ndarray
    decoders: Tuple[DecoderTable, ...]
    conflicts: Tuple[Conflict, ...] = ()

    @property
    def length(self) -> int:
        return int(self.codebook.shape[1])

    @property
    def size(self) -> int:
        return int(self.codebook.shape[0])

    @property
    def valid(self) -> bool:
        return not self.conflicts

    def codeword(self, index: int) -> Word:
        return Word(self.instance.field, tuple(int(s) for s in self.codebook[index]))

    def codeword_table(self) -> np.ndarray:
        """(q^{nK}, L) array: the codeword sent for each vertex."""
        return self.codebook[self.encoding]

    def classes(self) -> List[Tuple[Tuple[int, ...], Word]]:
        """(vertices, codeword) per codeword, ordered by least vertex."""
        groups: Dict[int, List[int]] = {}
        for x, idx in enumerate(self.encoding.tolist()):
            groups.setdefault(idx, []).append(x)
        ordered = sorted(groups.items(), key=lambda item: item[1][0])
        return [(tuple(vs), self.codeword(idx)) for idx, vs in ordered]


# =============================================================================
# Decoder tables
# =============================================================================

def _split(inst: FicpInstance, row: np.ndarray, funcs) -> Tuple[Word, ...]:
    out, pos = [], 0
    for f in funcs:
        out.append(Word(inst.field, tuple(int(v) for v in row[pos:pos + f.arity_out])))
        pos += f.arity_out
    return tuple(out)


def _receiver_conflicts(inst: FicpInstance, i: int, encoding: np.ndarray) -> Tuple[np.ndarray, List[Conflict]]:
    """First vertex per (codeword, Has class) key, and every vertex that disagrees with it."""
    hc = inst.has_classes(i)
    wc = inst.want_classes(i)
    keys = encoding.astype(np.int64) * (int(hc.max()) + 1) + hc
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    owner = first[inverse]
    bad = np.flatnonzero(wc != wc[owner])
    return first, [Conflict(i, int(owner[x2]), int(x2)) for x2 in bad]


def build_decoders(
    inst: FicpInstance,
    encoding: np.ndarray,
) -> Tuple[Tuple[DecoderTable, ...], Tuple[Conflict, ...]]:
    """
    Tabulate (codeword, H_i(x)) -> W_i(x) for every receiver.

    The first vertex (lowest label) to reach a key sets its entry; each
    later vertex with a different Want-value is reported as a Conflict
    naming both vertices.
    """
    encoding = np.asarray(encoding, dtype=np.int64)
    tables = []
    conflicts: List[Conflict] = []
    for i, receiver in enumerate(inst.receivers):
        first, found = _receiver_conflicts(inst, i, encoding)
        conflicts.extend(found)
        has = inst.has_table(i)
        want = inst.want_table(i)
        table: DecoderTable = {}
        for x in first.tolist():
            key = (int(encoding[x]), tuple(int(v) for v in has[x]))
            table[key] = _split(inst, want[x], receiver.wants)
        tables.append(table)
    conflicts.sort(key=lambda c: (c.receiver, c.x2, c.x))
    return tuple(tables), tuple(conflicts)


def _make_fic(inst: FicpInstance, codewords: np.ndarray) -> Fic:
    """Fic from a per-vertex codeword table, codebook ordered by least vertex."""
    codewords = np.asarray(codewords, dtype=np.int64).reshape(inst.vcount, -1) % inst.q
    _, first, inverse = np.unique(
        rank_rows(codewords, inst.q), return_index=True, return_inverse=True
    )
    inverse = inverse.reshape(-1)
    order = np.argsort(first, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(order.size)
    encoding = relabel[inverse]
    codebook = codewords[first[order]]
    decoders, conflicts = build_decoders(inst, encoding)
    return Fic(inst, encoding, codebook, decoders, conflicts)


def fic_from_codewords(inst: FicpInstance, table) -> Fic:
    """Fic sending row x of ``table`` for vertex x (possibly invalid)."""
    table = np.asarray(table, dtype=np.int64)
    if table.shape[0] != inst.vcount:
        raise CodecError(f"codeword table has {table.shape[0]} rows, need {inst.vcount}")
    return _make_fic(inst, table)


def fic_from_matrix(inst: FicpInstance, matrix, offset: Optional[Sequence[int]] = None) -> Fic:
    """Fic of the (affine) map x -> x M + offset."""
    matrix = np.asarray(matrix, dtype=np.int64)
    if matrix.ndim != 2 or matrix.shape[0] != inst.nk:
        raise CodecError(f"encoding matrix needs {inst.nk} rows, got shape {matrix.shape}")
    codewords = matmul(inst.messages, matrix, inst.q)
    if offset is not None:
        codewords = codewords + np.asarray(offset, dtype=np.int64)[None, :]
    return _make_fic(inst, codewords % inst.q)


def fic_from_assignment(
    inst: FicpInstance,
    entries: Sequence[Tuple[Sequence[int], Sequence[int]]],
) -> Fic:
    """
    Fic from a printed map: (vertex labels, codeword symbols) per class.

    Raises:
        CodecError: classes overlap, miss a vertex or use mixed lengths
        AssignmentCollisionError: two classes share a codeword
    """
    lengths = {len(symbols) for _, symbols in entries}
    if len(lengths) != 1:
        raise CodecError(f"codewords have mixed lengths {sorted(lengths)}")
    length = lengths.pop()
    seen_words: Dict[Tuple[int, ...], int] = {}
    table = np.full((inst.vcount, length), -1, dtype=np.int64)
    covered = np.zeros(inst.vcount, dtype=bool)
    for number, (labels, symbols) in enumerate(entries):
        word = tuple(int(s) for s in symbols)
        if any(not 0 <= s < inst.q for s in word):
            raise CodecError(f"codeword {format_symbols(word, inst.q)} has symbols outside F_{inst.q}")
        if word in seen_words:
            raise AssignmentCollisionError(
                f"classes {seen_words[word] + 1} and {number + 1} share codeword "
                f"{format_symbols(word, inst.q)}"
            )
        seen_words[word] = number
        for v in labels:
            v = int(v)
            if not 0 <= v < inst.vcount:
                raise CodecError(f"vertex {v} outside [0, {inst.vcount})")
            if covered[v]:
                raise CodecError(f"vertex {v} appears in two classes")
            covered[v] = True
            table[v] = word
    if not covered.all():
        missing = np.flatnonzero(~covered)[:5].tolist()
        raise CodecError(f"assignment does not cover vertices {missing}")
    return _make_fic(inst, table)


# =============================================================================
# Synthesis
# =============================================================================

def synthesize(
    inst: FicpInstance,
    coloring: Coloring,
    assignment: Optional[Mapping[int, Union[Word, Sequence[int], str]]] = None,
    graph: Optional[ConfusionGraph] = None,
) -> Fic:
    """
    Turn a proper colouring into a code: every class gets one codeword.

    Classes are numbered by their least vertex; class l gets unrank(l, L)
    with L = ceil(log_q c) unless ``assignment`` maps class ids to words.

    Raises:
        ImproperColoringError: two confusable vertices share a class
        AssignmentCollisionError: the assignment is not injective
    """
    if coloring.vcount != inst.vcount:
        raise CodecError(f"colouring covers {coloring.vcount} vertices, need {inst.vcount}")
    if graph is not None:
        conflict = coloring.first_conflict(graph)
        if conflict is not None:
            raise ImproperColoringError(*conflict)

    c = coloring.num_colors
    if assignment is None:
        length = ceil_log(c, inst.q)
        words = [unrank(l, length, inst.field).symbols for l in range(c)]
    else:
        missing = [l for l in range(c) if l not in assignment]
        if missing:
            raise CodecError(f"assignment has no codeword for classes {missing[:5]}")
        words = []
        for l in range(c):
            w = assignment[l]
            w = w if isinstance(w, Word) else Word.of(inst.field, w)
            words.append(w.symbols)
        if len(set(words)) != len(words):
            raise AssignmentCollisionError("two colour classes were given the same codeword")
        if len({len(w) for w in words}) > 1:
            raise CodecError("assigned codewords have different lengths")

    codebook = np.array(words, dtype=np.int64).reshape(c, -1)
    encoding = np.asarray(coloring.color_of, dtype=np.int64)
    decoders, conflicts = build_decoders(inst, encoding)
    if conflicts:
        first = conflicts[0]
        raise ImproperColoringError(first.x, first.x2)
    logger.info("synthesized code: %d codewords, length %d", c, codebook.shape[1])
    return Fic(inst, encoding, codebook, decoders, ())


# =============================================================================
# Encoding, decoding and checks
# =============================================================================

def encode(fic: Fic, x: MessageLike) -> Word:
    return fic.codeword(int(fic.encoding[as_label(fic.instance, x)]))


def _flatten(values) -> Tuple[int, ...]:
    if isinstance(values, Word):
        return values.symbols
    out: List[int] = []
    for v in values:
        if isinstance(v, Word):
            out.extend(v.symbols)
        else:
            out.append(int(v))
    return tuple(out)


def decode(fic: Fic, i: int, codeword: Union[Word, Sequence[int], str], has) -> Tuple[Word, ...]:
    """
    Receiver R_i's Want-value from the received codeword and its Has-value.

    Raises:
        UnknownKeyError: the pair never occurs for this code
    """
    word = codeword if isinstance(codeword, Word) else Word.of(fic.instance.field, codeword)
    matches = np.flatnonzero((fic.codebook == np.asarray(word.symbols)).all(axis=1)) \
        if len(word) == fic.length else np.array([], dtype=np.int64)
    if matches.size == 0:
        raise UnknownKeyError(f"codeword {word} is not in the codebook")
    key = (int(matches[0]), _flatten(has))
    try:
        return fic.decoders[i][key]
    except KeyError:
        raise UnknownKeyError(
            f"R{i + 1} never receives codeword {word} with Has-value {key[1]}"
        ) from None


@dataclass
class VerificationReport:
    passed: bool
    checked: int
    receivers: int
    failures: List[Conflict] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "message_vectors": self.checked,
            "receivers": self.receivers,
            "failures": [c.to_dict() for c in self.failures],
        }


def verify_fic(inst: FicpInstance, fic: Fic) -> VerificationReport:
    """
    Check D_i(M(x), H_i(x)) = W_i(x) for every x and every receiver.

    Failures are the vectors whose decode disagrees with the table entry
    set by an earlier vector.
    """
    if fic.instance is not inst:
        _, conflicts = build_decoders(inst, fic.encoding)
    else:
        conflicts = fic.conflicts
    return VerificationReport(
        passed=not conflicts,
        checked=inst.vcount,
        receivers=inst.N,
        failures=list(conflicts),
    )


@dataclass
class PerfectionReport:
    length: int
    per_block: Fraction
    mu: int
    valid: bool

    @property
    def perfect(self) -> bool:
        return self.valid and self.length == self.mu

    def to_dict(self) -> Dict[str, object]:
        return {
            "length": self.length,
            "length_per_block": str(self.per_block),
            "mu": self.mu,
            "perfect": self.perfect,
        }


def is_perfect(inst: FicpInstance, fic: Fic) -> PerfectionReport:
    """Compare L with mu of the instance, both in raw q-ary symbols."""
    return PerfectionReport(
        length=fic.length,
        per_block=Fraction(fic.length, inst.n),
        mu=mu_bound(inst),
        valid=verify_fic(inst, fic).passed,
    )


@dataclass(frozen=True, eq=False)
class LinearMap:
    matrix: np.ndarray

    kind = "linear"


@dataclass(frozen=True, eq=False)
class AffineMap:
    matrix: np.ndarray
    offset: Tuple[int, ...]

    kind = "affine"


@dataclass(frozen=True)
class NotLinear:
    witness: int
    reason: str = "M(x) differs from x M for this vertex"

    kind = "nonlinear"


def check_linear_map(inst: FicpInstance, fic: Fic) -> Union[LinearMap, AffineMap, NotLinear]:
    """
    Classify the encoding map as linear, affine or neither.

    The candidate matrix is read off the images of the unit vectors after
    removing M(0); every vertex is then checked against it.
    """
    q, nk = inst.q, inst.nk
    table = fic.codeword_table().astype(np.int64)
    offset = table[0]
    shifted = (table - offset[None, :]) % q
    units = [q ** (nk - 1 - k) for k in range(nk)]
    matrix = shifted[units]
    predicted = matmul(inst.messages, matrix, q)
    bad = np.flatnonzero((predicted != shifted).any(axis=1))
    if bad.size:
        return NotLinear(int(bad[0]))
    if offset.any():
        return AffineMap(matrix, tuple(int(s) for s in offset))
    return LinearMap(matrix)


def render_linear_map(
    matrix,
    n: int = 1,
    q: int = 2,
    offset: Optional[Sequence[int]] = None,
) -> List[str]:
    """Closed form of each transmitted symbol, e.g. "1 + x2 + x3"."""
    matrix = np.asarray(matrix, dtype=np.int64)
    out = []
    for col in range(matrix.shape[1]):
        terms = []
        if offset is not None and offset[col] % q:
            terms.append(str(offset[col] % q))
        for row in np.flatnonzero(matrix[:, col] % q).tolist():
            coeff = int(matrix[row, col] % q)
            name = variable_name(row, n)
            terms.append(name if coeff == 1 else f"{coeff}*{name}")
        out.append(" + ".join(terms) if terms else "0")
    return out


def export_code(fic: Fic) -> str:
    """
    Code-export text: one "{labels} -> codeword" line per class, followed by
    the encoding matrix as a comment block when the map is linear or affine.
    """
    inst = fic.instance
    text = format_assignment(
        [(labels, word.symbols) for labels, word in fic.classes()], inst.q
    )
    form = check_linear_map(inst, fic)
    if isinstance(form, NotLinear):
        return text
    lines = ["# encoding matrix (nK rows, L columns)"]
    lines.extend("# " + line for line in format_matrix(form.matrix, inst.q).splitlines())
    if isinstance(form, AffineMap):
        lines.append("# offset " + format_symbols(form.offset, inst.q))
    return text + "\n".join(lines) + "\n"


# =============================================================================
# Block partitions
# =============================================================================

@dataclass(frozen=True, eq=False)
class PartitionedCode:
    """Independent codes on disjoint groups of sub-packets, concatenated."""
    partition: Tuple[int, ...]
    parts: Tuple[Fic, ...]
    fic: Fic

    @property
    def length(self) -> int:
        return sum(p.length for p in self.parts)


def _solve_part(
    lifted: FicpInstance,
    solver: str,
    budget: Optional[int],
    initial: Optional[Coloring],
    accept_timeout: bool,
    vertex_budget: Optional[int],
) -> Fic:
    graph = build_graph(lifted, vertex_budget=vertex_budget)
    if solver == "linear":
        coset = linear_coloring(graph)
        if coset is not None:
            return fic_from_matrix(lifted, coset.encoding_matrix)
        logger.warning("graph is not Cayley; falling back to DSATUR")
        return synthesize(lifted, dsatur(graph), graph=graph)
    if solver == "dsatur":
        return synthesize(lifted, dsatur(graph), graph=graph)
    if solver != "exact":
        raise CodecError(f"unknown solver {solver!r}")
    try:
        coloring = exact_chromatic(graph, budget=budget, initial=initial).coloring
    except SearchTimeout as e:
        if not accept_timeout:
            raise
        logger.warning("colouring not certified optimal: %s", e)
        coloring = e.best
    return synthesize(lifted, coloring, graph=graph)


def partitioned_synthesize(
    inst: FicpInstance,
    partition: Sequence[int],
    solver: str = "exact",
    budget: Optional[int] = None,
    initial: Optional[Mapping[int, Coloring]] = None,
    accept_timeout: bool = False,
    vertex_budget: Optional[int] = None,
) -> PartitionedCode:
    """
    Code the scalar instance over sum(partition) sub-packets by solving each
    part of the partition on its own and concatenating the codewords.

    Args:
        inst: Scalar (n=1) instance
        partition: Part sizes, e.g. (1, 1) or (2,)
        solver: "exact", "dsatur" or "linear"
        initial: Optional seed colouring per part index
        accept_timeout: Use the best colouring when the exact search runs out

    Raises:
        SearchTimeout: exact colouring exhausted its budget
    """
    partition = tuple(int(m) for m in partition)
    if not partition or any(m < 1 for m in partition):
        raise CodecError(f"partition parts must be positive, got {partition}")
    initial = initial or {}

    parts = []
    for index, m in enumerate(partition):
        lifted = lift_instance(inst, m)
        parts.append(_solve_part(lifted, solver, budget, initial.get(index), accept_timeout, vertex_budget))

    total = sum(partition)
    full = lift_instance(inst, total)
    if len(partition) == 1:
        return PartitionedCode(partition, tuple(parts), parts[0])

    words = np.asarray(full.messages, dtype=np.int64)
    pieces = []
    start = 0
    for m, part in zip(partition, parts):
        # sub-packet j of message k sits at k*n + j in every lift
        index = [k * total + start + j for k in range(inst.K) for j in range(m)]
        labels = rank_rows(words[:, index], inst.q)
        pieces.append(part.codeword_table()[labels])
        start += m
    combined = fic_from_codewords(full, np.concatenate(pieces, axis=1))
    logger.info("partition %s: total length %d", partition, combined.length)
    return PartitionedCode(partition, tuple(parts), combined)
