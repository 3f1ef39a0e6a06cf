"""
Error-correcting functional index codes.

A code corrects delta symbol errors exactly when the codewords of every
confusable pair are at Hamming distance at least 2*delta + 1. Codes are
built by concatenating a valid code with a classical linear block code and
checked both by the distance condition and by exhaustive channel
simulation.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .codec import Fic, fic_from_codewords, fic_from_matrix
from .coloring import max_clique
from .confusion import ConfusionGraph, build_graph, cayley_from_connection_set, confusable, connection_set_linear
from .exceptions import (
    BudgetExceededError,
    DimensionMismatchError,
    EccError,
    NotLinearInstanceError,
    SearchTimeout,
    UnknownCodeError,
)
from .field import Word, all_words, ceil_log, format_symbols, rank_rows, words_of_weight_at_most
from .linalg import matmul, matrix_rank, span
from .models.instance import FicpInstance
from .models.linear import is_linear_instance
from .profiles.profile_loader import default_settings

logger = logging.getLogger(__name__)


# =============================================================================
# Linear block codes
# =============================================================================

@dataclass(frozen=True, eq=False)
class LinearBlockCode:
    """[length, dimension, min_distance] code given by a k x m generator."""
    generator: np.ndarray
    q: int = 2
    name: str = "custom"

    def __post_init__(self):
        g = np.array(self.generator, dtype=np.int64) % self.q
        if g.ndim != 2 or g.shape[0] == 0:
            raise EccError("generator must be a non-empty k x m matrix")
        if matrix_rank(g, self.q) != g.shape[0]:
            raise EccError(f"generator of {self.name} is not full rank")
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)

    @property
    def dimension(self) -> int:
        return int(self.generator.shape[0])

    @property
    def length(self) -> int:
        return int(self.generator.shape[1])

    def codewords(self) -> np.ndarray:
        return span(self.generator, self.q, self.length)

    @cached_property
    def min_distance(self) -> int:
        words = self.codewords()
        weights = np.count_nonzero(words, axis=1)
        return int(weights[weights > 0].min())

    def encode(self, message) -> np.ndarray:
        return matmul(message, self.generator, self.q)

    def __str__(self) -> str:
        return f"{self.name} [{self.length}, {self.dimension}, {self.min_distance}] over F_{self.q}"


_BUILTIN_ROWS = {
    "hamming74": (2, ["1000110", "0100101", "0010011", "0001111"]),
    "shortened633": (2, ["100110", "010101", "001011"]),
    "mds423": (3, ["1012", "0111"]),
}

BUILTIN_CODES = ("repetition",) + tuple(_BUILTIN_ROWS)


def builtin_code(name: str, q: int = 2, delta: int = 1) -> LinearBlockCode:
    """
    Named outer codes.

    ``repetition`` is the [2*delta+1, 1, 2*delta+1] code over F_q; the others
    have a fixed field.

    Raises:
        UnknownCodeError: name is not a built-in code
        EccError: a fixed-field code was requested over another field
    """
    if name == "repetition":
        if delta < 0:
            raise EccError(f"delta must be non-negative, got {delta}")
        return LinearBlockCode(np.ones((1, 2 * delta + 1), dtype=np.int64), q, name)
    if name not in _BUILTIN_ROWS:
        raise UnknownCodeError(name)
    field_size, rows = _BUILTIN_ROWS[name]
    if q != field_size:
        raise EccError(f"{name} is defined over F_{field_size}, not F_{q}")
    generator = np.array([[int(ch) for ch in row] for row in rows], dtype=np.int64)
    return LinearBlockCode(generator, field_size, name)


# =============================================================================
# Delta codes
# =============================================================================

@dataclass(frozen=True, eq=False)
class DeltaFic:
    """
    A code meant to correct ``delta`` symbol errors.

    Attributes:
        fic: The code actually transmitted
        delta: Error radius
        outer: Outer code when built by concatenation
        inner_length: Length of the inner code before concatenation
        matrix: Encoding matrix for linear constructions
    """
    fic: Fic
    delta: int
    outer: Optional[LinearBlockCode] = None
    inner_length: Optional[int] = None
    matrix: Optional[np.ndarray] = None

    @property
    def length(self) -> int:
        return self.fic.length

    @property
    def provenance(self) -> str:
        if self.outer is None:
            return "direct"
        return f"concatenated({self.outer.name})"


CodeLike = Union[Fic, DeltaFic, np.ndarray]


def _codeword_table(inst: FicpInstance, code: CodeLike) -> np.ndarray:
    if isinstance(code, DeltaFic):
        return code.fic.codeword_table()
    if isinstance(code, Fic):
        return code.codeword_table()
    table = np.asarray(code, dtype=np.int64)
    if table.shape[0] != inst.vcount:
        raise DimensionMismatchError(f"codeword table has {table.shape[0]} rows, need {inst.vcount}")
    return table


@dataclass(frozen=True)
class MinDistance:
    distance: int
    x: int
    x2: int


def confusable_min_distance(
    inst: FicpInstance,
    code: CodeLike,
    graph: Optional[ConfusionGraph] = None,
) -> Optional[MinDistance]:
    """
    Smallest Hamming distance between the codewords of a confusable pair.

    Ties go to the lowest (x, x2). None when no pair is confusable.
    """
    table = _codeword_table(inst, code)
    graph = graph if graph is not None else build_graph(inst)
    vcount = graph.vcount
    best: Optional[MinDistance] = None
    block = max(1, 2 ** 20 // max(1, vcount * max(1, table.shape[1])))
    upper = np.triu(np.ones((vcount, vcount), dtype=bool), k=1)
    for start in range(0, vcount, block):
        stop = min(start + block, vcount)
        mask = graph.adjacency[start:stop] & upper[start:stop]
        if not mask.any():
            continue
        dist = (table[start:stop, None, :] != table[None, :, :]).sum(axis=2)
        dist = np.where(mask, dist, np.iinfo(np.int64).max)
        flat = int(np.argmin(dist))
        value = int(dist.flat[flat])
        if best is None or value < best.distance:
            row, col = divmod(flat, vcount)
            best = MinDistance(value, start + row, col)
    return best


@dataclass
class DeltaReport:
    passed: bool
    delta: int
    min_distance: Optional[int]
    witness: Optional[Dict[str, int]] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "delta": self.delta,
            "required_distance": 2 * self.delta + 1,
            "min_distance": self.min_distance,
            "witness": self.witness,
        }


def verify_delta(inst: FicpInstance, code: CodeLike, delta: int) -> DeltaReport:
    """
    Every confusable pair must have codewords at distance >= 2*delta + 1.

    A failing report names the closest pair and a receiver confusing it.
    """
    found = confusable_min_distance(inst, code)
    if found is None or found.distance >= 2 * delta + 1:
        return DeltaReport(True, delta, found.distance if found else None)
    receiver = next(i for i in range(inst.N) if confusable(inst, i, found.x, found.x2))
    witness = {"receiver": receiver + 1, "x": found.x, "x2": found.x2, "distance": found.distance}
    return DeltaReport(False, delta, found.distance, witness)


def verify_delta_linear(inst: FicpInstance, matrix, delta: int) -> DeltaReport:
    """
    Weight check of s M over the union of the connection sets.

    Raises:
        NotLinearInstanceError: some receiver is not linear
    """
    if not is_linear_instance(inst):
        raise NotLinearInstanceError("the weight condition needs a linear instance")
    matrix = np.asarray(matrix, dtype=np.int64)
    if matrix.shape[0] != inst.nk:
        raise DimensionMismatchError(f"encoding matrix needs {inst.nk} rows, got {matrix.shape[0]}")
    elements = set()
    for i in range(inst.N):
        elements |= connection_set_linear(inst, i).elements
    if not elements:
        return DeltaReport(True, delta, None)
    labels = np.array(sorted(elements), dtype=np.int64)
    words = np.asarray(all_words(inst.q, inst.nk), dtype=np.int64)[labels]
    weights = np.count_nonzero(matmul(words, matrix, inst.q), axis=1)
    index = int(np.argmin(weights))
    lightest = int(weights[index])
    if lightest >= 2 * delta + 1:
        return DeltaReport(True, delta, lightest)
    witness = {"x": 0, "x2": int(labels[index]), "distance": lightest}
    return DeltaReport(False, delta, lightest, witness)


def concatenate(
    inst: FicpInstance,
    inner: Union[Fic, np.ndarray],
    outer: LinearBlockCode,
) -> DeltaFic:
    """
    Protect an inner code with an outer linear block code.

    A matrix M0 becomes M0 G. A Fic whose length equals the outer dimension
    has each codeword encoded; otherwise its codebook index is written in
    ``outer.dimension`` symbols first, which needs q^k >= |B|.

    Raises:
        DimensionMismatchError: the outer code cannot carry the inner code
    """
    if outer.q != inst.q:
        raise DimensionMismatchError(f"outer code is over F_{outer.q}, instance over F_{inst.q}")
    delta = (outer.min_distance - 1) // 2
    k = outer.dimension

    if not isinstance(inner, Fic):
        m0 = np.asarray(inner, dtype=np.int64)
        if m0.ndim != 2 or m0.shape[0] != inst.nk:
            raise DimensionMismatchError(f"inner matrix needs {inst.nk} rows, got shape {m0.shape}")
        if m0.shape[1] != k:
            raise DimensionMismatchError(
                f"inner length {m0.shape[1]} differs from outer dimension {k}"
            )
        m1 = matmul(m0, outer.generator, inst.q)
        return DeltaFic(fic_from_matrix(inst, m1), delta, outer, k, m1)

    if inner.length == k:
        table = outer.encode(inner.codeword_table())
    elif inst.q ** k >= inner.size:
        indices = np.asarray(all_words(inst.q, k), dtype=np.int64)[inner.encoding]
        table = outer.encode(indices)
    else:
        raise DimensionMismatchError(
            f"outer code has {inst.q ** k} codewords, inner code needs {inner.size}"
        )
    logger.info("concatenated with %s: length %d, delta %d", outer, outer.length, delta)
    return DeltaFic(fic_from_codewords(inst, table), delta, outer, inner.length)


# =============================================================================
# Singleton bound
# =============================================================================

def singleton_bound(l_opt: int, delta: int) -> int:
    """L_delta >= L_opt + 2*delta."""
    return l_opt + 2 * delta


@dataclass(frozen=True)
class SingletonComparison:
    bound: int
    length: int
    meets: bool
    verdict: str

    def to_dict(self) -> Dict[str, object]:
        return {"bound": self.bound, "length": self.length, "meets": self.meets, "verdict": self.verdict}


def compare_singleton(length: int, l_opt: int, delta: int, valid: bool = True) -> SingletonComparison:
    """Optimality is only claimed when the length equals the bound."""
    bound = singleton_bound(l_opt, delta)
    if not valid:
        verdict = "invalid"
    elif length == bound:
        verdict = "optimal"
    else:
        verdict = "valid, optimality unknown"
    return SingletonComparison(bound, length, valid and length == bound, verdict)


# =============================================================================
# Codebook search
# =============================================================================

@dataclass(frozen=True, eq=False)
class CodebookResult:
    words: np.ndarray
    length: int
    certified: bool
    q: int = 2

    def __str__(self) -> str:
        return ", ".join(format_symbols(w, self.q) for w in self.words)


def _lexicode(c: int, d: int, q: int, length: int) -> Optional[np.ndarray]:
    words = np.asarray(all_words(q, length), dtype=np.int64)
    chosen: List[int] = []
    for label in range(words.shape[0]):
        if all(np.count_nonzero(words[label] != words[j]) >= d for j in chosen):
            chosen.append(label)
            if len(chosen) == c:
                return words[chosen]
    return None


def search_codebook(
    c: int,
    d: int,
    q: int = 2,
    budget: Optional[int] = None,
    limit: Optional[int] = None,
) -> CodebookResult:
    """
    Shortest code of c words with pairwise distance >= d.

    A lexicode gives an upper bound on the length; shorter lengths are then
    decided exactly by a clique search while q^length <= limit.

    Raises:
        SearchTimeout: a clique search ran out of budget; ``best`` holds the
            shortest code found
    """
    if c < 1 or d < 1:
        raise EccError(f"need c >= 1 and d >= 1, got c={c}, d={d}")
    settings = default_settings()
    budget = settings.clique_budget if budget is None else budget
    limit = settings.codebook_limit if limit is None else limit

    lower = ceil_log(c, q) + d - 1 if c > 1 else 0

    length = lower
    best = _lexicode(c, d, q, length)
    while best is None:
        length += 1
        best = _lexicode(c, d, q, length)
    result = CodebookResult(best, length, length == lower, q)

    for n in range(lower, length):
        if q ** n > limit:
            logger.warning("length %d exceeds the exact search limit; keeping the lexicode", n)
            return result
        weights = np.count_nonzero(all_words(q, n), axis=1)
        far = np.flatnonzero(weights >= d).tolist()
        graph = cayley_from_connection_set(far, q, n)
        try:
            clique = max_clique(graph, budget=budget, target=c)
        except SearchTimeout as e:
            raise SearchTimeout(
                f"codebook search at length {n} ran out of budget",
                lower=n,
                upper=result.length,
                best=result,
                nodes=e.nodes,
            ) from None
        if clique.size >= c:
            words = np.asarray(all_words(q, n), dtype=np.int64)[list(clique.witness[:c])]
            return CodebookResult(words, n, True, q)
    return CodebookResult(result.words, result.length, True, q)


# =============================================================================
# Channel simulation
# =============================================================================

_SIM_CELLS = 2 ** 22


@dataclass(frozen=True)
class SimulationFailure:
    x: int
    pattern: Word
    receiver: int

    def to_dict(self) -> Dict[str, object]:
        return {"x": self.x, "pattern": str(self.pattern), "receiver": self.receiver + 1}


@dataclass
class SimulationReport:
    trials: int
    patterns: int
    failures: List[SimulationFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "trials": self.trials,
            "patterns": self.patterns,
            "failure_count": len(self.failures),
            "failures": [f.to_dict() for f in self.failures[:50]],
        }


def _receiver_failures(
    inst: FicpInstance,
    i: int,
    fic: Fic,
    patterns: np.ndarray,
) -> List[Tuple[int, int, int]]:
    """(x, pattern index, receiver) for every failed decode of receiver i."""
    q = inst.q
    hc = inst.has_classes(i)
    wc = inst.want_classes(i)
    encoding = fic.encoding
    codebook = fic.codebook
    codeword_rank = rank_rows(codebook, q)
    out: List[Tuple[int, int, int]] = []
    for h in np.unique(hc).tolist():
        members = np.flatnonzero(hc == h)
        candidates = np.unique(encoding[members])
        candidates = candidates[np.argsort(codeword_rank[candidates], kind="stable")]
        # decoded Want class per candidate codeword: that of its first vertex
        owner_want = np.array(
            [wc[members[np.flatnonzero(encoding[members] == cand)[0]]] for cand in candidates]
        )
        cand_words = codebook[candidates]
        step = max(1, _SIM_CELLS // max(1, patterns.size * candidates.size))
        for start in range(0, members.size, step):
            chunk = members[start:start + step]
            received = (codebook[encoding[chunk]][:, None, :] + patterns[None, :, :]) % q
            dist = (received[:, :, None, :] != cand_words[None, None, :, :]).sum(axis=3)
            decoded = owner_want[np.argmin(dist, axis=2)]
            bad_x, bad_p = np.nonzero(decoded != wc[chunk][:, None])
            out.extend((int(chunk[a]), int(p), i) for a, p in zip(bad_x, bad_p))
    return out


def simulate_errors(
    inst: FicpInstance,
    code: Union[DeltaFic, Fic],
    delta: Optional[int] = None,
    pattern: Optional[Union[Word, str]] = None,
    budget: Optional[int] = None,
    workers: Optional[int] = None,
) -> SimulationReport:
    """
    Send every message vector through every error pattern and decode.

    Each receiver decodes to the nearest codeword among those it can see
    with its Has-value (ties to the lowest codeword label), then reads its
    decoder table. With ``pattern`` only that error word is injected;
    otherwise every pattern of weight <= delta is tried.

    Raises:
        BudgetExceededError: vectors x patterns exceeds the trial budget
    """
    fic = code.fic if isinstance(code, DeltaFic) else code
    if delta is None:
        delta = code.delta if isinstance(code, DeltaFic) else 0
    settings = default_settings()
    budget = settings.simulation_budget if budget is None else budget

    if pattern is not None:
        word = pattern if isinstance(pattern, Word) else Word.of(inst.q, pattern)
        if len(word) != fic.length:
            raise DimensionMismatchError(f"pattern has {len(word)} symbols, code length is {fic.length}")
        patterns = word.to_array()[None, :]
    else:
        patterns = words_of_weight_at_most(inst.q, fic.length, delta)

    trials = inst.vcount * patterns.shape[0]
    if trials > budget:
        raise BudgetExceededError(trials, budget)
    logger.debug("simulating %d trials (%d patterns)", trials, patterns.shape[0])

    for i in range(inst.N):
        inst.has_classes(i)
        inst.want_classes(i)

    workers = workers or settings.worker_count
    chunk = max(1, math.ceil(patterns.shape[0] / workers))
    jobs = [(start, patterns[start:start + chunk]) for start in range(0, patterns.shape[0], chunk)]

    def run(job) -> List[Tuple[int, int, int]]:
        start, block = job
        found = []
        for i in range(inst.N):
            found.extend((x, start + p, r) for x, p, r in _receiver_failures(inst, i, fic, block))
        return found

    if workers == 1 or len(jobs) == 1:
        results = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))

    raw = sorted(t for part in results for t in part)
    failures = [
        SimulationFailure(x, Word(inst.field, tuple(int(s) for s in patterns[p])), r)
        for x, p, r in raw
    ]
    return SimulationReport(trials, int(patterns.shape[0]), failures)
