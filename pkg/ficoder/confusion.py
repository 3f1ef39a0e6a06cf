"""
Confusion graphs.

Two message vectors x, x' are confusable for receiver R_i when
H_i(x) = H_i(x') and W_i(x) != W_i(x'); the confusion graph joins every
confusable pair over all receivers. Graphs are dense boolean adjacency
matrices on the q^{nK} vertex labels.

For linear instances the graph is a Cayley graph of F_q^{nK}: x ~ y exactly
when y - x lies in the connection set S. Such graphs carry S (as vertex
labels) in ``cayley_set`` so that searches can exploit vertex-transitivity.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    BadConnectionSetError,
    NotLinearReceiverError,
    SameVertexError,
    SizeLimitError,
    VertexMismatchError,
)
from .field import Word, all_words, rank, rank_rows, unrank
from .linalg import null_space, span
from .models.instance import FicpInstance, MessageLike, as_label, eval_func
from .models.linear import EXHAUSTIVE_LIMIT, is_linear_instance, receiver_matrices
from .profiles.profile_loader import default_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConfusionGraph:
    """
    Simple undirected graph on the labels 0..q^{nk}-1.

    Attributes:
        q: Field size
        nk: Number of scalar symbols per vertex
        adjacency: Symmetric boolean matrix with empty diagonal
        cayley_set: Connection set labels when the graph is Cayley
    """
    q: int
    nk: int
    adjacency: np.ndarray
    cayley_set: Optional[FrozenSet[int]] = None

    def __post_init__(self):
        adjacency = np.array(self.adjacency, dtype=bool)
        vcount = self.q ** self.nk
        if adjacency.shape != (vcount, vcount):
            raise VertexMismatchError(
                f"adjacency shape {adjacency.shape} does not match q^nk = {vcount}"
            )
        if adjacency.diagonal().any():
            raise ValueError("confusion graphs have no self-loops")
        if not np.array_equal(adjacency, adjacency.T):
            raise ValueError("adjacency matrix must be symmetric")
        adjacency.setflags(write=False)
        object.__setattr__(self, "adjacency", adjacency)
        if self.cayley_set is not None:
            object.__setattr__(self, "cayley_set", frozenset(int(s) for s in self.cayley_set))

    @property
    def vcount(self) -> int:
        return self.adjacency.shape[0]

    @property
    def is_cayley(self) -> bool:
        return self.cayley_set is not None

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u, v])

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[v])

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Edges (u, v) with u < v in ascending order."""
        rows, cols = np.nonzero(np.triu(self.adjacency, k=1))
        for u, v in zip(rows.tolist(), cols.tolist()):
            yield u, v

    def is_regular(self) -> Tuple[bool, Optional[int]]:
        """(regular?, common degree or None)."""
        degrees = self.degrees()
        if degrees.size == 0:
            return True, 0
        first = int(degrees[0])
        if np.all(degrees == first):
            return True, first
        return False, None

    def complement(self) -> "ConfusionGraph":
        adjacency = ~self.adjacency
        np.fill_diagonal(adjacency, False)
        cayley = None
        if self.cayley_set is not None:
            cayley = frozenset(range(1, self.vcount)) - self.cayley_set
        return ConfusionGraph(self.q, self.nk, adjacency, cayley)

    @cached_property
    def bitsets(self) -> List[int]:
        """Neighbourhoods as Python integers, bit v set for neighbour v."""
        packed = np.packbits(self.adjacency, axis=1, bitorder="little")
        return [int.from_bytes(row.tobytes(), "little") for row in packed]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConfusionGraph):
            return NotImplemented
        return (
            self.q == other.q
            and self.nk == other.nk
            and np.array_equal(self.adjacency, other.adjacency)
        )

    __hash__ = None


@dataclass(frozen=True)
class ConnectionSet:
    """Difference set S of a Cayley graph on F_q^{nk}, as vertex labels."""
    q: int
    nk: int
    elements: FrozenSet[int]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, label) -> bool:
        return int(label) in self.elements

    def words(self) -> List[Word]:
        return [unrank(s, self.nk, self.q) for s in sorted(self.elements)]

    def is_negation_closed(self) -> bool:
        return all(_negate(s, self.q, self.nk) in self.elements for s in self.elements)

    def union(self, other: "ConnectionSet") -> "ConnectionSet":
        if (self.q, self.nk) != (other.q, other.nk):
            raise VertexMismatchError("connection sets live in different spaces")
        return ConnectionSet(self.q, self.nk, self.elements | other.elements)

    def __str__(self) -> str:
        return "{" + ", ".join(str(w) for w in self.words()) + "}"


def _negate(label: int, q: int, nk: int) -> int:
    return rank(-unrank(label, nk, q))


# =============================================================================
# Confusability and graph construction
# =============================================================================

def confusable(inst: FicpInstance, i: int, x: MessageLike, x2: MessageLike) -> bool:
    """
    Generalized exclusive law test for receiver i.

    Raises:
        SameVertexError: x and x2 are the same message vector
    """
    a, b = as_label(inst, x), as_label(inst, x2)
    if a == b:
        raise SameVertexError(f"vertex {a} compared with itself")
    wa, wb = unrank(a, inst.nk, inst.field), unrank(b, inst.nk, inst.field)
    receiver = inst.receivers[i]
    same_has = all(eval_func(f, wa) == eval_func(f, wb) for f in receiver.has)
    if not same_has:
        return False
    return any(eval_func(f, wa) != eval_func(f, wb) for f in receiver.wants)


def _check_budget(vcount: int, vertex_budget: Optional[int]) -> None:
    budget = default_settings().vertex_budget if vertex_budget is None else vertex_budget
    if vcount > budget:
        raise SizeLimitError(vcount, budget)


def _row_blocks(vcount: int, workers: int) -> List[Tuple[int, int]]:
    size = max(1, math.ceil(vcount / (4 * max(1, workers))))
    return [(start, min(start + size, vcount)) for start in range(0, vcount, size)]


def _gel_adjacency(
    inst: FicpInstance,
    receivers: Sequence[int],
    workers: Optional[int],
) -> np.ndarray:
    vcount = inst.vcount
    classes = [(inst.has_classes(i), inst.want_classes(i)) for i in receivers]
    adjacency = np.zeros((vcount, vcount), dtype=bool)

    def fill(block: Tuple[int, int]) -> None:
        start, stop = block
        rows = adjacency[start:stop]
        for hc, wc in classes:
            rows |= (hc[start:stop, None] == hc[None, :]) & (wc[start:stop, None] != wc[None, :])

    workers = workers or default_settings().worker_count
    blocks = _row_blocks(vcount, workers)
    if workers == 1 or len(blocks) == 1:
        for block in blocks:
            fill(block)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, blocks))
    return adjacency


def build_receiver_graph(
    inst: FicpInstance,
    i: int,
    vertex_budget: Optional[int] = None,
    workers: Optional[int] = None,
) -> ConfusionGraph:
    """
    Confusion graph of a single receiver.

    Raises:
        SizeLimitError: q^{nK} exceeds the vertex budget
    """
    _check_budget(inst.vcount, vertex_budget)
    adjacency = _gel_adjacency(inst, [i], workers)
    cayley = None
    if _receiver_is_linear(inst, i):
        cayley = connection_set_linear(inst, i).elements
    return ConfusionGraph(inst.q, inst.nk, adjacency, cayley)


def build_graph(
    inst: FicpInstance,
    vertex_budget: Optional[int] = None,
    workers: Optional[int] = None,
    linearity_limit: int = EXHAUSTIVE_LIMIT,
) -> ConfusionGraph:
    """
    Confusion graph C(F): the union of every receiver's GEL edges.

    The result does not depend on the worker count.

    Raises:
        SizeLimitError: q^{nK} exceeds the vertex budget
    """
    _check_budget(inst.vcount, vertex_budget)
    logger.debug("building confusion graph: %d vertices, %d receivers", inst.vcount, inst.N)
    adjacency = _gel_adjacency(inst, range(inst.N), workers)

    cayley = None
    if is_linear_instance(inst, linearity_limit):
        elements: FrozenSet[int] = frozenset()
        for i in range(inst.N):
            elements |= connection_set_linear(inst, i, linearity_limit).elements
        cayley = elements
    graph = ConfusionGraph(inst.q, inst.nk, adjacency, cayley)
    logger.info(
        "confusion graph: %d vertices, %d edges%s",
        graph.vcount,
        graph.edge_count,
        ", Cayley" if cayley is not None else "",
    )
    return graph


def _receiver_is_linear(inst: FicpInstance, i: int) -> bool:
    try:
        receiver_matrices(inst, i)
    except NotLinearReceiverError:
        return False
    return True


def graph_sum(graphs: Iterable[ConfusionGraph]) -> ConfusionGraph:
    """
    Union of edge sets on a shared vertex set.

    Raises:
        VertexMismatchError: graphs differ in q or nk
    """
    graphs = list(graphs)
    if not graphs:
        raise VertexMismatchError("graph_sum needs at least one graph")
    first = graphs[0]
    adjacency = np.zeros_like(first.adjacency)
    cayley: Optional[FrozenSet[int]] = frozenset()
    for g in graphs:
        if (g.q, g.nk) != (first.q, first.nk):
            raise VertexMismatchError(
                f"cannot add graphs on F_{g.q}^{g.nk} and F_{first.q}^{first.nk}"
            )
        adjacency |= g.adjacency
        cayley = None if cayley is None or g.cayley_set is None else cayley | g.cayley_set
    return ConfusionGraph(first.q, first.nk, adjacency, cayley)


# =============================================================================
# OR power
# =============================================================================

def interleave_permutation(q: int, K: int, m: int) -> np.ndarray:
    """
    perm[L] = product label of the lifted vertex L.

    The product of m copies of a K-symbol graph orders symbols block by block
    (position j*K + k); lifted instances keep each message's sub-packets
    together (position k*m + j).
    """
    lifted = np.asarray(all_words(q, K * m), dtype=np.int64)
    index = np.array([k * m + j for j in range(m) for k in range(K)], dtype=np.int64)
    return rank_rows(lifted[:, index], q)


def or_power(
    g: ConfusionGraph,
    m: int,
    vertex_budget: Optional[int] = None,
) -> ConfusionGraph:
    """
    Co-normal m-th power, relabelled to the lifted-instance vertex order.

    Two distinct tuples are adjacent when at least one coordinate pair is.

    Raises:
        SizeLimitError: q^{m*nk} exceeds the vertex budget
    """
    if m < 1:
        raise ValueError(f"power must be positive, got {m}")
    if m == 1:
        return g
    _check_budget(g.vcount ** m, vertex_budget)

    non_adjacent = (~g.adjacency).astype(np.uint8)
    product = non_adjacent
    for _ in range(m - 1):
        product = np.kron(product, non_adjacent)
    adjacency = product == 0

    perm = interleave_permutation(g.q, g.nk, m)
    adjacency = adjacency[np.ix_(perm, perm)]

    cayley = None
    if g.cayley_set is not None:
        cayley = frozenset(np.flatnonzero(adjacency[0]).tolist())
    return ConfusionGraph(g.q, g.nk * m, adjacency, cayley)


# =============================================================================
# Cayley structure
# =============================================================================

def connection_set_linear(
    inst: FicpInstance,
    i: int,
    limit: int = EXHAUSTIVE_LIMIT,
) -> ConnectionSet:
    """
    S_i = {s : s M_H = 0 and s M_W != 0} for a linear receiver.

    Raises:
        NotLinearReceiverError: some Has/Want function of R_i is not linear
    """
    m_has, m_want = receiver_matrices(inst, i, limit)
    q, nk = inst.q, inst.nk
    basis = null_space(m_has.T, q) if m_has.shape[1] else np.eye(nk, dtype=np.int64)
    kernel = span(basis, q, nk)
    if m_want.shape[1]:
        demanded = ((kernel @ m_want) % q).any(axis=1)
    else:
        demanded = np.zeros(kernel.shape[0], dtype=bool)
    labels = rank_rows(kernel[demanded], q)
    return ConnectionSet(q, nk, frozenset(int(s) for s in labels))


def cayley_from_connection_set(
    S: Union[ConnectionSet, Iterable[Union[int, Word]]],
    q: Optional[int] = None,
    nk: Optional[int] = None,
) -> ConfusionGraph:
    """
    Cayley graph of F_q^{nk}: x adjacent to x + s for every s in S.

    Raises:
        BadConnectionSetError: S contains zero, is not closed under
            negation, or holds labels outside the space
    """
    if isinstance(S, ConnectionSet):
        q, nk, elements = S.q, S.nk, set(S.elements)
    else:
        if q is None or nk is None:
            raise BadConnectionSetError("q and nk are required for a plain connection set")
        elements = {rank(s) if isinstance(s, Word) else int(s) for s in S}
    vcount = q ** nk
    if any(not 0 <= s < vcount for s in elements):
        raise BadConnectionSetError(f"connection set has labels outside [0, {vcount})")
    if 0 in elements:
        raise BadConnectionSetError("connection set contains the zero word")
    connection = ConnectionSet(q, nk, frozenset(elements))
    if not connection.is_negation_closed():
        raise BadConnectionSetError("connection set is not closed under negation")

    words = np.asarray(all_words(q, nk), dtype=np.int64)
    adjacency = np.zeros((vcount, vcount), dtype=bool)
    rows = np.arange(vcount)
    for s in sorted(elements):
        shift = unrank(s, nk, q).to_array()
        adjacency[rows, rank_rows((words + shift) % q, q)] = True
    return ConfusionGraph(q, nk, adjacency, connection.elements)


def export_dot(g: ConfusionGraph, labels: Optional[Mapping[int, str]] = None) -> str:
    """
    Undirected DOT text with decimal vertex labels, ascending order.

    Args:
        g: Graph to export
        labels: Optional extra text per vertex (for example its colour)
    """
    lines = ["graph confusion {"]
    for v in range(g.vcount):
        if labels is not None and v in labels:
            lines.append(f'  {v} [label="{v}\\n{labels[v]}"];')
        else:
            lines.append(f"  {v};")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
