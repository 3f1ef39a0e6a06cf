"""
Vertex colouring, cliques, independent sets and code-size bounds.

Every search is bounded by a node budget. When a budget runs out the search
raises SearchTimeout carrying the best bounds and witness found so far.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .confusion import ConfusionGraph
from .exceptions import MissingAlphaError, SearchTimeout
from .field import all_words, ceil_log, inv, rank_rows
from .linalg import null_space
from .models.instance import FicpInstance
from .profiles.profile_loader import default_settings

logger = logging.getLogger(__name__)

ENTROPY_TOLERANCE = 1e-9


# =============================================================================
# Colorings
# =============================================================================

@dataclass(frozen=True)
class Coloring:
    """
    A partition of the vertices into colour classes.

    Colour ids are canonical: classes are numbered by their least vertex.
    """
    color_of: Tuple[int, ...]

    @classmethod
    def from_colors(cls, colors: Sequence[int]) -> "Coloring":
        relabel: Dict[int, int] = {}
        out = []
        for c in colors:
            c = int(c)
            if c not in relabel:
                relabel[c] = len(relabel)
            out.append(relabel[c])
        return cls(tuple(out))

    @classmethod
    def from_classes(cls, classes: Sequence[Sequence[int]], vcount: int) -> "Coloring":
        colors = [-1] * vcount
        for cid, members in enumerate(classes):
            for v in members:
                if colors[v] != -1:
                    raise ValueError(f"vertex {v} appears in two classes")
                colors[v] = cid
        missing = [v for v, c in enumerate(colors) if c == -1]
        if missing:
            raise ValueError(f"classes do not cover vertices {missing[:5]}")
        return cls.from_colors(colors)

    @property
    def vcount(self) -> int:
        return len(self.color_of)

    @property
    def num_colors(self) -> int:
        return max(self.color_of) + 1 if self.color_of else 0

    def classes(self) -> List[Tuple[int, ...]]:
        buckets: List[List[int]] = [[] for _ in range(self.num_colors)]
        for v, c in enumerate(self.color_of):
            buckets[c].append(v)
        return [tuple(b) for b in buckets]

    def first_conflict(self, g: ConfusionGraph) -> Optional[Tuple[int, int]]:
        """Lowest edge (u, v) whose ends share a colour, or None."""
        colors = np.asarray(self.color_of)
        same = (colors[:, None] == colors[None, :]) & g.adjacency
        rows, cols = np.nonzero(np.triu(same, k=1))
        if rows.size == 0:
            return None
        return int(rows[0]), int(cols[0])

    def is_proper(self, g: ConfusionGraph) -> bool:
        return self.vcount == g.vcount and self.first_conflict(g) is None


@dataclass(frozen=True)
class CosetColoring:
    """Colouring by the cosets of a subspace U that avoids the connection set."""
    coloring: Coloring
    kernel_basis: np.ndarray
    q: int

    @property
    def dimension(self) -> int:
        return int(self.kernel_basis.shape[0])

    @property
    def encoding_matrix(self) -> np.ndarray:
        """nK x (nK - dim U) matrix whose left kernel is U."""
        return null_space(self.kernel_basis, self.q).T


@dataclass(frozen=True)
class CliqueResult:
    size: int
    witness: Tuple[int, ...]
    certified: bool = True


@dataclass(frozen=True)
class ChromaticResult:
    chi: int
    coloring: Coloring
    lower: int
    nodes: int = 0
    seed: str = "dsatur"


# =============================================================================
# DSATUR
# =============================================================================

def dsatur(g: ConfusionGraph) -> Coloring:
    """
    Greedy DSATUR colouring.

    Picks the uncoloured vertex of highest saturation, then highest degree,
    then lowest label, and gives it the smallest free colour.
    """
    vcount = g.vcount
    degrees = g.degrees().astype(np.int64)
    neighbours = [np.flatnonzero(g.adjacency[v]) for v in range(vcount)]
    seen: List[set] = [set() for _ in range(vcount)]
    saturation = np.zeros(vcount, dtype=np.int64)
    colors = np.full(vcount, -1, dtype=np.int64)

    scale = (int(degrees.max()) + 1 if vcount else 1) * vcount
    static = degrees * vcount + (vcount - 1 - np.arange(vcount))
    for _ in range(vcount):
        score = saturation * scale + static
        score[colors >= 0] = -1
        v = int(np.argmax(score))
        c = 0
        while c in seen[v]:
            c += 1
        colors[v] = c
        for u in neighbours[v]:
            if c not in seen[u]:
                seen[u].add(c)
                saturation[u] += 1
    return Coloring.from_colors(colors.tolist())


# =============================================================================
# Cliques and independent sets
# =============================================================================

class _CliqueSearch:
    """Branch and bound with greedy colour-class bounds on integer bitsets."""

    def __init__(self, g: ConfusionGraph, budget: int, target: Optional[int]):
        self.nbr = g.bitsets
        self.budget = budget
        self.target = target
        self.nodes = 0
        self.best: Tuple[int, ...] = ()
        self.root_bound = 0

    def _color_sort(self, candidates: int) -> Tuple[List[int], List[int]]:
        order, bounds = [], []
        color = 0
        uncolored = candidates
        while uncolored:
            color += 1
            available = uncolored
            while available:
                v = (available & -available).bit_length() - 1
                available &= ~self.nbr[v] & ~(1 << v)
                uncolored &= ~(1 << v)
                order.append(v)
                bounds.append(color)
        return order, bounds

    def run(self, clique: List[int], candidates: int) -> None:
        if not candidates:
            if len(clique) > len(self.best):
                self.best = tuple(sorted(clique))
            return
        self.root_bound = len(clique) + self._color_sort(candidates)[1][-1]
        self._expand(clique, candidates)

    def _expand(self, clique: List[int], candidates: int) -> bool:
        order, bounds = self._color_sort(candidates)
        for v, bound in zip(reversed(order), reversed(bounds)):
            if len(clique) + bound <= len(self.best):
                return False
            self.nodes += 1
            if self.nodes > self.budget:
                raise SearchTimeout(
                    "clique search budget exhausted",
                    lower=len(self.best),
                    upper=self.root_bound,
                    best=self.best,
                    nodes=self.nodes,
                )
            clique.append(v)
            remaining = candidates & self.nbr[v]
            if remaining:
                done = self._expand(clique, remaining)
            else:
                if len(clique) > len(self.best):
                    self.best = tuple(sorted(clique))
                done = self.target is not None and len(self.best) >= self.target
            clique.pop()
            if done:
                return True
            candidates &= ~(1 << v)
        return False


def max_clique(
    g: ConfusionGraph,
    budget: Optional[int] = None,
    target: Optional[int] = None,
    root: Optional[int] = None,
) -> CliqueResult:
    """
    Maximum clique by branch and bound.

    Args:
        g: Graph to search
        budget: Node expansion limit (profile clique_budget by default)
        target: Stop as soon as a clique of this size is found
        root: Only search cliques containing this vertex; Cayley graphs
            default to vertex 0

    Raises:
        SearchTimeout: budget exhausted before the answer was certified
    """
    if g.vcount == 0:
        return CliqueResult(0, ())
    budget = default_settings().clique_budget if budget is None else budget
    if root is None and g.is_cayley:
        root = 0
    search = _CliqueSearch(g, budget, target)
    if root is None:
        search.run([], (1 << g.vcount) - 1)
    else:
        search.run([root], g.bitsets[root])
    # stopping at the target only proves omega >= target
    certified = target is None or len(search.best) < target
    logger.debug("max clique %d after %d nodes", len(search.best), search.nodes)
    return CliqueResult(len(search.best), search.best, certified)


def max_independent_set(g: ConfusionGraph, budget: Optional[int] = None) -> Tuple[int, Tuple[int, ...]]:
    """
    alpha(g) with a witness, as the maximum clique of the complement.

    Raises:
        SearchTimeout: budget exhausted; lower/upper bound alpha
    """
    result = max_clique(g.complement(), budget=budget)
    return result.size, result.witness


def vt_fractional(g: ConfusionGraph, alpha: Optional[int]) -> Fraction:
    """
    |V| / alpha, the fractional chromatic number of a vertex-transitive graph.

    Raises:
        MissingAlphaError: alpha not supplied
    """
    if alpha is None or alpha <= 0:
        raise MissingAlphaError("vt_fractional needs the independence number")
    return Fraction(g.vcount, alpha)


# =============================================================================
# Subspace (coset) colouring for Cayley graphs
# =============================================================================

class _SubspaceSearch:
    def __init__(self, g: ConfusionGraph, budget: int):
        self.q = g.q
        self.nk = g.nk
        self.vcount = g.vcount
        self.words = np.asarray(all_words(g.q, g.nk), dtype=np.int64)
        self.connection = np.array(sorted(g.cayley_set), dtype=np.int64)
        self.scales = [inv(g.q, a) for a in range(1, g.q)]
        self.budget = budget
        self.nodes = 0
        self.best_basis: List[int] = []
        self.exhausted = False

    def _span_labels(self, basis: List[int]) -> np.ndarray:
        if not basis:
            return np.zeros(1, dtype=np.int64)
        coefficients = np.asarray(all_words(self.q, len(basis)), dtype=np.int64)
        vectors = (coefficients @ self.words[basis]) % self.q
        return rank_rows(vectors, self.q)

    def _allowed(self, subspace: np.ndarray) -> np.ndarray:
        """Labels v outside U with span(U, v) still avoiding S."""
        forbidden = np.zeros(self.vcount, dtype=bool)
        forbidden[subspace] = True
        if self.connection.size:
            shifted = (self.words[self.connection][:, None, :] + self.words[subspace][None, :, :]) % self.q
            shifted = shifted.reshape(-1, self.nk)
            for a_inv in self.scales:
                forbidden[rank_rows((shifted * a_inv) % self.q, self.q)] = True
        return np.flatnonzero(~forbidden)

    def run(self, basis: List[int], last: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        if len(basis) > len(self.best_basis):
            self.best_basis = list(basis)
        subspace = self._span_labels(basis)
        allowed = self._allowed(subspace)
        bound = math.floor(math.log(subspace.size + allowed.size, self.q) + ENTROPY_TOLERANCE)
        if bound <= len(self.best_basis):
            return
        for v in allowed[allowed > last].tolist():
            basis.append(v)
            self.run(basis, v)
            basis.pop()
            if self.exhausted:
                return


def linear_coloring(g: ConfusionGraph, budget: Optional[int] = None) -> Optional[CosetColoring]:
    """
    Colour a Cayley graph by the cosets of a large subspace U with U ∩ S = {}.

    Each coset x + U is independent, so the q^{nK - dim U} cosets form a
    proper colouring whose natural codeword assignment is linear. Returns
    None for graphs without a connection set.
    """
    if not g.is_cayley:
        return None
    budget = default_settings().subspace_budget if budget is None else budget
    search = _SubspaceSearch(g, budget)
    search.run([], -1)
    if search.exhausted:
        logger.warning("subspace search stopped after %d nodes; colouring may be suboptimal", search.nodes)

    basis = search.best_basis
    subspace = search._span_labels(basis)
    offsets = search.words[subspace]
    colors = np.full(g.vcount, -1, dtype=np.int64)
    next_color = 0
    for x in range(g.vcount):
        if colors[x] >= 0:
            continue
        colors[rank_rows((search.words[x] + offsets) % g.q, g.q)] = next_color
        next_color += 1
    kernel = search.words[basis] if basis else np.zeros((0, g.nk), dtype=np.int64)
    logger.debug("linear colouring: dim U = %d, %d colours", len(basis), next_color)
    return CosetColoring(Coloring.from_colors(colors.tolist()), kernel, g.q)


# =============================================================================
# Exact chromatic number
# =============================================================================

def _dsatur_branch_and_bound(
    g: ConfusionGraph,
    clique: Sequence[int],
    lower: int,
    best: Coloring,
    budget: int,
) -> Tuple[Coloring, int]:
    """
    Iterative DSATUR branch and bound below the colour count of ``best``.

    The clique is precoloured 0..|clique|-1. Frames hold
    [vertex, next colour to try, colours used before it, assigned colour].
    """
    vcount = g.vcount
    best_k = best.num_colors
    best_colors = list(best.color_of)
    neighbours = [np.flatnonzero(g.adjacency[v]) for v in range(vcount)]
    degrees = g.degrees().astype(np.int64)
    static = degrees * vcount + (vcount - 1 - np.arange(vcount))
    scale = (int(degrees.max()) + 1) * vcount

    colors = np.full(vcount, -1, dtype=np.int64)
    ncount = np.zeros((vcount, best_k), dtype=np.int32)
    saturation = np.zeros(vcount, dtype=np.int64)
    colored = 0

    def assign(v: int, c: int) -> None:
        nonlocal colored
        colors[v] = c
        colored += 1
        nb = neighbours[v]
        fresh = nb[ncount[nb, c] == 0]
        saturation[fresh] += 1
        ncount[nb, c] += 1

    def unassign(v: int, c: int) -> None:
        nonlocal colored
        colors[v] = -1
        colored -= 1
        nb = neighbours[v]
        ncount[nb, c] -= 1
        saturation[nb[ncount[nb, c] == 0]] -= 1

    def select() -> int:
        score = saturation * scale + static
        score[colors >= 0] = -1
        return int(np.argmax(score))

    for c, v in enumerate(clique):
        assign(v, c)
    if colored == vcount:
        return Coloring.from_colors(colors.tolist()), 0

    nodes = 0
    stack = [[select(), 0, len(clique), -1]]
    while stack:
        frame = stack[-1]
        v, c, k0, assigned = frame
        if assigned >= 0:
            unassign(v, assigned)
            frame[3] = -1
        limit = min(k0 + 1, best_k - 1)
        while c < limit and ncount[v, c]:
            c += 1
        if c >= limit:
            stack.pop()
            continue
        nodes += 1
        if nodes > budget:
            raise SearchTimeout(
                "colouring search budget exhausted",
                lower=lower,
                upper=best_k,
                best=Coloring.from_colors(best_colors),
                nodes=nodes,
            )
        assign(v, c)
        frame[1], frame[3] = c + 1, c
        used = max(k0, c + 1)
        if colored == vcount:
            best_k = used
            best_colors = colors.tolist()
            logger.debug("improved to %d colours after %d nodes", best_k, nodes)
            if best_k <= lower:
                break
        else:
            stack.append([select(), 0, used, -1])
    return Coloring.from_colors(best_colors), nodes


def exact_chromatic(
    g: ConfusionGraph,
    budget: Optional[int] = None,
    clique_budget: Optional[int] = None,
    subspace_budget: Optional[int] = None,
    initial: Optional[Coloring] = None,
) -> ChromaticResult:
    """
    Certified chromatic number with a minimum colouring.

    Upper-bound seeds: DSATUR, the coset colouring of Cayley graphs and an
    optional initial colouring; the fewest colours wins. Lower bounds: a
    maximum clique and ceil(|V| / alpha) when alpha is found in budget.

    Raises:
        SearchTimeout: lower/upper bounds and the best colouring found
    """
    settings = default_settings()
    budget = settings.node_budget if budget is None else budget
    clique_budget = settings.clique_budget if clique_budget is None else clique_budget

    best, seed = dsatur(g), "dsatur"
    coset = linear_coloring(g, subspace_budget)
    if coset is not None and coset.coloring.num_colors < best.num_colors:
        best, seed = coset.coloring, "linear"
    if initial is not None:
        if initial.is_proper(g) and initial.num_colors < best.num_colors:
            best, seed = initial, "initial"
        elif not initial.is_proper(g):
            logger.warning("initial colouring is not proper; ignoring it")
    upper = best.num_colors

    try:
        clique = max_clique(g, budget=clique_budget, target=upper)
        lower, witness = clique.size, clique.witness
    except SearchTimeout as e:
        lower, witness = e.lower or 1, tuple(e.best or ())
    if lower < upper:
        try:
            alpha, _ = max_independent_set(g, budget=clique_budget)
            lower = max(lower, -(-g.vcount // alpha))
        except SearchTimeout:
            logger.debug("independence number not certified within budget")

    logger.info("chromatic bounds [%d, %d] from clique and %s seed", lower, upper, seed)
    if lower >= upper:
        return ChromaticResult(upper, best, lower, 0, seed)

    coloring, nodes = _dsatur_branch_and_bound(g, witness, lower, best, budget)
    if coloring.num_colors < upper:
        seed = "search"
    return ChromaticResult(coloring.num_colors, coloring, lower, nodes, seed)


# =============================================================================
# Entropy bound
# =============================================================================

def mu_entropies(inst: FicpInstance) -> List[float]:
    """
    Per receiver, max over Has-values h of H(W_i | H_i = h) in base-q units.

    Messages are uniform over F_q^{nK}.
    """
    out = []
    for i in range(inst.N):
        hc = inst.has_classes(i)
        wc = inst.want_classes(i)
        pairs, counts = np.unique(np.stack([hc, wc], axis=1), axis=0, return_counts=True)
        worst = 0.0
        for h in np.unique(pairs[:, 0]):
            c = counts[pairs[:, 0] == h].astype(np.float64)
            p = c / c.sum()
            entropy = float(-(p * np.log(p)).sum() / math.log(inst.q))
            worst = max(worst, entropy)
        out.append(worst)
    return out


def mu_bound(inst: FicpInstance, blocks: int = 1) -> int:
    """
    max_i ceil(max_h H(W_i | H_i = h)) in q-ary symbols.

    ``blocks`` scales the entropies for the block-length version of a
    scalar instance.
    """
    entropies = mu_entropies(inst)
    return max(math.ceil(blocks * h - ENTROPY_TOLERANCE) for h in entropies) if entropies else 0


# =============================================================================
# Bounds report
# =============================================================================

@dataclass
class BoundsReport:
    """
    Code-size bounds for block length n from the scalar confusion graph.

    ``or_power_*`` bound the chromatic number of C^n; ``codebook_*`` bound
    the smallest valid codebook of the lifted instance itself.
    """
    q: int
    vcount: int
    n: int
    clique_lb: int
    clique_certified: bool
    alpha: int
    alpha_upper: int
    alpha_certified: bool
    chi_f_lower: Fraction
    chi_f_exact: Optional[Fraction]
    chi_upper: int
    chi: Optional[int]
    mu: int
    mu_block: int
    or_power_lower: int
    or_power_upper: int
    codebook_lower: int
    codebook_upper: int
    cayley: bool
    notes: List[str] = field(default_factory=list)

    @property
    def length_lower(self) -> int:
        return ceil_log(self.codebook_lower, self.q)

    @property
    def length_upper(self) -> int:
        return ceil_log(self.codebook_upper, self.q)

    def to_dict(self) -> Dict[str, object]:
        return {
            "q": self.q,
            "vertices": self.vcount,
            "n": self.n,
            "clique_lb": self.clique_lb,
            "clique_certified": self.clique_certified,
            "alpha": self.alpha if self.alpha_certified else [self.alpha, self.alpha_upper],
            "alpha_certified": self.alpha_certified,
            "chi_f_lower": str(self.chi_f_lower),
            "chi_f_exact": str(self.chi_f_exact) if self.chi_f_exact is not None else None,
            "chi_upper": self.chi_upper,
            "chi": self.chi,
            "mu": self.mu,
            "mu_block": self.mu_block,
            "or_power_lower": self.or_power_lower,
            "or_power_upper": self.or_power_upper,
            "codebook_lower": self.codebook_lower,
            "codebook_upper": self.codebook_upper,
            "length_lower": self.length_lower,
            "length_upper": self.length_upper,
            "length_per_block": [str(Fraction(self.length_lower, self.n)), str(Fraction(self.length_upper, self.n))],
            "cayley": self.cayley,
            "notes": list(self.notes),
        }


def code_size_bounds(
    inst: FicpInstance,
    scalar_graph: ConfusionGraph,
    n: int = 1,
    clique_budget: Optional[int] = None,
    subspace_budget: Optional[int] = None,
    chi: Optional[int] = None,
) -> BoundsReport:
    """
    Bounds on |B| for block length n.

    Timeouts never escape: an uncertified alpha widens the bounds instead.

    Args:
        inst: The scalar instance
        scalar_graph: build_graph(inst)
        n: Block length
        chi: Certified chromatic number of the scalar graph, when known
    """
    q, vcount = inst.q, scalar_graph.vcount
    notes: List[str] = ["entropies in base q", "fractional upper bound uses log base 2"]

    try:
        clique = max_clique(scalar_graph, budget=clique_budget)
        omega, omega_ok = clique.size, True
    except SearchTimeout as e:
        omega, omega_ok = e.lower or 1, False
        notes.append("clique number not certified")

    try:
        alpha, _ = max_independent_set(scalar_graph, budget=clique_budget)
        alpha_hi, alpha_ok = alpha, True
    except SearchTimeout as e:
        alpha = e.lower or 1
        alpha_hi = e.upper or vcount
        alpha_ok = False
        notes.append("independence number not certified")

    chi_upper = dsatur(scalar_graph).num_colors
    coset = linear_coloring(scalar_graph, subspace_budget)
    if coset is not None:
        chi_upper = min(chi_upper, coset.coloring.num_colors)
    if chi is not None:
        chi_upper = min(chi_upper, chi)

    chi_f_lower = Fraction(vcount, alpha_hi)
    chi_f_exact = chi_f_lower if scalar_graph.is_cayley and alpha_ok else None

    or_lower = math.ceil(chi_f_lower ** n)
    or_upper = chi_upper ** n
    if chi_f_exact is not None:
        theorem_upper = math.floor(
            float(chi_f_exact ** n) * (1 + n * math.log2(alpha)) + ENTROPY_TOLERANCE
        )
        or_upper = min(or_upper, theorem_upper)
    else:
        notes.append("graph not known to be vertex-transitive; fractional upper bound not applied")

    entropies = mu_entropies(inst)
    hmax = max(entropies) if entropies else 0.0
    mu = mu_bound(inst)
    mu_block = mu_bound(inst, blocks=n)
    entropy_size = math.ceil(q ** (n * hmax) - ENTROPY_TOLERANCE)
    codebook_lower = max(omega, math.ceil(chi_f_lower), entropy_size, 1)
    codebook_upper = min(chi_upper ** n, or_upper)
    if n > 1:
        notes.append("lifted-instance graph is a subgraph of the OR power")

    return BoundsReport(
        q=q,
        vcount=vcount,
        n=n,
        clique_lb=omega,
        clique_certified=omega_ok,
        alpha=alpha,
        alpha_upper=alpha_hi,
        alpha_certified=alpha_ok,
        chi_f_lower=chi_f_lower,
        chi_f_exact=chi_f_exact,
        chi_upper=chi_upper,
        chi=chi,
        mu=mu,
        mu_block=mu_block,
        or_power_lower=or_lower,
        or_power_upper=or_upper,
        codebook_lower=codebook_lower,
        codebook_upper=codebook_upper,
        cayley=scalar_graph.is_cayley,
        notes=notes,
    )
