"""
Pytest configuration and fixtures for ficoder tests.

Instances under fixtures/ and the codes printed for them:

    pentagon               five receivers on a cycle, each knowing its two
                           neighbours; pentagon_scalar_matrix (L=3) and
                           pentagon_vector_matrix (n=2, L=5)
    two_receiver_majority  x1 known by one receiver, maj(x1, x2, x3) by the
                           other; majority_linear_map and majority_affine_map
    linear_pair            linear Has and Want functions, a Cayley graph
    pair_exchange_f2/f3    six receivers trading pairs of messages over F_2
                           and F_3; *_map and *_m0 are the inner codes for
                           shortened633 and mds423, *_n2_* the n=2 lift
    majority_helper        four single-message receivers plus one knowing
                           only maj(x1, x2, x3); majority_helper_map
    split_demand_*         the second receiver wants all of x1..x3, their
                           parity or their majority; one *_map each
    nonlinear_ecc          nonlinear side information served by the one-bit
                           product map; nonlinear_ecc_m0 and the 1-error
                           correcting nonlinear_ecc_m1

fixtures/golden/ holds complete JSON reports that the CLI must reproduce.
"""

from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from ficoder.confusion import ConfusionGraph, build_graph, cayley_from_connection_set, confusable
from ficoder.pipeline.instance_loader import instance_from_dict
from ficoder.validator import load_instance_file

FIXTURES_DIR = Path(__file__).parent.parent / "fixtures"


@lru_cache(maxsize=None)
def _instance(name: str):
    return load_instance_file(FIXTURES_DIR / f"{name}.json")


@lru_cache(maxsize=None)
def _graph(name: str) -> ConfusionGraph:
    return build_graph(_instance(name))


# =============================================================================
# Fixture files
# =============================================================================

@pytest.fixture
def fixtures_dir():
    """Return path to the instance and code fixtures directory."""
    return FIXTURES_DIR


@pytest.fixture
def load_fixture():
    """Factory fixture: compiled instance by fixture name (cached per session)."""
    return _instance


@pytest.fixture
def fixture_graph():
    """Factory fixture: confusion graph of a fixture instance (cached per session)."""
    return _graph


@pytest.fixture
def tmp_instance_file(tmp_path):
    """Factory fixture to create temporary instance files."""
    def _create(content: str, filename: str = "instance.json") -> Path:
        file_path = tmp_path / filename
        file_path.write_text(content)
        return file_path
    return _create


# =============================================================================
# Instance text
# =============================================================================

@pytest.fixture
def valid_instance_json():
    """Two receivers over F_2 with three messages."""
    return """{
  "q": 2,
  "n": 1,
  "K": 3,
  "receivers": [
    {"has": ["x1"], "wants": ["x2 + x3", "x1 + x3"]},
    {"has": ["maj(x1, x2, x3)"], "wants": ["x1", "x2", "x3"]}
  ]
}
"""


@pytest.fixture
def empty_wants_json():
    """Second receiver demands nothing."""
    return """{
  "q": 2,
  "n": 1,
  "K": 2,
  "receivers": [
    {"has": ["x1"], "wants": ["x2"]},
    {"has": ["x2"], "wants": []}
  ]
}
"""


@pytest.fixture
def bad_variable_json():
    """References x4 in a three-message instance."""
    return """{
  "q": 2,
  "n": 1,
  "K": 3,
  "receivers": [
    {"has": ["x1"], "wants": ["x4"]}
  ]
}
"""


@pytest.fixture
def truncated_json():
    return '{"q": 2, "n": 1, "K": 3, "receivers": [\n'


# =============================================================================
# Small graphs
# =============================================================================

@pytest.fixture
def five_cycle():
    """C5 as the Cayley graph of F_5 with connection set {1, 4}."""
    return cayley_from_connection_set([1, 4], 5, 1)


# =============================================================================
# Brute-force oracles
# =============================================================================

@pytest.fixture
def brute_alpha():
    """Independence number by exhaustive branching on bitmasks."""
    def _alpha(g: ConfusionGraph) -> int:
        nbr = g.bitsets

        @lru_cache(maxsize=None)
        def solve(candidates: int) -> int:
            if not candidates:
                return 0
            v = (candidates & -candidates).bit_length() - 1
            without = solve(candidates & ~(1 << v))
            with_v = 1 + solve(candidates & ~nbr[v] & ~(1 << v))
            return max(without, with_v)

        return solve((1 << g.vcount) - 1)
    return _alpha


@pytest.fixture
def pairwise_adjacency():
    """Confusion graph adjacency from a confusable() call per pair and receiver."""
    def _adjacency(inst) -> np.ndarray:
        vcount = inst.vcount
        adjacency = np.zeros((vcount, vcount), dtype=bool)
        for x in range(vcount):
            for x2 in range(x + 1, vcount):
                if any(confusable(inst, i, x, x2) for i in range(inst.N)):
                    adjacency[x, x2] = adjacency[x2, x] = True
        return adjacency
    return _adjacency


# =============================================================================
# Random instances
# =============================================================================

def _linear_text(coeffs) -> str:
    terms = [
        f"x{k + 1}" if c == 1 else f"{c}*x{k + 1}"
        for k, c in enumerate(coeffs)
        if c
    ]
    return " + ".join(terms) if terms else "0"


@pytest.fixture
def random_linear_instance():
    """Factory fixture: random linear instance with q^K small enough to enumerate."""
    def _make(rng: np.random.Generator, q: int, K: int, receivers: int = 3):
        docs = []
        for _ in range(receivers):
            has = [_linear_text(rng.integers(0, q, K)) for _ in range(int(rng.integers(0, 3)))]
            wants = [_linear_text(rng.integers(0, q, K)) for _ in range(int(rng.integers(1, 3)))]
            docs.append({"has": has, "wants": wants})
        return instance_from_dict({"q": q, "n": 1, "K": K, "receivers": docs})
    return _make


_NONLINEAR_TERMS = [
    "x1", "x2", "x3", "x1 + x2", "x2 + x3", "x1 * x2", "x2 * x3 + x1",
    "maj(x1, x2, x3)", "not(x1) * x3", "x1 * x2 * x3",
]


@pytest.fixture
def random_boolean_instance():
    """Factory fixture: random three-message instance over F_2 mixing maj, not and products."""
    def _make(rng: np.random.Generator, receivers: int = 2):
        docs = []
        for _ in range(receivers):
            has = [str(t) for t in rng.choice(_NONLINEAR_TERMS, size=int(rng.integers(0, 2)), replace=False)]
            wants = [str(t) for t in rng.choice(_NONLINEAR_TERMS, size=int(rng.integers(1, 3)), replace=False)]
            docs.append({"has": has, "wants": wants})
        return instance_from_dict({"q": 2, "n": 1, "K": 3, "receivers": docs})
    return _make
