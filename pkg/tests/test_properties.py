"""
Randomized and structural properties checked against brute-force oracles.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from ficoder.codec import fic_from_codewords
from ficoder.coloring import code_size_bounds, exact_chromatic, max_independent_set, mu_bound, vt_fractional
from ficoder.confusion import build_graph, cayley_from_connection_set, connection_set_linear, or_power
from ficoder.ecc import simulate_errors, verify_delta
from ficoder.field import ceil_log
from ficoder.models import lift_instance

SEED = 20240611


def linear_cases():
    # (q, K) with q^K small enough for the pairwise oracle
    shapes = [(2, 3), (2, 4), (2, 5), (3, 2), (3, 3)]
    return [(seed, *shapes[seed % len(shapes)]) for seed in range(50)]


class TestCayleyStructure:
    """Linear instances: the pairwise graph is the Cayley graph of the union of S_i."""

    @pytest.mark.parametrize("seed,q,K", linear_cases())
    def test_pairwise_graph_is_cayley(self, random_linear_instance, pairwise_adjacency, seed, q, K):
        rng = np.random.default_rng(SEED + seed)
        inst = random_linear_instance(rng, q, K)
        graph = build_graph(inst)

        assert np.array_equal(graph.adjacency, pairwise_adjacency(inst))

        union = connection_set_linear(inst, 0)
        for i in range(1, inst.N):
            union = union.union(connection_set_linear(inst, i))
        assert cayley_from_connection_set(union) == graph
        assert graph.is_cayley


class TestOrPower:
    """Block-length lifting against the co-normal power of the scalar graph."""

    @pytest.mark.parametrize("name", ["two_receiver_majority", "nonlinear_ecc", "majority_helper", "pentagon"])
    def test_lifted_graph_is_subgraph(self, load_fixture, fixture_graph, name):
        lifted = build_graph(lift_instance(load_fixture(name), 2))
        power = or_power(fixture_graph(name), 2)

        assert lifted.vcount == power.vcount
        assert not (lifted.adjacency & ~power.adjacency).any()

    def test_pentagon_containment_is_strict(self, load_fixture, fixture_graph):
        lifted = build_graph(lift_instance(load_fixture("pentagon"), 2))
        power = or_power(fixture_graph("pentagon"), 2)
        assert lifted.edge_count < power.edge_count


class TestMultiplicativity:
    """alpha and |V|/alpha of OR squares of vertex-transitive graphs."""

    def test_five_cycle(self, five_cycle):
        square = or_power(five_cycle, 2)
        alpha = max_independent_set(square)[0]

        assert alpha == max_independent_set(five_cycle)[0] ** 2
        assert vt_fractional(square, alpha) == vt_fractional(five_cycle, 2) ** 2

    def test_pair_exchange(self, fixture_graph):
        g = fixture_graph("pair_exchange_f2")
        square = or_power(g, 2)
        alpha = max_independent_set(g)[0]
        alpha_square = max_independent_set(square)[0]

        assert square.is_cayley
        assert alpha_square == alpha ** 2
        assert vt_fractional(square, alpha_square) == Fraction(16, alpha) ** 2


class TestDistanceConditionMatchesSimulation:
    """Pairwise distance >= 2*delta + 1 holds exactly when every simulated decode succeeds."""

    @pytest.mark.parametrize("seed", range(20))
    def test_random_codes(self, random_boolean_instance, seed):
        rng = np.random.default_rng(SEED + 100 + seed)
        inst = random_boolean_instance(rng)
        length = int(rng.integers(2, 6))
        table = rng.integers(0, 2, size=(inst.vcount, length))
        if seed % 4 == 0:
            # copy a codeword onto a confusable neighbour
            graph = build_graph(inst)
            edges = list(graph.edges())
            if edges:
                u, v = edges[int(rng.integers(len(edges)))]
                table[v] = table[u]
        fic = fic_from_codewords(inst, table)
        delta = int(rng.integers(0, 2))

        assert verify_delta(inst, fic, delta).passed == simulate_errors(inst, fic, delta=delta).passed


class TestDecoderConflicts:
    """Decoder tables conflict exactly on maps that break an exclusive law."""

    @pytest.mark.parametrize("seed", range(20))
    def test_random_maps(self, random_boolean_instance, seed):
        rng = np.random.default_rng(SEED + 200 + seed)
        inst = random_boolean_instance(rng)
        graph = build_graph(inst)
        # at most eight classes written as 3-bit codewords
        labels = rng.integers(0, int(rng.integers(2, 9)), size=inst.vcount)
        table = np.stack([(labels >> b) & 1 for b in range(3)], axis=1)
        fic = fic_from_codewords(inst, table)

        shared_edge = any((table[u] == table[v]).all() for u, v in graph.edges())
        assert fic.valid == (not shared_edge)
        for conflict in fic.conflicts:
            assert graph.has_edge(conflict.x, conflict.x2)
            assert fic.encoding[conflict.x] == fic.encoding[conflict.x2]


class TestBoundsSandwich:
    """Every lower bound sits below chi and chi below every upper bound."""

    @pytest.mark.parametrize("name", [
        "two_receiver_majority",
        "pair_exchange_f2",
        "pair_exchange_f3",
        "majority_helper",
        "split_demand_maj",
        "split_demand_parity",
        "split_demand_full",
        "nonlinear_ecc",
    ])
    def test_sandwich(self, load_fixture, fixture_graph, name):
        inst = load_fixture(name)
        g = fixture_graph(name)
        chi = exact_chromatic(g).chi
        report = code_size_bounds(inst, g, chi=chi)

        assert report.clique_lb <= chi
        assert report.chi_f_lower <= chi
        assert report.codebook_lower <= chi <= report.codebook_upper
        assert mu_bound(inst) <= ceil_log(chi, inst.q)


class TestFractionalUpperBound:
    """On Cayley graphs |V|/alpha is the fractional chromatic number, and
    chi <= chi_f * (1 + ln alpha)."""

    @pytest.mark.parametrize("name,exact", [
        ("pair_exchange_f2", True),
        ("pair_exchange_f3", True),
        ("pentagon", False),
    ])
    def test_fixtures(self, load_fixture, fixture_graph, name, exact):
        g = fixture_graph(name)
        chi = exact_chromatic(g).chi if exact else None
        report = code_size_bounds(load_fixture(name), g, chi=chi)

        assert g.is_cayley
        assert report.chi_f_exact == report.chi_f_lower
        # chi_upper is the size of a proper colouring, so chi <= chi_upper
        assert report.chi_upper <= float(report.chi_f_exact) * (1 + math.log(report.alpha)) + 1e-9

    @pytest.mark.parametrize("seed,q,K", linear_cases()[:20])
    def test_random_linear(self, random_linear_instance, seed, q, K):
        rng = np.random.default_rng(SEED + seed)
        inst = random_linear_instance(rng, q, K)
        g = build_graph(inst)
        chi = exact_chromatic(g).chi
        report = code_size_bounds(inst, g, chi=chi)

        assert report.chi_f_exact is not None
        assert chi <= float(report.chi_f_exact) * (1 + math.log(report.alpha)) + 1e-9
