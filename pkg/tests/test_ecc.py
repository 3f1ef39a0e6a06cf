"""
Tests for outer codes, concatenation, delta checks, codebook search and
channel simulation.
"""

import numpy as np
import pytest

from ficoder.codec import fic_from_assignment, fic_from_matrix
from ficoder.ecc import (
    DeltaFic,
    LinearBlockCode,
    builtin_code,
    compare_singleton,
    concatenate,
    confusable_min_distance,
    search_codebook,
    simulate_errors,
    singleton_bound,
    verify_delta,
    verify_delta_linear,
)
from ficoder.exceptions import (
    BudgetExceededError,
    DimensionMismatchError,
    EccError,
    NotLinearInstanceError,
    UnknownCodeError,
)
from ficoder.models import lift_instance
from ficoder.pipeline.artifacts import read_assignment, read_matrix
from ficoder.pipeline.instance_loader import instance_from_dict

# generator of the [5, 2, 3] code taking (a, b) to (a, a, b, b, a + b)
FIVE_TWO_THREE = np.array([[1, 1, 0, 0, 1], [0, 0, 1, 1, 1]])


@pytest.fixture
def matrix_fixture(fixtures_dir):
    def _read(name: str):
        return read_matrix(fixtures_dir / name)[1]
    return _read


@pytest.fixture
def product_code(fixtures_dir, load_fixture):
    """The one-bit code of the nonlinear instance."""
    inst = load_fixture("nonlinear_ecc")
    return fic_from_assignment(inst, read_assignment(fixtures_dir / "nonlinear_ecc_product_map.txt"))


class TestBlockCodes:
    """Built-in and custom outer codes."""

    @pytest.mark.parametrize("name,q,params", [
        ("hamming74", 2, (7, 4, 3)),
        ("shortened633", 2, (6, 3, 3)),
        ("mds423", 3, (4, 2, 3)),
    ])
    def test_builtin_parameters(self, name, q, params):
        code = builtin_code(name, q)
        assert (code.length, code.dimension, code.min_distance) == params

    def test_repetition(self):
        code = builtin_code("repetition", 3, delta=2)
        assert (code.length, code.dimension, code.min_distance) == (5, 1, 5)
        assert code.encode([2]).tolist() == [2, 2, 2, 2, 2]

    def test_unknown_code(self):
        with pytest.raises(UnknownCodeError):
            builtin_code("golay")

    def test_wrong_field(self):
        with pytest.raises(EccError):
            builtin_code("mds423", 2)

    def test_rank_deficient_generator(self):
        with pytest.raises(EccError):
            LinearBlockCode(np.array([[1, 1, 0], [1, 1, 0]]))

    def test_string_form(self):
        assert str(builtin_code("hamming74")) == "hamming74 [7, 4, 3] over F_2"


class TestConcatenation:
    """Inner codes protected by outer linear codes."""

    def test_matrix_inner_code(self, load_fixture, matrix_fixture):
        inst = load_fixture("nonlinear_ecc")
        code = concatenate(inst, matrix_fixture("nonlinear_ecc_m0.txt"), LinearBlockCode(FIVE_TWO_THREE))

        assert code.delta == 1
        assert code.length == 5
        assert code.inner_length == 2
        assert np.array_equal(code.matrix, matrix_fixture("nonlinear_ecc_m1.txt"))
        assert verify_delta(inst, code, 1).passed

    def test_ternary_code_meets_singleton(self, load_fixture, matrix_fixture):
        inst = load_fixture("pair_exchange_f3")
        code = concatenate(inst, matrix_fixture("pair_exchange_f3_m0.txt"), builtin_code("mds423", 3))
        comparison = compare_singleton(code.length, 2, code.delta)

        assert code.length == 4
        assert code.provenance == "concatenated(mds423)"
        assert verify_delta_linear(inst, code.matrix, 1).passed
        assert comparison.verdict == "optimal"
        assert comparison.meets

    def test_binary_pair_exchange(self, load_fixture, matrix_fixture):
        inst = load_fixture("pair_exchange_f2")
        code = concatenate(inst, matrix_fixture("pair_exchange_f2_m0.txt"), builtin_code("shortened633"))

        assert code.length == 6
        assert verify_delta_linear(inst, code.matrix, 1).passed
        assert compare_singleton(code.length, 3, 1).verdict == "valid, optimality unknown"

    def test_codeword_inner_code(self, load_fixture, product_code):
        inst = load_fixture("nonlinear_ecc")
        code = concatenate(inst, product_code, builtin_code("repetition", 2, delta=1))

        assert code.length == 3
        assert verify_delta(inst, code, 1).passed
        assert compare_singleton(code.length, 1, 1).verdict == "optimal"

    def test_codebook_index_inner_code(self, fixtures_dir, load_fixture):
        inst = load_fixture("two_receiver_majority")
        inner = fic_from_assignment(inst, read_assignment(fixtures_dir / "majority_linear_map.txt"))
        code = concatenate(inst, inner, builtin_code("hamming74"))

        assert code.length == 7
        assert code.inner_length == 2
        assert verify_delta(inst, code, 1).passed

    def test_outer_code_too_small(self, fixtures_dir, load_fixture):
        inst = load_fixture("two_receiver_majority")
        inner = fic_from_assignment(inst, read_assignment(fixtures_dir / "majority_linear_map.txt"))
        with pytest.raises(DimensionMismatchError):
            concatenate(inst, inner, builtin_code("repetition", 2, delta=1))

    def test_field_mismatch(self, load_fixture, matrix_fixture):
        with pytest.raises(DimensionMismatchError):
            concatenate(load_fixture("nonlinear_ecc"), matrix_fixture("nonlinear_ecc_m0.txt"), builtin_code("mds423", 3))

    def test_inner_length_must_match_dimension(self, load_fixture, matrix_fixture):
        with pytest.raises(DimensionMismatchError):
            concatenate(load_fixture("nonlinear_ecc"), matrix_fixture("nonlinear_ecc_m0.txt"), builtin_code("hamming74"))


class TestDeltaVerification:
    """Distance between the codewords of confusable pairs."""

    def test_unprotected_code_fails(self, load_fixture, matrix_fixture):
        inst = load_fixture("nonlinear_ecc")
        fic = fic_from_matrix(inst, matrix_fixture("nonlinear_ecc_m0.txt"))
        report = verify_delta(inst, fic, 1)

        assert not report.passed
        assert report.min_distance == 1
        witness = report.witness
        assert witness["distance"] == 1
        table = fic.codeword_table()
        assert np.count_nonzero(table[witness["x"]] != table[witness["x2"]]) == 1

    def test_delta_zero_is_validity(self, load_fixture, matrix_fixture):
        inst = load_fixture("nonlinear_ecc")
        fic = fic_from_matrix(inst, matrix_fixture("nonlinear_ecc_m0.txt"))
        assert verify_delta(inst, fic, 0).passed

    def test_protected_code_distance(self, load_fixture, matrix_fixture):
        inst = load_fixture("nonlinear_ecc")
        found = confusable_min_distance(inst, fic_from_matrix(inst, matrix_fixture("nonlinear_ecc_m1.txt")))
        assert found.distance == 3
        assert found.x < found.x2

    def test_weight_check_failure(self, load_fixture, matrix_fixture):
        report = verify_delta_linear(load_fixture("pair_exchange_f2"), matrix_fixture("pair_exchange_f2_m0.txt"), 1)
        assert not report.passed
        assert report.min_distance == 1
        assert report.to_dict()["required_distance"] == 3

    def test_weight_check_needs_linear_instance(self, load_fixture, matrix_fixture):
        with pytest.raises(NotLinearInstanceError):
            verify_delta_linear(load_fixture("nonlinear_ecc"), matrix_fixture("nonlinear_ecc_m1.txt"), 1)

    def test_no_confusable_pairs(self):
        inst = instance_from_dict({"q": 2, "K": 1, "receivers": [{"has": ["x1"], "wants": ["x1"]}]})
        report = verify_delta(inst, np.zeros((2, 1), dtype=int), 3)
        assert report.passed
        assert report.min_distance is None

    def test_table_size_mismatch(self, load_fixture):
        with pytest.raises(DimensionMismatchError):
            verify_delta(load_fixture("nonlinear_ecc"), np.zeros((3, 2), dtype=int), 1)


# (instance, block length, inner matrix, outer code or None)
LINEAR_CODES = [
    ("pair_exchange_f2", 1, "pair_exchange_f2_m0.txt", None),
    ("pair_exchange_f2", 1, "pair_exchange_f2_m0.txt", "shortened633"),
    ("pair_exchange_f2", 2, "pair_exchange_f2_n2_m0.txt", None),
    ("pair_exchange_f2", 2, "pair_exchange_f2_n2_m0.txt", "hamming74"),
    ("pair_exchange_f3", 1, "pair_exchange_f3_m0.txt", None),
    ("pair_exchange_f3", 1, "pair_exchange_f3_m0.txt", "mds423"),
    ("pentagon", 1, "pentagon_scalar_matrix.txt", None),
    ("pentagon", 2, "pentagon_vector_matrix.txt", None),
]


class TestWeightCheckMatchesPairwiseCheck:
    """On linear instances with linear codes the two delta checks agree."""

    @pytest.mark.parametrize("delta", [0, 1, 2])
    @pytest.mark.parametrize("name,n,matrix_name,outer", LINEAR_CODES)
    def test_fixture_codes(self, load_fixture, matrix_fixture, name, n, matrix_name, outer, delta):
        inst = load_fixture(name)
        if n > 1:
            inst = lift_instance(inst, n)
        matrix = matrix_fixture(matrix_name)
        if outer is not None:
            matrix = concatenate(inst, matrix, builtin_code(outer, inst.q)).matrix

        pairwise = verify_delta(inst, fic_from_matrix(inst, matrix), delta)
        weights = verify_delta_linear(inst, matrix, delta)

        assert pairwise.passed == weights.passed
        assert pairwise.min_distance == weights.min_distance

    @pytest.mark.parametrize("delta", [0, 1, 2])
    @pytest.mark.parametrize("seed", range(12))
    def test_random_codes(self, random_linear_instance, seed, delta):
        rng = np.random.default_rng(20240611 + 300 + seed)
        q, K = [(2, 3), (2, 4), (3, 2)][seed % 3]
        inst = random_linear_instance(rng, q, K)
        matrix = rng.integers(0, q, size=(K, int(rng.integers(1, 6))))

        pairwise = verify_delta(inst, fic_from_matrix(inst, matrix), delta)
        weights = verify_delta_linear(inst, matrix, delta)

        assert pairwise.passed == weights.passed


class TestSingleton:
    def test_bound(self):
        assert singleton_bound(3, 2) == 7

    def test_invalid_code(self):
        comparison = compare_singleton(5, 3, 1, valid=False)
        assert comparison.verdict == "invalid"
        assert not comparison.meets


class TestCodebookSearch:
    """Shortest codes with c words at pairwise distance d."""

    def test_two_words(self):
        result = search_codebook(2, 3)
        assert result.length == 3
        assert result.certified
        assert str(result) == "000, 111"

    def test_four_words_need_length_five(self):
        result = search_codebook(4, 3)
        assert result.length == 5
        assert result.certified
        words = result.words
        for i in range(4):
            for j in range(i + 1, 4):
                assert np.count_nonzero(words[i] != words[j]) >= 3

    def test_limit_keeps_lexicode_uncertified(self):
        result = search_codebook(4, 3, limit=8)
        assert result.length == 5
        assert not result.certified

    def test_bad_parameters(self):
        with pytest.raises(EccError):
            search_codebook(0, 3)


class TestSimulation:
    """Exhaustive error injection."""

    def test_protected_code_survives(self, load_fixture, matrix_fixture):
        inst = load_fixture("nonlinear_ecc")
        code = concatenate(inst, matrix_fixture("nonlinear_ecc_m0.txt"), LinearBlockCode(FIVE_TWO_THREE))
        report = simulate_errors(inst, code)

        assert report.passed
        assert report.patterns == 6
        assert report.trials == 96

    def test_unprotected_code_fails(self, load_fixture, matrix_fixture):
        inst = load_fixture("nonlinear_ecc")
        fic = fic_from_matrix(inst, matrix_fixture("nonlinear_ecc_m0.txt"))
        report = simulate_errors(inst, fic, delta=1)

        assert not report.passed
        assert report.patterns == 3
        assert report.to_dict()["failure_count"] == len(report.failures)

    def test_single_pattern(self, load_fixture, product_code):
        inst = load_fixture("nonlinear_ecc")
        code = concatenate(inst, product_code, builtin_code("repetition", 2, delta=1))
        report = simulate_errors(inst, code, pattern="010")

        assert report.passed
        assert report.trials == 16

    def test_pattern_length_mismatch(self, load_fixture, product_code):
        with pytest.raises(DimensionMismatchError):
            simulate_errors(load_fixture("nonlinear_ecc"), product_code, pattern="01")

    def test_trial_budget(self, load_fixture, product_code):
        inst = load_fixture("nonlinear_ecc")
        code = DeltaFic(product_code, 1)
        with pytest.raises(BudgetExceededError):
            simulate_errors(inst, code, budget=10)

    def test_worker_count_does_not_change_failures(self, load_fixture, matrix_fixture):
        inst = load_fixture("nonlinear_ecc")
        fic = fic_from_matrix(inst, matrix_fixture("nonlinear_ecc_m0.txt"))
        one = simulate_errors(inst, fic, delta=1, workers=1)
        three = simulate_errors(inst, fic, delta=1, workers=3)
        assert one.failures == three.failures
