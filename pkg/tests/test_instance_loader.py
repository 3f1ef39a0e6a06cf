"""
Tests for instance parsing, loading and the validation pipeline.
"""

import pytest

from ficoder.exceptions import LoadError, ParseError
from ficoder.field import is_prime
from ficoder.models import ErrorCodes, Severity, lift_instance
from ficoder.models.instance import has_value, want_value
from ficoder.pipeline.instance_loader import instance_from_dict, load_instance
from ficoder.pipeline.instance_parser import parse_instance_text
from ficoder.validator import (
    load_instance_file,
    validate_instance,
    validate_instance_file,
    validate_instance_text,
)


class TestParseInstanceText:
    """Phase 1: JSON text with line numbers."""

    def test_valid_text(self, valid_instance_json):
        result = parse_instance_text(valid_instance_json)
        assert result.success
        assert result.data["K"] == 3
        assert result.line_map["receivers.1.has"] == 7

    def test_truncated_text(self, truncated_json):
        result = parse_instance_text(truncated_json)
        assert not result.success
        assert result.error.code == ErrorCodes.PARSE_ERROR

    def test_empty_text(self):
        result = parse_instance_text("")
        assert not result.success
        assert result.error.code == ErrorCodes.EMPTY_DOCUMENT


class TestLoadInstance:
    """Phase 2: document models and expression compilation."""

    def test_compiles_receivers(self, valid_instance_json):
        parsed = parse_instance_text(valid_instance_json)
        inst, issues = load_instance(parsed.data, parsed.line_map)
        assert issues == []
        assert inst.describe() == {"q": 2, "n": 1, "K": 3, "N": 2}
        assert inst.receivers[0].want_arity == 2

    def test_top_level_must_be_object(self):
        inst, issues = load_instance([1, 2, 3])
        assert inst is None
        assert issues[0].code == ErrorCodes.STRUCTURE_ERROR

    def test_unknown_field(self):
        inst, issues = load_instance({"q": 2, "K": 1, "receivers": [{"has": [], "wants": ["x1"]}], "extra": 1})
        assert inst is None
        assert issues[0].code == ErrorCodes.UNKNOWN_FIELD

    def test_composite_field_size(self):
        inst, issues = load_instance({"q": 4, "K": 1, "receivers": [{"wants": ["x1"]}]})
        assert inst is None
        assert "prime" in issues[0].message

    @pytest.mark.parametrize("q, accepted", [(2, True), (3, True), (7, True), (9, False), (25, False), (49, False)])
    def test_field_size_matches_prime_field(self, q, accepted):
        inst, issues = load_instance({"q": q, "K": 1, "receivers": [{"wants": ["x1"]}]})
        assert (inst is not None) is accepted
        assert is_prime(q) is accepted

    def test_bad_variable_is_located(self, bad_variable_json):
        parsed = parse_instance_text(bad_variable_json)
        inst, issues = load_instance(parsed.data, parsed.line_map)
        assert inst is None
        assert issues[0].code == ErrorCodes.BAD_VARIABLE
        assert issues[0].path == ["receivers", "0", "wants", "0"]
        assert issues[0].line == 6

    def test_majority_over_f3(self):
        with pytest.raises(LoadError) as excinfo:
            instance_from_dict({"q": 3, "K": 3, "receivers": [{"wants": ["maj(x1, x2, x3)"]}]})
        assert excinfo.value.issues[0].code == ErrorCodes.BOOLEAN_OPERATOR_FIELD

    def test_multi_output_function(self):
        inst = instance_from_dict({
            "q": 2, "n": 2, "K": 2,
            "receivers": [{"has": [["x1_1", "x1_2"]], "wants": [["x2_1", "x2_2"]]}],
        })
        assert inst.receivers[0].has[0].arity_out == 2
        # vector (x1_1, x1_2, x2_1, x2_2) = 1011 has label 11
        assert str(has_value(inst, 0, 11)[0]) == "10"
        assert str(want_value(inst, 0, 11)[0]) == "11"


class TestLiftInstance:
    """Block-length lifting of scalar instances."""

    def test_lift_doubles_outputs(self, load_fixture):
        inst = load_fixture("pentagon")
        lifted = lift_instance(inst, 2)
        assert lifted.n == 2
        assert lifted.nk == 10
        assert lifted.receivers[0].has_arity == 4
        assert lifted.receivers[0].wants[0].render(2) == "(x1_1, x1_2)"

    def test_lift_by_one_is_identity(self, load_fixture):
        inst = load_fixture("pentagon")
        assert lift_instance(inst, 1) is inst


class TestValidator:
    """End-to-end validation of instance text and files."""

    def test_valid_instance(self, valid_instance_json):
        report = validate_instance_text(valid_instance_json)
        assert report.success
        assert report.instance is not None
        assert report.summary == {"q": 2, "n": 1, "K": 3, "N": 2}

    def test_notes_include_linearity(self, valid_instance_json):
        report = validate_instance_text(valid_instance_json)
        notes = {n.code: n.message for n in report.notes}
        assert notes[ErrorCodes.LINEARITY_CLASS] == "instance is nonlinear"

    def test_empty_want_set_fails(self, empty_wants_json):
        report = validate_instance_text(empty_wants_json)
        assert not report.success
        assert report.errors[0].code == ErrorCodes.EMPTY_WANT_SET
        assert report.errors[0].severity == Severity.ERROR

    def test_missing_file(self, tmp_path):
        report = validate_instance_file(tmp_path / "missing.json")
        assert not report.success
        assert report.errors[0].code == ErrorCodes.FILE_ERROR

    def test_validate_compiled_instance(self, load_fixture):
        report = validate_instance(load_fixture("pair_exchange_f3"))
        assert report.success
        assert "instance is linear" in [n.message for n in report.notes]

    def test_load_raises_parse_error(self, tmp_instance_file, truncated_json):
        path = tmp_instance_file(truncated_json)
        with pytest.raises(ParseError):
            load_instance_file(path)

    def test_load_raises_load_error(self, tmp_instance_file, empty_wants_json):
        path = tmp_instance_file(empty_wants_json)
        with pytest.raises(LoadError):
            load_instance_file(path)

    @pytest.mark.parametrize("name", [
        "pentagon",
        "two_receiver_majority",
        "linear_pair",
        "pair_exchange_f2",
        "pair_exchange_f3",
        "majority_helper",
        "split_demand_maj",
        "split_demand_parity",
        "split_demand_full",
        "nonlinear_ecc",
    ])
    def test_fixtures_load(self, fixtures_dir, name):
        assert validate_instance_file(fixtures_dir / f"{name}.json").success
