"""
Tests for the command-line interface.
"""

import json

import pytest

from main import main


@pytest.fixture
def run_json(capsys):
    """Run the CLI with --format json; returns (exit code, parsed stdout)."""
    def _run(*args):
        code = main([*map(str, args), "--format", "json"])
        out = capsys.readouterr().out
        return code, json.loads(out) if out.strip() else None
    return _run


class TestCLIBasics:
    """Argument handling and listings."""

    def test_no_command_prints_help(self, capsys):
        assert main([]) == 2
        assert "usage: ficoder" in capsys.readouterr().out

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_missing_instance(self, capsys):
        assert main(["graph"]) == 2
        assert "needs --instance" in capsys.readouterr().err

    def test_bad_block_length(self, fixtures_dir, capsys):
        assert main(["graph", "--instance", str(fixtures_dir / "pentagon.json"), "--n", "0"]) == 2

    def test_unknown_profile(self, fixtures_dir, capsys):
        code = main(["graph", "--instance", str(fixtures_dir / "pentagon.json"), "--profile", "missing"])
        assert code == 2
        assert "Available profiles: default, quick" in capsys.readouterr().err

    def test_list_rules(self, capsys):
        assert main(["--list-rules"]) == 0
        out = capsys.readouterr().out
        assert "Instance checks:" in out
        assert "FIC001" in out

    def test_list_profiles(self, capsys):
        assert main(["--list-profiles"]) == 0
        out = capsys.readouterr().out
        assert "  - default:" in out
        assert "  - quick:" in out


class TestValidateCommand:
    def test_valid_instance(self, fixtures_dir, run_json):
        code, data = run_json("validate", "--instance", fixtures_dir / "pentagon.json")
        assert code == 0
        assert data["status"] == "pass"
        assert data["summary"] == {"q": 2, "n": 1, "K": 5, "N": 5}

    def test_unparseable_instance(self, tmp_instance_file, truncated_json, run_json):
        code, data = run_json("validate", "--instance", tmp_instance_file(truncated_json))
        assert code == 2
        assert data["issues"]["errors"][0]["code"] == "FIC001"

    def test_rule_error(self, tmp_instance_file, empty_wants_json, run_json):
        code, data = run_json("validate", "--instance", tmp_instance_file(empty_wants_json))
        assert code == 1
        assert data["status"] == "fail"

    def test_text_output(self, fixtures_dir, capsys):
        assert main(["validate", "--instance", str(fixtures_dir / "pentagon.json")]) == 0
        out = capsys.readouterr().out
        assert out.startswith("ficoder validate: pass")

    def test_quiet_success_prints_nothing(self, fixtures_dir, capsys):
        assert main(["validate", "--instance", str(fixtures_dir / "pentagon.json"), "--quiet"]) == 0
        assert capsys.readouterr().out == ""


class TestGraphAndColor:
    def test_graph_section(self, fixtures_dir, run_json):
        code, data = run_json("graph", "--instance", fixtures_dir / "pair_exchange_f2.json")
        graph = data["graph"]

        assert code == 0
        assert (graph["vertices"], graph["edges"], graph["degree"]) == (16, 80, 10)
        assert graph["cayley"] is True
        assert len(graph["connection_set"]) == 10
        assert graph["connection_set"][0] == "0001"

    def test_dot_file(self, fixtures_dir, tmp_path, capsys):
        dot = tmp_path / "graph.dot"
        assert main(["graph", "--instance", str(fixtures_dir / "pentagon.json"), "--dot", str(dot)]) == 0
        assert dot.read_text().startswith("graph confusion {")

    def test_json_is_deterministic(self, fixtures_dir, capsys):
        args = ["graph", "--instance", str(fixtures_dir / "majority_helper.json"), "--format", "json"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        assert capsys.readouterr().out == first

    def test_color(self, fixtures_dir, tmp_path, run_json):
        output = tmp_path / "classes.txt"
        code, data = run_json(
            "color", "--instance", fixtures_dir / "two_receiver_majority.json", "--output", output
        )
        assert code == 0
        assert data["coloring"]["chi"] == 4
        assert data["coloring"]["length"] == 2
        assert len(output.read_text().splitlines()) == 4


class TestSynthesizeAndVerify:
    def test_synthesized_code_verifies(self, fixtures_dir, tmp_path, run_json):
        instance = fixtures_dir / "majority_helper.json"
        output = tmp_path / "code.txt"

        code, data = run_json("synthesize", "--instance", instance, "--output", output)
        assert code == 0
        assert data["code"]["length"] == 3
        assert data["code"]["perfect"] is True

        code, data = run_json("verify", "--instance", instance, "--assignment", output)
        assert code == 0
        assert data["verification"]["passed"] is True

    def test_seed_code_is_kept(self, fixtures_dir, run_json):
        code, data = run_json(
            "synthesize",
            "--instance", fixtures_dir / "two_receiver_majority.json",
            "--assignment", fixtures_dir / "majority_affine_map.txt",
        )
        assert code == 0
        assert data["code"]["map"] == "affine"
        assert data["code"]["closed_form"] == ["x1 + x3", "1 + x2 + x3"]

    def test_partitioned_synthesis(self, fixtures_dir, run_json):
        code, data = run_json(
            "synthesize", "--instance", fixtures_dir / "two_receiver_majority.json", "--partition", "1,1"
        )
        assert code == 0
        assert data["partition"] == {"parts": [1, 1], "part_lengths": [2, 2]}
        assert data["code"]["length"] == 4

    def test_verify_matrix(self, fixtures_dir, run_json):
        code, data = run_json(
            "verify",
            "--instance", fixtures_dir / "pentagon.json",
            "--matrix", fixtures_dir / "pentagon_scalar_matrix.txt",
        )
        assert code == 0
        assert data["code"]["closed_form"] == ["x1 + x2", "x3 + x4", "x5"]

    def test_verify_vector_matrix(self, fixtures_dir, run_json):
        code, data = run_json(
            "verify",
            "--instance", fixtures_dir / "pentagon.json",
            "--n", 2,
            "--matrix", fixtures_dir / "pentagon_vector_matrix.txt",
        )
        assert code == 0
        assert data["verification"]["message_vectors"] == 1024
        assert data["code"]["length_per_block"] == "5/2"

    def test_verify_failure(self, fixtures_dir, tmp_path, run_json):
        bad = tmp_path / "bad.txt"
        bad.write_text("{0,1,2,3,4,5,6,7} -> 0\n")
        code, data = run_json(
            "verify", "--instance", fixtures_dir / "two_receiver_majority.json", "--assignment", bad
        )
        assert code == 1
        assert data["status"] == "fail"
        assert data["verification"]["failure_count"] > 0

    def test_unreadable_assignment(self, fixtures_dir, tmp_path, run_json):
        bad = tmp_path / "bad.txt"
        bad.write_text("not a code\n")
        code, data = run_json(
            "verify", "--instance", fixtures_dir / "two_receiver_majority.json", "--assignment", bad
        )
        assert code == 2
        assert data["error"]["type"] == "ParseError"

    def test_verify_needs_a_code(self, fixtures_dir, run_json):
        code, data = run_json("verify", "--instance", fixtures_dir / "pentagon.json")
        assert code == 2
        assert data["error"]["type"] == "UsageError"


class TestBounds:
    def test_certified_length(self, fixtures_dir, run_json):
        code, data = run_json("bounds", "--instance", fixtures_dir / "two_receiver_majority.json")
        assert code == 0
        assert data["code"] == {"chi": 4, "length": 2, "mu": 2, "perfect": True}

    def test_block_length_two(self, fixtures_dir, run_json):
        code, data = run_json(
            "bounds", "--instance", fixtures_dir / "pentagon.json", "--n", 2, "--budget", 2000
        )
        assert code == 0
        assert data["bounds"]["or_power_lower"] == 41
        assert data["bounds"]["mu_block"] == 2
        assert "code" not in data


class TestErrorCorrectionCommands:
    def test_ecc_verify(self, fixtures_dir, run_json):
        instance = fixtures_dir / "nonlinear_ecc.json"
        code, data = run_json("ecc-verify", "--instance", instance, "--matrix", fixtures_dir / "nonlinear_ecc_m1.txt")
        assert code == 0
        assert data["ecc"]["min_distance"] == 3

        code, data = run_json("ecc-verify", "--instance", instance, "--matrix", fixtures_dir / "nonlinear_ecc_m0.txt")
        assert code == 1
        assert data["ecc"]["witness"]["distance"] == 1

    def test_ecc_verify_linear_weight_check(self, fixtures_dir, run_json):
        code, data = run_json(
            "ecc-verify",
            "--instance", fixtures_dir / "pair_exchange_f3.json",
            "--matrix", fixtures_dir / "pair_exchange_f3_m0.txt",
            "--delta", 0,
        )
        assert code == 0
        assert data["weight_check"]["passed"] is True

    def test_concat_repetition(self, fixtures_dir, run_json):
        code, data = run_json(
            "ecc-concat", "--instance", fixtures_dir / "nonlinear_ecc.json", "--outer", "repetition", "--delta", 1
        )
        assert code == 0
        assert data["concatenation"]["length"] == 3
        assert data["singleton"]["verdict"] == "optimal"
        assert data["simulation"]["passed"] is True

    def test_concat_mds(self, fixtures_dir, tmp_path, run_json):
        output = tmp_path / "m1.txt"
        code, data = run_json(
            "ecc-concat",
            "--instance", fixtures_dir / "pair_exchange_f3.json",
            "--matrix", fixtures_dir / "pair_exchange_f3_m0.txt",
            "--outer", "mds423",
            "--output", output,
        )
        assert code == 0
        assert data["singleton"] == {"bound": 4, "length": 4, "meets": True, "verdict": "optimal"}
        assert output.read_text().splitlines()[0] == "3 4 4"

    def test_concat_wrong_field(self, fixtures_dir, run_json):
        code, data = run_json(
            "ecc-concat", "--instance", fixtures_dir / "nonlinear_ecc.json", "--outer", "mds423"
        )
        assert code == 2
        assert data["error"]["type"] == "EccError"

    def test_simulate(self, fixtures_dir, run_json):
        instance = fixtures_dir / "nonlinear_ecc.json"
        code, data = run_json("simulate", "--instance", instance, "--matrix", fixtures_dir / "nonlinear_ecc_m1.txt")
        assert code == 0
        assert data["simulation"]["trials"] == 96

        code, data = run_json("simulate", "--instance", instance, "--matrix", fixtures_dir / "nonlinear_ecc_m0.txt")
        assert code == 1
        assert data["simulation"]["failure_count"] > 0

    def test_simulate_single_pattern(self, fixtures_dir, run_json):
        code, data = run_json(
            "simulate",
            "--instance", fixtures_dir / "nonlinear_ecc.json",
            "--matrix", fixtures_dir / "nonlinear_ecc_m1.txt",
            "--pattern", "00100",
        )
        assert code == 0
        assert data["simulation"]["patterns"] == 1
        assert data["simulation"]["delta"] is None

    def test_simulate_budget(self, fixtures_dir, run_json):
        code, data = run_json(
            "simulate",
            "--instance", fixtures_dir / "nonlinear_ecc.json",
            "--matrix", fixtures_dir / "nonlinear_ecc_m1.txt",
            "--budget", 10,
        )
        assert code == 3
        assert data["status"] == "timeout"


class TestStableOutput:
    """JSON output does not depend on the worker count and matches saved runs."""

    RUNS = [
        ("graph", "pair_exchange_f2.json"),
        ("synthesize", "majority_helper.json"),
        ("simulate", "nonlinear_ecc.json", "--matrix", "nonlinear_ecc_m1.txt"),
    ]

    GOLDEN = [
        ("synthesize_majority_helper.json", "synthesize", "majority_helper.json"),
        ("bounds_pair_exchange_f3.json", "bounds", "pair_exchange_f3.json"),
        (
            "ecc_concat_repetition.json",
            "ecc-concat", "nonlinear_ecc.json",
            "--assignment", "nonlinear_ecc_product_map.txt",
            "--outer", "repetition",
        ),
    ]

    @staticmethod
    def _argv(fixtures_dir, command, instance, *options):
        argv = [command, "--instance", str(fixtures_dir / instance)]
        for flag, value in zip(options[::2], options[1::2]):
            if flag in ("--matrix", "--assignment"):
                value = str(fixtures_dir / value)
            argv += [flag, value]
        return argv + ["--format", "json"]

    @pytest.mark.parametrize("run", RUNS, ids=[r[0] for r in RUNS])
    def test_thread_count_does_not_change_output(self, fixtures_dir, monkeypatch, capsys, run):
        argv = self._argv(fixtures_dir, *run)
        outputs = []
        for threads in ("1", "4"):
            monkeypatch.setenv("FICODER_THREADS", threads)
            assert main(argv) == 0
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]

    @pytest.mark.parametrize("case", GOLDEN, ids=[g[0] for g in GOLDEN])
    def test_matches_golden_output(self, fixtures_dir, monkeypatch, capsys, case):
        golden, *run = case
        monkeypatch.delenv("FICODER_THREADS", raising=False)
        assert main(self._argv(fixtures_dir, *run)) == 0
        assert capsys.readouterr().out == (fixtures_dir / "golden" / golden).read_text()
