"""CLI surface: subcommands, exit codes, determinism, config files."""

import json
from fractions import Fraction

import pytest

from gkktau.cli import main
from gkktau.exact import RatMatrix
from gkktau.family import FamilyParams, build_A, build_B


def run_cli(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBuild:
    def test_family_matrix(self, capsys):
        code, out, _ = run_cli(capsys, "build", "--n", "3", "--k", "1", "--t", "1/2")
        assert code == 0
        assert RatMatrix.from_json(out) == build_A(FamilyParams(3, 1, Fraction(1, 2)))

    def test_limit_matrix(self, capsys):
        code, out, _ = run_cli(capsys, "build", "--k", "21", "--limit")
        assert code == 0
        assert RatMatrix.from_json(out) == build_B(21)

    def test_small_order(self, capsys):
        code, out, _ = run_cli(capsys, "build", "--n", "2", "--k", "5", "--t", "1/2")
        assert code == 0
        assert RatMatrix.from_json(out).to_lists() == [[1, 0], [1, 1]]

    def test_bad_t_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "build", "--n", "3", "--k", "1", "--t", "3/2")
        assert code == 2
        assert "t must lie in (0,1)" in err

    def test_missing_params_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "build", "--n", "3")
        assert code == 2

    def test_deterministic_output(self, capsys):
        _, first, _ = run_cli(capsys, "build", "--n", "6", "--k", "2", "--t", "1/3")
        _, second, _ = run_cli(capsys, "build", "--n", "6", "--k", "2", "--t", "1/3")
        assert first == second

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "m.json"
        code, out, _ = run_cli(
            capsys, "build", "--n", "3", "--k", "1", "--t", "1/2", "--output", str(target)
        )
        assert code == 0 and out == ""
        assert RatMatrix.from_json(target.read_text())


class TestClassify:
    def test_gkk_holds_exit_zero(self, capsys):
        code, out, _ = run_cli(
            capsys, "classify", "--n", "8", "--k", "3", "--t", "1/2", "--properties", "GKK"
        )
        assert code == 0
        report = json.loads(out.splitlines()[0])
        assert report["property"] == "GKK" and report["holds"]

    def test_stability_failure_exit_one(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "classify",
            "--n", "44", "--k", "21", "--t", "1/2",
            "--properties", "POS_STABLE",
        )
        assert code == 1
        report = json.loads(out.splitlines()[0])
        assert not report["holds"]
        assert "eigenvalue_re" in report["witness"]

    def test_structured_gkk_beyond_cap(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "classify",
            "--n", "44", "--k", "21", "--t", "1/2",
            "--properties", "GKK,TAU",
        )
        assert code == 0
        reports = [json.loads(line) for line in out.splitlines()]
        assert all(r["holds"] for r in reports)
        assert reports[0]["details"]["method"] == "structured"

    def test_unknown_property_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, "classify", "--n", "3", "--k", "1", "--t", "1/2", "--properties", "NOPE"
        )
        assert code == 2

    def test_cap_refusal_names_cap(self, capsys):
        # a 13x13 limit matrix is beyond the pair-sweep cap and offers no
        # (n, k, t) parameters for a structured certificate of sign symmetry
        code, _, err = run_cli(
            capsys, "classify", "--k", "6", "--limit", "--properties", "WSS"
        )
        assert code == 2
        assert "capped" in err

    def test_identity_like_small_all(self, capsys):
        code, out, _ = run_cli(
            capsys, "classify", "--n", "2", "--k", "5", "--t", "1/2", "--properties", "all"
        )
        assert code == 0
        assert len(out.splitlines()) == 7


class TestCharpolyRoots:
    def test_charpoly_json(self, capsys):
        code, out, _ = run_cli(capsys, "charpoly", "--n", "3", "--k", "1", "--t", "1/2")
        assert code == 0
        obj = json.loads(out)
        assert obj["coeffs"] == [["1", "2"], ["-3", "1"], ["3", "1"], ["-1", "1"]]

    def test_roots_report(self, capsys):
        code, out, _ = run_cli(capsys, "roots", "--n", "4", "--k", "1", "--t", "1/2")
        assert code == 0
        obj = json.loads(out)
        assert obj["degree"] == 4
        assert len(obj["complex_roots"]) == 4
        assert obj["precision_digits"] == 25
        for e in obj["real_root_enclosures"]:
            assert "/" in e["lo"] and "/" in e["hi"]


class TestHurwitzCommand:
    def test_report_fields(self, capsys):
        code, out, _ = run_cli(capsys, "hurwitz", "--k", "21")
        assert code == 0
        obj = json.loads(out)
        assert obj["order"] == 23
        assert obj["routh_verdict"] == "unstable"
        assert Fraction(obj["minor_2to5"]) == Fraction(obj["closed_form_minor"])
        assert Fraction(obj["minor_2to5"]) < 0

    def test_tnn_flag_small(self, capsys):
        code, out, _ = run_cli(capsys, "hurwitz", "--k", "5", "--tnn")
        assert code == 0
        obj = json.loads(out)
        assert obj["tnn_negative_minor"] is None
        assert obj["tnn_minors_checked"] == 2940

    def test_small_k_omits_minor_fields(self, capsys):
        code, out, _ = run_cli(capsys, "hurwitz", "--k", "1")
        assert code == 0
        obj = json.loads(out)
        assert obj["order"] == 3
        assert "minor_2to5" not in obj


class TestVerifyPaper:
    def test_quick_pipeline_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify-paper", "--quick")
        assert code == 0
        lines = out.splitlines()
        assert lines[-1] == "verification PASSED"
        assert all(line.startswith("PASS") for line in lines[:-1])


class TestScanK:
    def test_csv_table(self, capsys):
        code, out, _ = run_cli(capsys, "scan-k", "--k-max", "25", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "k,cubic_factor,minor_value,sign"
        assert lines[-1] == "first unstable k = 21"
        assert len(lines) == 2 + (25 - 3 + 1)

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "scan-k", "--k-max", "22")
        assert code == 0
        body, trailer = out.rsplit("\n", 2)[0], out.splitlines()[-1]
        obj = json.loads(body)
        assert obj["first_unstable_k"] == 21
        assert trailer == "first unstable k = 21"

    def test_below_threshold_rejected(self, capsys):
        code, _, err = run_cli(capsys, "scan-k", "--k-max", "20")
        assert code == 2
        assert "k_max >= 21" in err


class TestConfigFile:
    def test_flags_override_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text('n = 3\nk = 1\nt = "1/2"\n')
        code, out, _ = run_cli(capsys, "build", "--config", str(cfg))
        assert code == 0
        assert RatMatrix.from_json(out).rows == 3
        code, out, _ = run_cli(capsys, "build", "--config", str(cfg), "--n", "4")
        assert code == 0
        assert RatMatrix.from_json(out).rows == 4

    def test_unknown_key_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text("bogus = 1\n")
        code, _, err = run_cli(capsys, "build", "--config", str(cfg))
        assert code == 2
        assert "unknown config key" in err

    def test_limit_from_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text("k = 2\nlimit = true\n")
        code, out, _ = run_cli(capsys, "build", "--config", str(cfg))
        assert code == 0
        assert RatMatrix.from_json(out) == build_B(2)


class TestVersionAndHelp:
    def test_version(self, capsys):
        code, out, _ = run_cli(capsys, "--version")
        assert code == 0
        assert "gkktau" in out

    def test_no_command_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys)
        assert code == 2
