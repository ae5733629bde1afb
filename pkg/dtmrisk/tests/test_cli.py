"""Tests for the dtmrisk command line."""

import json

import pytest

from dtmrisk.cli.main import EXIT_OK, EXIT_ORACLE_MISMATCH, EXIT_USAGE, main
from dtmrisk.distribution.elliptical import EllipticalDistribution
from dtmrisk.generators.families import NormalFamily
from dtmrisk.models.report import OracleComparison, OracleSummary
from dtmrisk.oracle.quadrature import oracle_truncated_moment


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMeasure:
    def test_symmetric_normal(self, capsys):
        code, out, _ = _run(capsys, ["measure", "--p", "0.05", "--q", "0.95"])
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload["family"] == "normal"
        assert payload["dte"] == 0.0
        assert payload["dts"] == pytest.approx(0.0, abs=1e-12)
        assert payload["x_q"] == pytest.approx(1.644854, abs=1e-6)
        assert payload["warnings"] == []

    def test_full_support_is_null_bounded(self, capsys):
        code, out, _ = _run(capsys, ["measure", "--family", "laplace"])
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload["x_p"] is None
        assert payload["x_q"] is None
        assert payload["dtk"] == pytest.approx(3.0, rel=1e-9)

    def test_measure_subset_and_orders(self, capsys):
        code, out, _ = _run(
            capsys,
            ["measure", "--p", "0.1", "--q", "0.8", "--measures", "dte,dtv", "--dtm-orders", "3,5"],
        )
        payload = json.loads(out)
        assert code == EXIT_OK
        assert "dts" not in payload
        assert set(payload) >= {"dte", "dtv", "dtm3", "dtm5"}

    def test_segment_parameters(self, capsys):
        code, out, _ = _run(capsys, ["measure", "--segment", "banks", "--p", "0.1", "--q", "0.9"])
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload["mu"] == pytest.approx(-1.140677e-3, rel=1e-10)
        assert payload["dte"] == pytest.approx(-1.140677e-3, rel=1e-10)

    def test_unsupported_order_exits_with_usage(self, capsys):
        code, out, err = _run(capsys, ["measure", "--family", "student-t", "--dof", "3"])
        assert code == EXIT_USAGE
        assert out == ""
        assert err.startswith("error: ")
        assert "requires m > 4" in err

    def test_missing_dof(self, capsys):
        code, _, err = _run(capsys, ["measure", "--family", "student-t"])
        assert code == EXIT_USAGE
        assert "--dof" in err

    def test_invalid_window(self, capsys):
        code, _, err = _run(capsys, ["measure", "--p", "0.6", "--q", "0.4"])
        assert code == EXIT_USAGE
        assert "p < q" in err

    def test_unknown_family_is_argparse_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["measure", "--family", "cauchy"])
        assert excinfo.value.code == 2

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = _run(capsys, ["measure", "--p", "0.2", "--output", str(target)])
        assert code == EXIT_OK
        assert out == ""
        assert json.loads(target.read_text())["p"] == 0.2

    def test_deterministic(self, capsys):
        argv = ["measure", "--family", "pearson-vii", "--shape", "4", "--p", "0.1", "--q", "0.7"]
        _, first, _ = _run(capsys, argv)
        _, second, _ = _run(capsys, argv)
        assert first == second


class TestMoment:
    def test_second_order_matches_dtv(self, capsys):
        _, moment_out, _ = _run(capsys, ["moment", "--n", "2", "--p", "0.1", "--q", "0.8"])
        _, measure_out, _ = _run(capsys, ["measure", "--p", "0.1", "--q", "0.8"])
        assert float(moment_out) == json.loads(measure_out)["dtv"]

    def test_first_order_is_dte(self, capsys):
        _, out, _ = _run(capsys, ["moment", "--n", "1", "--p", "0.5", "--q", "1"])
        assert float(out) == pytest.approx(0.7978845608, abs=1e-9)

    def test_fifth_order_against_oracle(self, capsys):
        code, out, _ = _run(capsys, ["moment", "--n", "5", "--p", "0.1", "--q", "0.8"])
        dist = EllipticalDistribution(0.0, 1.0, NormalFamily())
        expected = oracle_truncated_moment(dist, dist.window(0.1, 0.8), 5, central=True)
        assert code == EXIT_OK
        assert float(out) == pytest.approx(expected, rel=1e-6, abs=1e-12)

    def test_pearson_fourth_order_rejected(self, capsys):
        code, _, err = _run(
            capsys, ["moment", "--n", "4", "--family", "pearson-vii", "--shape", "2"]
        )
        assert code == EXIT_USAGE
        assert "requires t > 5/2" in err

    def test_order_rejected(self, capsys):
        code, _, _ = _run(capsys, ["moment", "--n", "0"])
        assert code == EXIT_USAGE


class TestSweep:
    def test_symmetric_segment_schedule(self, capsys):
        code, out, _ = _run(capsys, ["sweep", "--segment", "banks"])
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "p,q,dte,dtv,dts,dtk"
        assert len(lines) == 7
        assert {line.split(",")[2] for line in lines[1:]} == {"-1.14067700000e-03"}

    def test_fixed_width_skew_changes_sign(self, capsys):
        code, out, _ = _run(capsys, ["sweep", "--schedule", "fixed-width", "--width", "0.65"])
        skew = [float(line.split(",")[4]) for line in out.splitlines()[1:]]
        assert code == EXIT_OK
        assert skew[0] < 0.0 < skew[-1]

    def test_explicit_windows_with_failure(self, capsys):
        code, out, _ = _run(capsys, ["sweep", "--windows", "0.1:0.9,0.5:0.50000000000001"])
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "p,q,dte,dtv,dts,dtk,error"
        assert lines[1].endswith(",")
        assert "mass" in lines[2]

    def test_heavy_tail_rejected_upfront(self, capsys):
        code, out, err = _run(capsys, ["sweep", "--family", "student-t", "--dof", "4"])
        assert code == EXIT_USAGE
        assert out == ""
        assert "requires m > 4" in err


class TestFit:
    def test_csv(self, capsys, tmp_path):
        path = tmp_path / "returns.csv"
        path.write_text("date,a,b\n2020-01-03,1,2\n2020-01-10,-1,0\n2020-01-17,0,1\n")
        code, out, _ = _run(capsys, ["fit", "--input", str(path)])
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload["names"] == ["a", "b"]
        assert payload["n_obs"] == 3
        assert payload["mean"] == pytest.approx([0.0, 1.0], abs=1e-15)
        assert payload["covariance"][0][0] == pytest.approx(2.0 / 3.0, rel=1e-10)

    def test_ragged_csv(self, capsys, tmp_path):
        path = tmp_path / "returns.csv"
        path.write_text("a,b\n0.1,0.2\n0.1,0.2,0.3\n")
        code, _, err = _run(capsys, ["fit", "--input", str(path)])
        assert code == EXIT_USAGE
        assert "line 3" in err

    def test_demo(self, capsys):
        code, out, _ = _run(capsys, ["fit", "--demo", "500", "--seed", "4"])
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload["n_obs"] == 500
        assert len(payload["covariance"]) == 3

    def test_needs_a_source(self, capsys):
        code, _, err = _run(capsys, ["fit"])
        assert code == EXIT_USAGE
        assert "--input" in err


class TestOracle:
    def test_normal_passes(self, capsys):
        code, out, _ = _run(capsys, ["oracle", "--p", "0.05", "--q", "0.95"])
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload["passed"] is True
        assert payload["max_relative_error"] < 1e-9

    def test_single_order(self, capsys):
        code, out, _ = _run(
            capsys, ["oracle", "--family", "laplace", "--n", "4", "--p", "0.2", "--q", "0.9"]
        )
        payload = json.loads(out)
        assert code == EXIT_OK
        assert [c["measure"] for c in payload["comparisons"]] == ["dtm4"]

    def test_near_boundary_is_flagged(self, capsys):
        code, out, _ = _run(
            capsys,
            ["oracle", "--family", "student-t", "--dof", "4.01", "--measures", "dtk",
             "--p", "0.1", "--q", "0.9"],
        )
        payload = json.loads(out)
        assert code in (EXIT_OK, EXIT_ORACLE_MISMATCH)
        assert payload["comparisons"][0]["warnings"]

    def test_mismatch_exit_code(self, capsys, monkeypatch):
        monkeypatch.setattr("dtmrisk.cli.main.compare_with_oracle", _failing_summary)
        code, out, _ = _run(capsys, ["oracle"])
        assert code == EXIT_ORACLE_MISMATCH
        assert json.loads(out)["passed"] is False


def _failing_summary(dist, window, measures=(), dtm_orders=(), tolerance=None):
    comparison = OracleComparison(measure="dte", closed_form=1.0, oracle=2.0, relative_error=0.5)
    return OracleSummary(
        family="normal",
        p=window.p,
        q=window.q,
        tolerance=1e-6,
        comparisons=[comparison],
        max_relative_error=0.5,
        passed=False,
    )
