import csv
import io

import pytest

from src.PSICM.core.specfun import EULER_GAMMA
from src.PSICM.main import PSICMCLI, main

SINGLE_POINT = ["--grid-min", "1", "--grid-max", "1", "--points", "1"]


def run(capsys, *argv):
    code = PSICMCLI().run(list(argv))
    captured = capsys.readouterr()
    return code, list(csv.DictReader(io.StringIO(captured.out))), captured.err


class TestEval:
    def test_single_point(self, capsys):
        code, rows, err = run(capsys, "eval", *SINGLE_POINT)
        assert code == 0
        assert len(rows) == 1
        assert list(rows[0]) == ["x", "digamma", "theta_1", "theta1_kernel", "gamma_shape"]
        assert abs(float(rows[0]["theta_1"]) - EULER_GAMMA) < 1e-15
        assert abs(float(rows[0]["digamma"]) + EULER_GAMMA) < 1e-15
        assert abs(float(rows[0]["theta1_kernel"]) - EULER_GAMMA) < 1e-9
        assert "eval: 1 rows" in err

    def test_theta1_column_decreases(self, capsys):
        code, rows, _ = run(capsys, "eval", "--grid-min", "1e-6", "--grid-max", "1e6", "--points", "13")
        assert code == 0
        values = [float(r["theta_1"]) for r in rows]
        assert len(values) == 13
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_several_alphas(self, capsys):
        code, rows, _ = run(capsys, "eval", *SINGLE_POINT, "--alpha", "0", "--alpha", "2", "--alpha", "0")
        assert code == 0
        assert "theta_0" in rows[0] and "theta_2" in rows[0]
        assert "theta_1" not in rows[0]

    def test_negative_grid_min(self, capsys):
        code, rows, err = run(capsys, "eval", "--grid-min=-1")
        assert code == 2
        assert rows == []
        assert "grid.min" in err

    def test_config_file(self, capsys, tmp_path):
        path = tmp_path / "eval.cfg"
        path.write_text("grid.min = 2\ngrid.max = 2\ngrid.points = 1\nalpha = 0, 1\n", encoding="utf-8")
        code, rows, _ = run(capsys, "eval", "--config", str(path))
        assert code == 0
        assert float(rows[0]["x"]) == 2.0
        assert float(rows[0]["theta_0"]) == pytest.approx(float(rows[0]["theta_1"]) / 2.0, rel=1e-15)

    def test_unknown_config_key(self, capsys, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("colour = blue\n", encoding="utf-8")
        code, _, err = run(capsys, "eval", "--config", str(path))
        assert code == 2
        assert "colour" in err

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as info:
            PSICMCLI().run(["plot"])
        assert info.value.code == 2


class TestIdentities:
    def test_default_tolerance(self, capsys):
        code, rows, _ = run(capsys, "identities")
        assert code == 0
        assert rows[0]["identity"] == "log_ratio(1,e)"
        assert len(rows) == 131

    def test_tight_tolerance_is_a_mismatch(self, capsys):
        code, _, _ = run(capsys, "identities", "--tol", "1e-16")
        assert code == 1

    def test_forced_non_convergence(self, capsys):
        code, rows, err = run(capsys, "identities", "--rel-tol", "1e-16", "--abs-tol", "1e-300")
        assert code == 3
        assert rows == []
        assert "LOG_RATIO" in err
        assert "did not converge" in err


class TestCertify:
    def test_consistent_alphas(self, capsys):
        code, rows, err = run(capsys, "certify", "--alpha", "-1", "--alpha", "0", "--alpha", "1")
        assert code == 0
        summaries = [r for r in rows if r["row"] == "summary"]
        assert [r["verdict"] for r in summaries] == ["CONSISTENT_CM"] * 3
        assert all(r["row"] == "summary" for r in rows)
        assert err.count("CONSISTENT_CM, expected CONSISTENT_CM") == 3

    def test_violation_is_expected_above_one(self, capsys):
        code, rows, _ = run(capsys, "certify", "--alpha", "1.5")
        assert code == 0
        assert rows[0]["verdict"] == "VIOLATION"
        assert rows[0]["expected"] == "VIOLATION"
        witnesses = [r for r in rows if r["row"] == "witness"]
        assert witnesses
        assert all(float(r["value"]) < -float(r["slack"]) for r in witnesses)

    def test_mismatch_exit_code(self, capsys):
        code, rows, _ = run(capsys, "certify", "--alpha", "1.5", "--order", "0")
        assert code == 1
        assert rows[0]["verdict"] == "CONSISTENT_CM"

    def test_analytic_method(self, capsys):
        code, rows, _ = run(capsys, "certify", "--method", "analytic", "--alpha", "0", "--alpha", "2")
        assert code == 0
        assert {r["method"] for r in rows} == {"analytic"}

    def test_analytic_order_limit(self, capsys):
        code, _, err = run(capsys, "certify", "--method", "analytic", "--order", "9")
        assert code == 2
        assert "order" in err

    def test_output_is_deterministic(self, capsys, tmp_path):
        args = ["certify", "--alpha", "1.05", "--grid-min", "1e-3", "--grid-max", "10", "--points", "15"]
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert PSICMCLI().run([*args, "--out", str(first)]) == 0
        assert PSICMCLI().run([*args, "--out", str(second)]) == 0
        assert capsys.readouterr().out == ""
        assert first.read_bytes() == second.read_bytes()
        assert first.read_text(encoding="utf-8").startswith("function_id,alpha,method,row,")


def test_bounds(capsys):
    code, rows, err = run(capsys, "bounds")
    assert code == 0
    assert len(rows) == 18
    assert {r["passed"] for r in rows} == {"true"}
    assert "0 failed" in err


def test_limits(capsys):
    code, rows, _ = run(capsys, "limits")
    assert code == 0
    assert len(rows) == 11
    assert {r["passed"] for r in rows} == {"true"}


def test_main_exits_with_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["eval", *SINGLE_POINT])
    assert info.value.code == 0


def test_cell_formatting():
    from src.PSICM.certify.engine import Verdict
    from src.PSICM.cli.tables import format_cell, render_rows

    assert format_cell(0.1) == "0.10000000000000001"
    assert format_cell(float("nan")) == "nan"
    assert format_cell(True) == "true"
    assert format_cell(None) == ""
    assert format_cell(Verdict.VIOLATION) == "VIOLATION"
    assert render_rows(["a", "b"], [{"a": 1, "b": 2.5}]) == "a,b\n1,2.5\n"
