"""
End-to-end tests for `reithom twoscale pair|norm|hessian`.
"""

import csv

from click.testing import CliRunner

from reithom.main import main

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _run(*args):
    runner = CliRunner()
    return runner.invoke(main, [*args])


def _rows(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


# ---------------------------------------------------------------------------
# Tests
# ---------------------------------------------------------------------------


class TestPair:
    def test_limit_estimate(self):
        args = ("--seq", "cos_fast", "--test", "cos_z", "--eps", "2^-2..2^-3")
        result = _run("twoscale", "pair", *args)
        assert result.exit_code == 0, result.output
        assert "limit estimate: 0.5" in result.output

    def test_csv_output(self, tmp_path):
        result = _run(
            "--out-dir",
            str(tmp_path),
            "twoscale",
            "pair",
            "--seq",
            "two_plus_cos_slow",
            "--test",
            "one",
            "--eps",
            "0.25,0.125",
            "-o",
            "pairs.csv",
        )
        assert result.exit_code == 0, result.output
        rows = _rows(tmp_path / "pairs.csv")
        assert list(rows[0]) == ["epsilon", "pairing", "target", "residual"]
        assert [float(r["epsilon"]) for r in rows] == [0.25, 0.125]
        assert abs(float(rows[-1]["pairing"]) - 2.0) < 1e-12

    def test_unknown_sequence_is_a_usage_error(self):
        args = ("--seq", "cos_slow_shift", "--test", "one", "--eps", "0.25")
        result = _run("twoscale", "pair", *args)
        assert result.exit_code == 2

    def test_increasing_epsilons(self):
        args = ("--seq", "constant", "--test", "one", "--eps", "0.125,0.25")
        result = _run("twoscale", "pair", *args)
        assert result.exit_code == 3
        assert '"error": "contract"' in result.output


class TestNorm:
    def test_norm_rows(self, tmp_path):
        result = _run(
            "--out-dir",
            str(tmp_path),
            "twoscale",
            "norm",
            "--seq",
            "cos_fast",
            "--nfunction",
            "plog:2,0",
            "--eps",
            "2^-2..2^-3",
            "-o",
            "norm.csv",
        )
        assert result.exit_code == 0, result.output
        rows = _rows(tmp_path / "norm.csv")
        assert len(rows) == 2
        assert all(float(r["residual"]) < 1e-6 for r in rows)


class TestHessian:
    def test_macro_triple(self, tmp_path):
        result = _run(
            "--out-dir",
            str(tmp_path),
            "twoscale",
            "hessian",
            "--triple",
            "macro",
            "--test",
            "one",
            "--eps",
            "2^-2..2^-3",
            "-o",
            "hessian.csv",
        )
        assert result.exit_code == 0, result.output
        rows = _rows(tmp_path / "hessian.csv")
        assert [int(r["grid_points"]) for r in rows] == [513, 2049]
        assert float(rows[0]["residual"]) > float(rows[1]["residual"])
