"""
End-to-end tests for `reithom cell inner|table|outer`.

Small resolutions keep every cell problem well under a second.
"""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from reithom.main import main

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _run(*args):
    runner = CliRunner()
    return runner.invoke(main, [*args])


def _ok(result):
    assert result.exit_code == 0, (
        f"Command failed (exit {result.exit_code}):\n"
        f"output: {result.output}\n"
        f"exception: {result.exception}"
    )
    return result


# ---------------------------------------------------------------------------
# Tests
# ---------------------------------------------------------------------------


class TestInner:
    def test_laminate_energy(self):
        result = _ok(
            _run("cell", "inner", "--integrand", "quadratic_laminate", "--xi", "1", "--res", "64")
        )
        assert "energy" in result.output
        assert "0.25" in result.output

    def test_corrector_file(self, tmp_path):
        _ok(
            _run(
                "--out-dir",
                str(tmp_path),
                "cell",
                "inner",
                "--integrand",
                "p_laminate",
                "-p",
                "p=3",
                "--xi",
                "1",
                "--res",
                "32",
                "--out",
                "psi",
            )
        )
        meta = json.loads((tmp_path / "psi.json").read_text())
        assert meta["cells"] == "Z"
        assert (tmp_path / "psi.bin").stat().st_size == 32 * 8

    def test_unknown_integrand(self):
        result = _run("cell", "inner", "--integrand", "laminate", "--xi", "1")
        assert result.exit_code == 2
        assert '"error": "config"' in result.output

    def test_resolution_must_be_dyadic(self):
        args = ("--integrand", "quadratic_laminate", "--xi", "1", "--res", "12")
        result = _run("cell", "inner", *args)
        assert result.exit_code == 4
        assert '"error": "resolution"' in result.output


class TestTableAndOuter:
    """Tabulate f_hom on a coarse lattice, then solve the outer problem from it."""

    @pytest.fixture()
    def table_dir(self, tmp_path) -> Path:
        _ok(
            _run(
                "--out-dir",
                str(tmp_path),
                "cell",
                "table",
                "--integrand",
                "quadratic_laminate",
                "--xi-range",
                "-2:2:5",
                "--y-samples",
                "4",
                "--res",
                "32",
                "-o",
                "lam",
            )
        )
        return tmp_path

    def test_table_files(self, table_dir):
        meta = json.loads((table_dir / "lam.json").read_text())
        assert meta["kind"] == "homtable"
        assert meta["level"] == "inner"
        assert meta["n_y"] == 4
        assert meta["integrand_name"] == "quadratic_laminate"

    def test_outer_from_table(self, table_dir):
        result = _ok(
            _run("cell", "outer", "--table", str(table_dir / "lam"), "--xi", "1", "--res", "32")
        )
        assert "f_hom_bar" in result.output
        assert "0.25" in result.output

    def test_missing_table(self, tmp_path):
        result = _run("cell", "outer", "--table", str(tmp_path / "nothing"), "--xi", "1")
        assert result.exit_code == 12
        assert '"error": "io"' in result.output
