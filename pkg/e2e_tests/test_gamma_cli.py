"""
End-to-end tests for `reithom gamma study`.
"""

import csv
import json

from click.testing import CliRunner

from reithom.main import main

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _run(*args):
    runner = CliRunner()
    return runner.invoke(main, [*args])


# ---------------------------------------------------------------------------
# Tests
# ---------------------------------------------------------------------------


class TestStudy:
    def test_laminate_study_files(self, tmp_path):
        result = _run(
            "--out-dir",
            str(tmp_path),
            "gamma",
            "study",
            "--integrand",
            "quadratic_laminate",
            "--xi0",
            "1",
            "--eps",
            "2^-2..2^-3",
            "-o",
            "study.csv",
            "--summary",
            "s.json",
        )
        assert result.exit_code == 0, result.output
        assert "✓ Study written to" in result.output

        lines = (tmp_path / "study.csv").read_text().splitlines()
        assert len(lines) == 3
        with open(tmp_path / "study.csv", newline="", encoding="utf-8") as f:
            rows = list(csv.DictReader(f))
        assert [int(r["grid_points"]) for r in rows] == [257, 1025]

        summary = json.loads((tmp_path / "s.json").read_text())
        assert abs(summary["hom_value"] - 0.25) < 1e-9

    def test_unknown_integrand(self):
        result = _run("gamma", "study", "--integrand", "laminate", "--xi0", "1", "--eps", "0.25")
        assert result.exit_code == 2
        assert '"error": "config"' in result.output
