"""
End-to-end tests for `reithom config init|show` and `reithom run`.
"""

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


class TestConfigInit:
    def test_creates_example(self, tmp_path):
        path = tmp_path / "inner.json"
        result = _run("config", "init", "cell-inner", str(path))
        assert result.exit_code == 0, result.output
        assert "✓ Created cell-inner experiment" in result.output
        assert json.loads(path.read_text())["kind"] == "cell-inner"

    def test_refuses_to_overwrite(self, tmp_path):
        path = tmp_path / "inner.json"
        path.write_text("{}")
        result = _run("config", "init", "cell-inner", str(path))
        assert result.exit_code == 1
        assert "already exists" in result.output
        assert path.read_text() == "{}"


class TestConfigShow:
    def test_valid_example(self, tmp_path):
        path = tmp_path / "inner.json"
        _run("config", "init", "cell-inner", str(path))
        result = _run("config", "show", str(path))
        assert result.exit_code == 0, result.output
        assert "✓ Valid cell-inner experiment 'laminate_inner'" in result.output

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"kind": "tabulate"}')
        result = _run("config", "show", str(path))
        assert result.exit_code == 2
        assert '"error": "config"' in result.output


class TestRun:
    def test_nfunction_check_experiment(self, tmp_path):
        config = tmp_path / "check.json"
        config.write_text('{"kind": "nfunction-check", "name": "sq", "nfunction": "power:2"}')
        out_dir = tmp_path / "out"
        result = _run("--out-dir", str(out_dir), "run", str(config))
        assert result.exit_code == 0, result.output
        assert "✓ " in result.output
        assert (out_dir / "sq_nfunction.json").exists()
        assert (out_dir / "sq_run.json").exists()

    def test_missing_config(self, tmp_path):
        result = _run("run", str(tmp_path / "missing.json"))
        assert result.exit_code == 12
        assert '"error": "io"' in result.output
