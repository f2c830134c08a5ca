"""Unit tests for experiment configs, report writers and the experiment runner."""

import json

import pytest

from reithom.errors import ConfigError, DataError, ReportIOError
from reithom.experiment.models import CellRow, RunSummary, dump_config, load_config, parse_config
from reithom.experiment.report import emit_report, format_cell, read_json, write_csv
from reithom.experiment.runner import run

from .conftest import make_options

# ---------------------------------------------------------------------------
# Configs
# ---------------------------------------------------------------------------


class TestParseConfig:
    """Discriminated experiment configs."""

    def test_defaults_are_filled(self):
        config = parse_config('{"kind": "nfunction-check", "nfunction": "exp"}')
        assert config.name == "experiment"
        assert config.samples == 64
        assert config.seed is None

    def test_epsilon_ranges_are_expanded(self):
        config = parse_config(
            '{"kind": "twoscale", "sequence": "cos_fast", "epsilons": "2^-2..2^-4"}'
        )
        assert config.epsilons == [0.25, 0.125, 0.0625]
        assert config.tests == ["one"]

    def test_epsilon_lists_are_kept(self):
        config = parse_config(
            '{"kind": "corrector", "triple": "macro", "test": "one", "epsilons": [0.5, 0.25]}'
        )
        assert config.epsilons == [0.5, 0.25]

    @pytest.mark.parametrize(
        "text",
        [
            '{"kind": "tabulate"}',
            '{"kind": "nfunction-check", "nfunction": "exp", "samples": 8}',
            '{"kind": "twoscale", "sequence": "cos_fast", "epsilons": "2^-2..x"}',
            '{"kind": "cell-inner", "xi": [1.0]}',
            "not json",
        ],
    )
    def test_invalid_configs(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_dump_fills_every_field(self):
        config = parse_config('{"kind": "nfunction-check", "nfunction": "power:3"}')
        data = json.loads(dump_config(config))
        assert data["t_min"] == 0.01
        assert parse_config(dump_config(config)) == config

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ReportIOError):
            load_config(tmp_path / "missing.json")


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _row(**overrides) -> CellRow:
    data = dict(level="inner", energy=0.1, iterations=3, grad_norm=1e-9, converged=True)
    return CellRow(**{**data, **overrides})


class TestReports:
    def test_format_cell(self):
        assert format_cell(None) == ""
        assert format_cell(True) == "true"
        assert format_cell(0.1) == "0.10000000000000001"
        assert format_cell(3) == "3"

    def test_csv_rows(self, tmp_path):
        path = write_csv(tmp_path / "rows.csv", [_row(), _row(converged=False)])
        lines = path.read_text().splitlines()
        assert lines[0] == "level,y,energy,iterations,grad_norm,converged,stop_reason"
        assert lines[1] == "inner,,0.10000000000000001,3,1.0000000000000001e-09,true,"
        assert lines[2].endswith(",false,")

    def test_empty_csv_needs_a_row_model(self, tmp_path):
        path = write_csv(tmp_path / "empty.csv", [], CellRow)
        assert path.read_text() == "level,y,energy,iterations,grad_norm,converged,stop_reason\n"
        with pytest.raises(DataError):
            write_csv(tmp_path / "bad.csv", [])

    def test_json_report(self, tmp_path):
        summary = RunSummary(name="a", kind="corrector", seed=1, values={"target": 0.5})
        path = emit_report(summary, "json", tmp_path / "a.json")
        assert read_json(path, RunSummary) == summary

    def test_json_report_is_one_model(self, tmp_path):
        with pytest.raises(DataError):
            emit_report([_row()], "json", tmp_path / "rows.json")


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


class TestRun:
    """Experiments run end to end into a temporary directory."""

    def test_nfunction_check(self, tmp_path):
        config = parse_config('{"kind": "nfunction-check", "name": "e", "nfunction": "exp"}')
        summary = run(config, make_options(tmp_path))
        assert summary.values["delta2"] == 0.0
        assert (tmp_path / "e_nfunction.json").exists()
        assert (tmp_path / "e_run.json").exists()
        assert summary.files[-1] == str(tmp_path / "e_run.json")

    def test_cell_inner(self, tmp_path):
        config = parse_config(
            json.dumps(
                {
                    "kind": "cell-inner",
                    "name": "lam",
                    "integrand": {"name": "quadratic_laminate"},
                    "xi": [1.0],
                    "resolution": 64,
                }
            )
        )
        summary = run(config, make_options(tmp_path))
        assert summary.values["f_hom"] == pytest.approx(0.25, rel=1e-7)
        assert summary.flagged == []
        lines = (tmp_path / "lam_inner.csv").read_text().splitlines()
        assert lines[1].startswith("inner,0.0,")

    def test_twoscale(self, tmp_path):
        config = parse_config(
            json.dumps(
                {
                    "kind": "twoscale",
                    "name": "cf",
                    "sequence": "cos_fast",
                    "tests": ["one", "cos_z"],
                    "epsilons": "2^-2..2^-3",
                }
            )
        )
        summary = run(config, make_options(tmp_path))
        assert summary.values["limit_cos_z"] == pytest.approx(0.5, abs=1e-12)
        assert summary.values["limit_one"] == pytest.approx(0.0, abs=1e-12)
        assert (tmp_path / "cf_pair_cos_z.csv").exists()

    def test_config_seed_overrides_the_global_seed(self, tmp_path):
        config = parse_config(
            '{"kind": "corrector", "seed": 5, "triple": "macro", "test": "one",'
            ' "epsilons": "2^-2..2^-3"}'
        )
        summary = run(config, make_options(tmp_path, seed=1))
        assert summary.seed == 5
        assert summary.flagged == []
        assert summary.values["target"] == pytest.approx(1.0, abs=1e-6)

    def test_outer_without_table_or_lattice(self, tmp_path):
        config = parse_config(
            '{"kind": "cell-outer", "integrand": {"name": "quadratic_laminate"}, "xi": [1.0]}'
        )
        with pytest.raises(ConfigError):
            run(config, make_options(tmp_path))
