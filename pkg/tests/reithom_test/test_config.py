"""Unit tests for user defaults, global option precedence and example experiments."""

import os
from pathlib import Path
from unittest.mock import patch

import click
import pytest

from reithom.config import Defaults, example_config, load_defaults, resolve_options
from reithom.errors import ConfigError
from reithom.experiment.models import KINDS, dump_config, parse_config
from reithom.utils.cli import (
    parse_eps_list,
    parse_float,
    parse_lattice,
    parse_params,
)


class TestLoadDefaults:
    def test_reads_defaults_section(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text('[defaults]\njobs = 2\nseed = 7\nout_dir = "reports"\n')
        defaults = load_defaults(config_file)
        assert defaults.jobs == 2
        assert defaults.seed == 7
        assert defaults.out_dir == Path("reports")

    def test_missing_file_gives_empty_defaults(self, tmp_path):
        assert load_defaults(tmp_path / "none.toml") == Defaults()

    def test_invalid_values_are_ignored(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("[defaults]\njobs = 0\n")
        assert load_defaults(config_file) == Defaults()

    def test_malformed_toml_is_ignored(self, tmp_path):
        config_file = tmp_path / "config.toml"
        config_file.write_text("[defaults\n")
        assert load_defaults(config_file) == Defaults()


class TestResolveOptions:
    """Precedence: CLI flag > environment > TOML defaults > built-in."""

    def test_builtin_values(self):
        with patch.dict(os.environ, {}, clear=True):
            options = resolve_options(defaults=Defaults())
        assert options.jobs == 1
        assert options.seed == 0
        assert options.out_dir == Path(".")
        assert not options.strict

    def test_toml_defaults_apply(self):
        with patch.dict(os.environ, {}, clear=True):
            options = resolve_options(defaults=Defaults(jobs=2, out_dir=Path("out")))
        assert options.jobs == 2
        assert options.out_dir == Path("out")

    def test_env_beats_toml(self):
        with patch.dict(os.environ, {"REITHOM_JOBS": "3", "REITHOM_SEED": "11"}, clear=True):
            options = resolve_options(defaults=Defaults(jobs=2, seed=4))
        assert options.jobs == 3
        assert options.seed == 11

    def test_flag_beats_env(self):
        with patch.dict(os.environ, {"REITHOM_JOBS": "3"}, clear=True):
            options = resolve_options(jobs=4, strict=True, defaults=Defaults(jobs=2))
        assert options.jobs == 4
        assert options.strict

    def test_non_integer_env(self):
        with patch.dict(os.environ, {"REITHOM_JOBS": "many"}, clear=True):
            with pytest.raises(ConfigError, match="REITHOM_JOBS"):
                resolve_options(defaults=Defaults())

    def test_invalid_flag_value(self):
        with patch.dict(os.environ, {}, clear=True):
            with pytest.raises(ConfigError):
                resolve_options(jobs=0, defaults=Defaults())


class TestExampleConfig:
    @pytest.mark.parametrize("kind", KINDS)
    def test_every_kind_has_a_valid_example(self, kind):
        config = example_config(kind)
        assert config.kind == kind
        assert parse_config(dump_config(config)) == config

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            example_config("tabulate")


# ---------------------------------------------------------------------------
# Command-line value parsers
# ---------------------------------------------------------------------------


class TestParsers:
    def test_parse_float(self):
        assert parse_float("2^-3") == 0.125
        assert parse_float("1.5") == 1.5
        with pytest.raises(click.BadParameter):
            parse_float("two")

    def test_parse_eps_list(self):
        assert parse_eps_list("2^-2..2^-4") == [0.25, 0.125, 0.0625]
        assert parse_eps_list("0.5,2^-2") == [0.5, 0.25]
        with pytest.raises(click.BadParameter):
            parse_eps_list("0.5..0.25")

    def test_parse_lattice(self):
        axes = parse_lattice("-2:2:9;0:1:3")
        assert axes == [{"lo": -2.0, "hi": 2.0, "count": 9}, {"lo": 0.0, "hi": 1.0, "count": 3}]
        with pytest.raises(click.BadParameter):
            parse_lattice("-2:2")
        with pytest.raises(click.BadParameter):
            parse_lattice("-2:2:many")

    def test_parse_params(self):
        assert parse_params(("p=3", "nf=plog:2,1")) == {"p": 3.0, "nf": "plog:2,1"}
        with pytest.raises(click.BadParameter):
            parse_params(("p",))
