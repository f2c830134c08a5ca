"""Experiment configs, the config-driven runner and report writers."""

from reithom.experiment.models import (
    KINDS,
    ExperimentConfig,
    RunSummary,
    dump_config,
    load_config,
    parse_config,
)
from reithom.experiment.report import emit_report, read_json, write_csv, write_json
from reithom.experiment.runner import run

__all__ = [
    "KINDS",
    "ExperimentConfig",
    "RunSummary",
    "dump_config",
    "emit_report",
    "load_config",
    "parse_config",
    "read_json",
    "run",
    "write_csv",
    "write_json",
]
