"""Unit tests for the LoadingBar UI component."""

import io

from rich.console import Console

from reithom.ui.loading_bar import LoadingBar


def _quiet_console() -> Console:
    return Console(file=io.StringIO(), force_terminal=False)


def test_callback_before_start_is_ignored():
    bar = LoadingBar("Tabulating", total=4, console=_quiet_console())
    bar.on_progress(2, 4)
    assert bar.task_id is None


def test_callback_sets_absolute_progress():
    """Totals may grow while the sweep runs (table extension adds nodes)."""
    with LoadingBar("Tabulating", total=4, console=_quiet_console()) as bar:
        bar.on_progress(3, 4)
        bar.on_progress(5, 8)
        task = bar.progress.tasks[0]
        assert task.completed == 5
        assert task.total == 8
    assert bar.total == 8
