"""Progress reporting for lattice and epsilon sweeps, using rich."""

from typing import Any

from rich.console import Console
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)


def _sweep_columns() -> tuple:
    return (
        TextColumn("[bold blue]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TextColumn("solves"),
        TimeElapsedColumn(),
        TimeRemainingColumn(),
    )


class LoadingBar:
    """A rich progress bar fed by ``on_progress(done, total)`` callbacks.

    Example usage:
        with LoadingBar("Tabulating f_hom", total=9) as bar:
            table = tabulate(ig, lattice, 256, 256, on_progress=bar.on_progress)

    Drawn on stderr, and only when stderr is a terminal.
    """

    def __init__(self, description: str, total: int, console: Console | None = None):
        self.description = description
        self.total = total
        console = console or Console(stderr=True)
        self.progress = Progress(
            *_sweep_columns(), console=console, disable=not console.is_terminal
        )
        self.task_id: TaskID | None = None

    def on_progress(self, done: int, total: int) -> None:
        """Set the absolute count; ``total`` grows when a table is extended."""
        if self.task_id is None:
            return
        self.total = total
        self.progress.update(self.task_id, completed=done, total=total)

    def __enter__(self) -> "LoadingBar":
        self.progress.start()
        self.task_id = self.progress.add_task(self.description, total=self.total)
        return self

    def __exit__(self, *args: Any) -> None:
        self.progress.stop()
