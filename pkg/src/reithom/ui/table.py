"""Terminal tables for reports, rendered with rich."""

from dataclasses import dataclass
from typing import Any, Literal, Sequence

from pydantic import BaseModel
from rich.console import Console
from rich.table import Table as RichTable

Justify = Literal["left", "center", "right"]


def fmt_value(value: Any) -> str:
    """Short human form of a report cell; floats get six significant digits."""
    if value is None:
        return "—"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


@dataclass
class TableColumn:
    name: str
    style: str | None = None
    justify: Justify = "left"
    no_wrap: bool = False


def _infer_column(name: str, sample: Any, key: bool) -> TableColumn:
    numeric = isinstance(sample, (int, float)) and not isinstance(sample, bool)
    return TableColumn(
        name,
        style="bold cyan" if key else None,
        justify="right" if numeric else "left",
        no_wrap=key,
    )


class Table:
    """Report table for CLI output.

    Example usage:
        Table.from_models("Γ-study", study.rows()).render()

    or, for key/value summaries:
        table = Table("run", [TableColumn("value"), TableColumn("result", justify="right")])
        table.add_row(["f_hom", "0.25"])
        table.render()
    """

    def __init__(self, title: str | None = None, columns: list[TableColumn] | None = None):
        self.title = title
        self.columns = columns or []
        self.rows: list[tuple[list[str], str | None]] = []

    @classmethod
    def from_models(
        cls, title: str | None, models: Sequence[BaseModel], fields: list[str] | None = None
    ) -> "Table":
        """One column per model field, one row per model; ``converged=False`` rows in red.

        The first field is the key column; numeric fields are right-aligned.
        """
        dumped = [m.model_dump() for m in models]
        if fields is None:
            fields = list(type(models[0]).model_fields) if models else []
        sample = dumped[0] if dumped else {}
        table = cls(title, [_infer_column(f, sample.get(f), i == 0) for i, f in enumerate(fields)])
        for data in dumped:
            style = "red" if data.get("converged") is False else None
            table.add_row([fmt_value(data.get(f)) for f in fields], style=style)
        return table

    def add_row(self, values: Sequence[Any], style: str | None = None) -> None:
        self.rows.append(([str(v) for v in values], style))

    def _build_rich_table(self) -> RichTable:
        table = RichTable(title=self.title)
        for col in self.columns:
            table.add_column(col.name, style=col.style, justify=col.justify, no_wrap=col.no_wrap)
        for values, style in self.rows:
            table.add_row(*values, style=style)
        return table

    def render(self, console: Console | None = None) -> None:
        (console or Console()).print(self._build_rich_table())

    def to_string(self, width: int = 120) -> str:
        """The rendered table as plain text."""
        console = Console(width=width)
        with console.capture() as capture:
            self.render(console)
        return capture.get()
