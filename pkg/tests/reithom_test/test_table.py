"""Unit tests for the Table UI component."""

from reithom.experiment.models import CellRow
from reithom.ui.table import Table, TableColumn, fmt_value


def test_table_basic_rendering():
    """Test basic table rendering."""
    table = Table("f_hom", [TableColumn("xi"), TableColumn("energy")])
    table.add_row(["1", "0.25"])
    table.add_row(["2", "1"])

    output = table.to_string()

    assert "f_hom" in output
    assert "energy" in output
    assert "0.25" in output


def test_table_empty():
    """Test table with no rows."""
    table = Table("Empty", [TableColumn("epsilon"), TableColumn("residual")])

    output = table.to_string()

    assert "Empty" in output
    assert "residual" in output


def test_fmt_value():
    assert fmt_value(None) == "—"
    assert fmt_value(False) == "no"
    assert fmt_value(0.123456789) == "0.123457"
    assert fmt_value(7) == "7"


def test_table_from_models():
    """One column per field; unconverged rows are styled but still shown."""
    rows = [
        CellRow(level="inner", energy=0.25, iterations=12, grad_norm=1e-9, converged=True),
        CellRow(level="outer", energy=0.5, iterations=20000, grad_norm=1e-3, converged=False),
    ]
    table = Table.from_models("Cells", rows)

    assert [c.name for c in table.columns][:3] == ["level", "y", "energy"]
    assert table.columns[2].justify == "right"
    assert table.rows[1][1] == "red"
    assert table.rows[0][1] is None

    output = table.to_string()
    assert "outer" in output
    assert "20000" in output
