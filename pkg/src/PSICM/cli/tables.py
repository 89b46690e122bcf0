"""CSV tables written by the command-line front end."""

import csv
import io
import logging
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Any, Dict, Iterator, List, Mapping, Optional, Sequence

logger = logging.getLogger(__name__)


def format_cell(value: Any) -> str:
    """
    Render one CSV cell.

    Floats use 17 significant digits so every binary64 value round-trips;
    booleans are lower-case; None is an empty cell.
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return str(value)


class CsvTable:
    """
    Header-first CSV writer with a fixed column order.

    Args:
        stream: Text stream to write to.
        columns: Column names, written as the header row.
    """

    def __init__(self, stream: IO[str], columns: Sequence[str]):
        self.columns: List[str] = list(columns)
        self.rows: int = 0
        self._writer: csv.DictWriter = csv.DictWriter(stream, self.columns, lineterminator="\n")
        self._writer.writeheader()

    def write(self, row: Mapping[str, Any]) -> None:
        self._writer.writerow({name: format_cell(row.get(name)) for name in self.columns})
        self.rows += 1

    def write_all(self, rows: Sequence[Mapping[str, Any]]) -> None:
        for row in rows:
            self.write(row)


@contextmanager
def open_table(columns: Sequence[str], out: Optional[Path] = None) -> Iterator[CsvTable]:
    """
    Open a CSV table on a file, or on standard output when out is None.

    The file is written only once the block completes, so a failing command
    never leaves a truncated table behind.
    """
    buffer: io.StringIO = io.StringIO()
    table: CsvTable = CsvTable(buffer, columns)
    yield table
    if out is None:
        sys.stdout.write(buffer.getvalue())
        sys.stdout.flush()
    else:
        Path(out).write_text(buffer.getvalue(), encoding="utf-8", newline="")
        logger.info(f"Wrote {table.rows} rows to {out}")


def render_rows(columns: Sequence[str], rows: Sequence[Dict[str, Any]]) -> str:
    """The CSV text of a whole table, header included."""
    buffer: io.StringIO = io.StringIO()
    CsvTable(buffer, columns).write_all(rows)
    return buffer.getvalue()
