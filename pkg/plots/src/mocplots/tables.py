"""Versioned-CSV loading and schema linting.

The interchange format is one comment line `# mocsim-csv v1 <schema>`,
a column-name row, then data rows.  Each figure kind declares the schema
and the columns it consumes; anything else in the file is ignored.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

SCHEMA_VERSION = "v1"


class SchemaError(ValueError):
    """Input CSV does not match the declared schema."""


@dataclass
class Table:
    schema: str
    columns: list[str]
    rows: list[list[str]]

    def column(self, name: str) -> list[str]:
        if name not in self.columns:
            raise SchemaError(f"missing column {name!r} in {self.schema} table")
        k = self.columns.index(name)
        return [row[k] for row in self.rows]

    def floats(self, name: str) -> list[float]:
        # '' cells (absent optional values) become NaN
        return [float(v) if v != "" else math.nan for v in self.column(name)]


def read_table(path: str) -> Table:
    with open(path, newline="") as fh:
        header = fh.readline().strip().split()
        if header[:2] != ["#", "mocsim-csv"] or len(header) != 4:
            raise SchemaError(f"{path}: missing 'mocsim-csv' header line")
        if header[2] != SCHEMA_VERSION:
            raise SchemaError(f"{path}: schema version {header[2]}, expected {SCHEMA_VERSION}")
        reader = csv.reader(fh)
        columns = next(reader, [])
        return Table(header[3], columns, [row for row in reader])


def load(paths: list[str], schema: str, required: list[str]) -> Table:
    """Read and concatenate tables, checking schema name and columns."""
    merged: Table | None = None
    for path in paths:
        table = read_table(path)
        if table.schema != schema:
            raise SchemaError(f"{path}: schema {table.schema!r}, expected {schema!r}")
        for col in required:
            if col not in table.columns:
                raise SchemaError(f"{path}: missing column {col!r}")
        if merged is None:
            merged = table
        else:
            if table.columns != merged.columns:
                raise SchemaError(f"{path}: column order differs from first input")
            merged.rows.extend(table.rows)
    assert merged is not None
    return merged
