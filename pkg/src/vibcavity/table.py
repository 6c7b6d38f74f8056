"""Result tables and their CSV form.

Files carry ``#``-prefixed metadata lines, one header row and CRLF-terminated
data rows with 17 significant digits, so a write/read round trip is exact
and identical runs give identical bytes.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import IoError


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    data: np.ndarray
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float).reshape(-1, len(self.columns))
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "columns", tuple(self.columns))
        if "t" in self.columns and data.shape[0] > 1:
            t = data[:, self.columns.index("t")]
            if np.any(np.diff(t) <= 0):
                raise ValueError("time column must increase strictly")

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def __len__(self):
        return self.data.shape[0]


def _fmt(x: float) -> str:
    return "%.17g" % x


def format_table(table: ResultTable) -> str:
    buf = io.StringIO(newline="")
    for key, value in table.metadata.items():
        buf.write(f"# {key}: {value}\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.columns)
    for row in table.data:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def write_table(table: ResultTable, path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_table(table))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_table(path) -> ResultTable:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    lines = text.split("\r\n")
    metadata = {}
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        key, _, value = lines[i][1:].strip().partition(": ")
        metadata[key] = value
        i += 1
    rows = list(csv.reader(line for line in lines[i:] if line))
    columns, body = tuple(rows[0]), rows[1:]
    data = np.array([[float(x) for x in r] for r in body]).reshape(-1, len(columns))
    return ResultTable(columns, data, metadata)
