import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from config import APP_NAME, VERSION
from models.errors import ConfigurationError


FORMATS = ("csv", "json")


def format_value(value: Any) -> str:
    """17 significant digits for floats, lower-case booleans, empty for None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


@dataclass
class ResultTable:
    """Named columns and rows for one command, rendered as CSV or JSON without timestamps."""

    command: str
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ConfigurationError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def column(self, name: str) -> list[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        buffer.write(f"# {APP_NAME} {VERSION} {self.command}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(v) for v in row])
        return buffer.getvalue()

    def to_json(self) -> str:
        payload = {
            "tool": APP_NAME,
            "version": VERSION,
            "command": self.command,
            "columns": self.columns,
            "rows": [[_json_value(v) for v in row] for row in self.rows],
        }
        return json.dumps(payload, indent=2) + "\n"

    def render(self, fmt: str = "csv") -> str:
        if fmt not in FORMATS:
            raise ConfigurationError(f"unknown output format {fmt!r}")
        return self.to_csv() if fmt == "csv" else self.to_json()

    def write(self, out: Optional[str] = None, fmt: str = "csv") -> None:
        text = self.render(fmt)
        if out is None:
            sys.stdout.write(text)
            return
        Path(out).write_text(text, encoding="utf-8")
