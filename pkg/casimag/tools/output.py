"""CSV and JSON table writers. No timestamps, so reruns are byte-identical."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class Column:
    name: str
    unit: str = ""

    @property
    def header(self) -> str:
        return f"{self.name}[{self.unit}]" if self.unit else self.name


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def render_csv(columns: Sequence[Column], rows: Sequence[Sequence], metadata: dict) -> str:
    buffer = io.StringIO()
    for key, value in metadata.items():
        if isinstance(value, dict):
            for sub_key, sub_value in value.items():
                buffer.write(f"# {key}.{sub_key}: {_cell(sub_value)}\n")
        else:
            buffer.write(f"# {key}: {_cell(value)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([c.header for c in columns])
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def render_json(columns: Sequence[Column], rows: Sequence[Sequence], metadata: dict,
                config: Optional[dict] = None) -> str:
    document = {
        "metadata": metadata,
        "config": config,
        "columns": [c.header for c in columns],
        "rows": [{c.header: _json_value(v) for c, v in zip(columns, row)} for row in rows],
    }
    return json.dumps(document, indent=2, default=str) + "\n"


def write_table(columns: Sequence[Column], rows: Sequence[Sequence], metadata: dict,
                fmt: str = "csv", path: Optional[str] = None, config: Optional[dict] = None) -> None:
    text = render_json(columns, rows, metadata, config) if fmt == "json" else render_csv(columns, rows, metadata)
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
