"""Tabular reports and their CSV / JSON encodings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Any

from ..errors import UsageError

TIMING_COLUMNS = ("wall_time_s",)
_SIX = Decimal("0.000001")


@dataclass
class Report:
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)

    def without_timing(self) -> "Report":
        cols = [c for c in self.columns if c not in TIMING_COLUMNS]
        return Report(cols, [{k: r.get(k) for k in cols} for r in self.rows])


def fmt_decimal(v: Decimal) -> Decimal:
    if not v.is_finite():
        return v
    return v.quantize(_SIX, rounding=ROUND_HALF_EVEN)


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Decimal):
        return str(fmt_decimal(v))
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, Decimal):
        v = fmt_decimal(v)
        return float(v) if v.is_finite() else str(v)
    if isinstance(v, float):
        return round(v, 6)
    if isinstance(v, tuple):
        return list(v)
    return v


def emit(report: Report, fmt: str = "csv", timing: bool = True) -> bytes:
    """Encode a report: CSV with a header row and '\\n' line ends, or a JSON array of objects."""
    if not timing:
        report = report.without_timing()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow([_csv_cell(row.get(c)) for c in report.columns])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        data = [{c: _json_value(row.get(c)) for c in report.columns} for row in report.rows]
        return (json.dumps(data, indent=1, allow_nan=False) + "\n").encode("utf-8")
    raise UsageError(f"format must be csv or json, got {fmt!r}")


def parse_csv(data: bytes) -> tuple[list[str], list[dict[str, str]]]:
    reader = csv.reader(io.StringIO(data.decode("utf-8"), newline=""))
    rows = list(reader)
    if not rows:
        return [], []
    header = rows[0]
    return header, [dict(zip(header, r)) for r in rows[1:]]


def csv_cells(report: Report, timing: bool = True) -> list[dict[str, str]]:
    """The string cells a CSV emission of ``report`` should parse back to."""
    if not timing:
        report = report.without_timing()
    return [{c: _csv_cell(r.get(c)) for c in report.columns} for r in report.rows]
