"""CSV / JSON serialization of sweep reports."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import fields
from pathlib import Path
from typing import List, Tuple, Union

from ..errors import InvalidInputError
from .sweep import SweepReport, SweepRow

ROW_COLUMNS = [f.name for f in fields(SweepRow)]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def report_to_json(report: SweepReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def report_to_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_COLUMNS)
    for row in report.rows:
        writer.writerow([_fmt(getattr(row, name)) for name in ROW_COLUMNS])
    for name, value in report.slopes.items():
        buf.write(f"# {name}={_fmt(value)}\n")
    for name, value in report.predicted.items():
        buf.write(f"# {name}={_fmt(value)}\n")
    meta = report.metadata
    for name in ("seed", "n", "truth_kind", "tail_ok", "tail_norm_tau"):
        if name in meta:
            buf.write(f"# {name}={_fmt(meta[name])}\n")
    buf.write("# params=" + json.dumps(meta.get("params")) + "\n")
    if report.wall_time is not None:
        buf.write(f"# wall_time={report.wall_time:.3f}\n")
    return buf.getvalue()


def emit_report(report: SweepReport, fmt: str, path: Union[str, Path, None]) -> str:
    """Render ``report`` as ``csv`` or ``json``; write to ``path`` unless None.

    Returns the rendered text. The JSON form omits wall time, so it is a pure
    function of the sweep configuration.
    """
    if fmt == "json":
        text = report_to_json(report)
    elif fmt == "csv":
        text = report_to_csv(report)
    else:
        raise InvalidInputError(f"unknown report format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def load_report_json(path: Union[str, Path]) -> SweepReport:
    return SweepReport.from_dict(json.loads(Path(path).read_text()))


def read_report_csv(path: Union[str, Path]) -> Tuple[List[dict], dict]:
    """Parse an emitted CSV into typed rows and the trailing ``# key=value`` lines."""
    data_lines, comments = [], {}
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            comments[key] = value
        else:
            data_lines.append(line)
    reader = csv.DictReader(data_lines)
    rows = [{k: (float(v) if v != "" else None) for k, v in rec.items()} for rec in reader]
    return rows, comments
