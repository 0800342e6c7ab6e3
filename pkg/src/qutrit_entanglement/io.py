"""CSV output for sweep results."""

from __future__ import annotations

import io

from .analysis import PointRecord, SweepResult

CSV_COLUMNS = ("J", "K", "Delta", "B", "T", "negativity", "trace_norm", "R", "pt_min_eig")


def _fmt(value) -> str:
    # repr gives the shortest string that round-trips the double
    return "" if value is None else repr(float(value))


def format_row(rec: PointRecord) -> str:
    return ",".join(_fmt(getattr(rec, c)) for c in CSV_COLUMNS)


def sweep_to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for rec in result.records:
        buf.write(format_row(rec) + "\n")
    return buf.getvalue()


def write_sweep_csv(result: SweepResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(sweep_to_csv(result))


def read_sweep_csv(path) -> list[dict[str, float | None]]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        rows = []
        for line in fh:
            cells = line.rstrip("\n").split(",")
            rows.append({k: (float(v) if v else None) for k, v in zip(header, cells)})
    return rows
