"""CSV results and per-(protocol, metric) plot series."""

from __future__ import annotations

import csv
import os
from pathlib import Path

from .runner import METRICS, RunRow, cell_stats

CSV_COLUMNS = ("protocol", "sources", "seed", "pdf", "avg_delay_s", "nrl", "originated", "delivered", "control_tx")


def _fmt(value) -> str:
    # absent metrics are empty fields, never NaN text
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def _opt_float(text: str):
    return float(text) if text != "" else None


def write_csv(rows, path) -> Path:
    if not rows:
        raise ValueError("no results to write")
    path = Path(path)
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for r in rows:
                writer.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    except OSError as exc:
        raise OSError(f"{path}: {exc}") from exc
    return path


def read_csv(path) -> list[RunRow]:
    with open(path, encoding="ascii", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            RunRow(rec["protocol"], int(rec["sources"]), int(rec["seed"]), _opt_float(rec["pdf"]),
                   _opt_float(rec["avg_delay_s"]), _opt_float(rec["nrl"]), int(rec["originated"]),
                   int(rec["delivered"]), int(rec["control_tx"]))
            for rec in reader
        ]


def write_plotdata(rows, directory) -> list[Path]:
    """One ``<protocol>_<metric>.dat`` file per series: ``sources seed_mean`` per line."""
    if not rows:
        raise ValueError("no results to write")
    directory = Path(directory)
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as exc:
        raise OSError(f"{directory}: {exc}") from exc
    series: dict[tuple, list] = {}
    for cell in sorted(cell_stats(list(rows)), key=lambda c: (c.protocol, c.sources)):
        for metric in METRICS:
            y = cell.mean[metric]
            if y == y:  # skip cells where the metric was absent in every seed
                series.setdefault((cell.protocol, metric), []).append((cell.sources, y))
    written = []
    for (protocol, metric), points in sorted(series.items()):
        path = directory / f"{protocol}_{metric}.dat"
        try:
            with open(path, "w", encoding="ascii", newline="\n") as fh:
                fh.write(f"# {protocol} {metric}: sources seed-mean\n")
                for x, y in points:
                    fh.write(f"{x} {y!r}\n")
        except OSError as exc:
            raise OSError(f"{path}: {exc}") from exc
        written.append(path)
    return written


def read_plotdata(path) -> list[tuple]:
    points = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            x, y = line.split()
            points.append((int(x), float(y)))
    return points


def emit(rows, fmt: str, path) -> list[Path]:
    if fmt == "csv":
        return [write_csv(rows, path)]
    if fmt == "plotdata":
        return write_plotdata(rows, path)
    raise ValueError(f"unknown format {fmt!r}")
