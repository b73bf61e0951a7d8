"""CSV renderer for RunRecords."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable
from pathlib import Path

from boundary_mipt.core.models import RunRecord

CSV_HEADER = ("model", "q", "lx", "ly", "param", "region", "sample", "seed", "value")


def _float(value: float) -> str:
    return format(float(value), ".17g")


def render_csv(records: Iterable[RunRecord]) -> str:
    """Header row then one row per record in key order; floats carry 17 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in sorted(records, key=lambda rec: rec.sort_key):
        writer.writerow(
            [r.model, r.q, r.lx, r.ly, _float(r.param), r.region, r.sample, r.seed, _float(r.value)]
        )
    return buffer.getvalue()


def write_csv(records: Iterable[RunRecord], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(records), encoding="utf-8")
    return path


def read_csv(path: Path) -> list[RunRecord]:
    """Parse a file written by ``write_csv`` back into records."""
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            RunRecord(
                model=row["model"],
                q=int(row["q"]),
                lx=int(row["lx"]),
                ly=int(row["ly"]),
                param=float(row["param"]),
                region=row["region"],
                sample=int(row["sample"]),
                seed=int(row["seed"]),
                value=float(row["value"]),
            )
            for row in reader
        ]
