"""File formats: Pmf JSON objects, ndjson collections, bench CSVs."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

from .harness import ACCURACY_CSV_HEADER, SPEED_CSV_HEADER, BenchRecord
from .pmf import Pmf


def read_pmf(path) -> Pmf:
    with open(path) as fh:
        return Pmf.from_dict(json.load(fh))


def write_pmf(pmf: Pmf, path) -> None:
    with open(path, "w") as fh:
        json.dump(pmf.to_dict(), fh)
        fh.write("\n")


def read_pmf_ndjson(path) -> list[Pmf]:
    pmfs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                pmfs.append(Pmf.from_dict(json.loads(line)))
    return pmfs


def write_pmf_ndjson(pmfs: Iterable[Pmf], path) -> None:
    with open(path, "w") as fh:
        for pmf in pmfs:
            fh.write(json.dumps(pmf.to_dict()))
            fh.write("\n")


def write_speed_csv(records: Sequence[BenchRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SPEED_CSV_HEADER)
        for rec in records:
            writer.writerow([rec.k, rec.method, rec.replicate, repr(rec.wall_seconds)])


def write_accuracy_csv(rows: Iterable[tuple], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ACCURACY_CSV_HEADER)
        for k, p, index, exact_value, err in rows:
            writer.writerow([k, f"{p:g}", index, repr(float(exact_value)),
                             repr(float(err))])


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
