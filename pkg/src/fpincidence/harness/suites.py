"""The standard seeded bound-ratio suite and its baseline file.

Cartesian point sets A x B with |A| = |B| = N against the nondegenerate
conics a x^2 + xy + b y^2 + d x + c y + e with coefficients from N-sets,
so |C| is about N^5 = |P|^{5/2}.  The recorded ratio is measured
incidences over the constant-free conic-small bound.
"""

from __future__ import annotations

import csv
import io
from decimal import Decimal
from pathlib import Path

from .config import ExperimentConfig
from .report import fmt_decimal
from .runner import run

SUITE_PRIMES = (101, 211, 401)
SUITE_SIZES = (4, 6, 8)
SUITE_SEED = 20240601
SUITE_TRIALS = 2
BASELINE_COLUMNS = ["prime", "size_a", "trial", "points", "curves", "measured", "bound", "ratio"]


def ratio_suite_configs() -> list[ExperimentConfig]:
    return [ExperimentConfig(prime=p, generator="cartesian", size_a=SUITE_SIZES, family="cartesian-conics",
                             seed=SUITE_SEED, trials=SUITE_TRIALS, bounds=("conic-small",))
            for p in SUITE_PRIMES]


def ratio_suite_rows(threads: int = 1) -> list[dict]:
    out = []
    for cfg in ratio_suite_configs():
        for row in run(cfg, threads=threads):
            b = row.bounds[0]
            out.append({"prime": cfg.prime, "size_a": int(row.instance.split("A=")[1].split()[0]),
                        "trial": row.trial, "points": row.n_points, "curves": row.n_curves,
                        "measured": row.measured, "bound": b.value, "ratio": b.ratio})
    return out


def baseline_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, BASELINE_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (fmt_decimal(v) if isinstance(v, Decimal) else v) for k, v in r.items()})
    return buf.getvalue()


def read_baseline(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "-"
    text = baseline_csv(ratio_suite_rows())
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)
