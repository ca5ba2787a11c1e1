"""Run experiment configs: measure incidences or rich curves and compare with bounds."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal

from ..bounds import BoundId, BoundParams, applicability, evaluate
from ..errors import DomainError, UsageError
from ..incidence import curve_richness, profile_from_counts
from .config import ExperimentConfig
from .generators import Instance, generate, instances
from .report import Report


@dataclass(frozen=True)
class BoundEntry:
    name: str
    value: Decimal | None
    applicable: bool
    violated: tuple[str, ...]
    ratio: Decimal | None  # measured / value, only when applicable


@dataclass(frozen=True)
class ReportRow:
    trial: int
    instance: str
    prime: int
    n_points: int
    n_curves: int
    measure: str
    k: int | None
    measured: int
    histogram: str
    dyadic_identity: bool
    bounds: tuple[BoundEntry, ...]
    wall_time: float

    def record(self) -> dict:
        rec = {
            "trial": self.trial, "instance": self.instance, "prime": self.prime,
            "points": self.n_points, "curves": self.n_curves, "measure": self.measure,
            "k": self.k, "measured": self.measured, "histogram": self.histogram,
            "dyadic_identity": self.dyadic_identity,
        }
        for b in self.bounds:
            rec[f"{b.name}.bound"] = b.value
            rec[f"{b.name}.applicable"] = b.applicable
            rec[f"{b.name}.violated"] = "; ".join(b.violated)
            rec[f"{b.name}.ratio"] = b.ratio
        rec["wall_time_s"] = round(self.wall_time, 6)
        return rec


BASE_COLUMNS = ["trial", "instance", "prime", "points", "curves", "measure", "k", "measured",
                "histogram", "dyadic_identity"]


def columns_for(bound_names: list[str]) -> list[str]:
    cols = list(BASE_COLUMNS)
    for name in bound_names:
        cols += [f"{name}.bound", f"{name}.applicable", f"{name}.violated", f"{name}.ratio"]
    return cols + ["wall_time_s"]


def bound_params(cfg: ExperimentConfig, n_points: int, n_curves: int, meta: dict) -> BoundParams:
    a, b = meta.get("size_a"), meta.get("size_b")
    if a is not None and b is not None and a > b:
        a, b = b, a
    return BoundParams(size_p=n_points, size_c=n_curves, size_a=a, size_b=b, p=cfg.prime, q=cfg.prime,
                       d=cfg.dim if cfg.family in ("spheres", "hyperplanes") else 2, k=cfg.k,
                       circles=cfg.family == "circles")


def compare(bids: list[BoundId], params: BoundParams, measured: int) -> tuple[BoundEntry, ...]:
    out = []
    for bid in bids:
        try:
            value = evaluate(bid, params).total
            ok, violated = applicability(bid, params)
        except (UsageError, DomainError) as e:
            out.append(BoundEntry(bid.value, None, False, (str(e),), None))
            continue
        ratio = Decimal(measured) / value if ok and value > 0 else None
        out.append(BoundEntry(bid.value, value, ok, tuple(violated), ratio))
    return tuple(out)


def histogram_summary(hist: dict[int, int]) -> str:
    return ";".join(f"{k}:{v}" for k, v in sorted(hist.items()))


def run_trial(cfg: ExperimentConfig, inst: Instance, trial: int, measure: str = "incidences",
              engine: str = "fast") -> ReportRow:
    start = time.perf_counter()
    P, C, meta = generate(cfg, trial, inst)
    counts = curve_richness(P, C, engine=engine)
    profile = profile_from_counts(counts)
    dyadic = sum(k * m for k, m in profile.histogram.items()) == profile.total
    if measure == "incidences":
        measured, k = profile.total, None
    elif measure == "rich":
        measured, k = profile.rich_count(cfg.k), cfg.k
    else:
        raise UsageError(f"unknown measure {measure!r}")
    params = bound_params(cfg, len(P), len(C), meta)
    entries = compare(cfg.bound_ids(), params, measured)
    return ReportRow(trial, inst.describe(cfg), cfg.prime, len(P), len(C), measure, k, measured,
                     histogram_summary(profile.histogram), dyadic, entries, time.perf_counter() - start)


def run(cfg: ExperimentConfig, threads: int = 1, measure: str = "incidences", engine: str = "fast") -> list[ReportRow]:
    """One row per (instance, trial), ordered by instance then trial regardless of threads."""
    jobs = [(inst, t) for inst in instances(cfg) for t in range(cfg.trials)]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(lambda j: run_trial(cfg, j[0], j[1], measure, engine), jobs))
    return [run_trial(cfg, inst, t, measure, engine) for inst, t in jobs]


def to_report(cfg: ExperimentConfig, rows: list[ReportRow]) -> Report:
    return Report(columns_for([b.value for b in cfg.bound_ids()]), [r.record() for r in rows])
