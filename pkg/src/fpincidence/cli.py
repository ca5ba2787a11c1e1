"""Command line interface: ``fpincidence <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 invariant-suite failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from decimal import Decimal
from pathlib import Path

import numpy as np

from . import applications as apps
from .bounds import CATALOG, BoundId, BoundParams, applicability, evaluate
from .errors import FpIncidenceError, UsageError
from .field import PrimeField
from .harness.config import FAMILIES, GENERATORS, load_config
from .harness.generators import cartesian_points, random_family, random_nondegenerate_conic, random_points, trial_rng
from .harness.report import Report, emit
from .harness.runner import run, to_report
from .incidence import CurveFamily, CurveKind, count_incidences, curve_richness
from .invariants import SUITE, run_suite


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _names(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prime", type=int, help="odd prime p")
    p.add_argument("--seed", type=int, help="64-bit seed")
    p.add_argument("--trials", type=int, help="trials per instance")
    p.add_argument("--config", help="key = value config file (flags override it)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="drop wall-time columns")


def _experiment(p: argparse.ArgumentParser) -> None:
    p.add_argument("--generator", choices=GENERATORS)
    p.add_argument("--points", type=_ints, help="point counts (sweep)")
    p.add_argument("--size-a", type=_ints, help="|A| values for cartesian points (sweep)")
    p.add_argument("--size-b", type=_ints, help="|B| values (default: |A|)")
    p.add_argument("--subgroup", type=_ints, help="subgroup orders for coset points")
    p.add_argument("--curve", type=_ints, help="six conic coefficients for oncurve points")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--curves", type=int, help="number of random curves")
    p.add_argument("--coeff-set", type=int, help="coefficient-set size for cartesian-conics")
    p.add_argument("--dim", type=int, help="dimension for spheres / hyperplanes")
    p.add_argument("--bounds", type=_names, help="bound names to compare, e.g. conic-small,trivial-conic")
    p.add_argument("--engine", choices=("fast", "naive"), default="fast")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fpincidence", description="Incidence experiments over prime fields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("incidence", help="count incidences, histogram and bound comparison")
    _common(p)
    _experiment(p)

    p = sub.add_parser("rich", help="count k-rich curves and compare with rich-curve bounds")
    _common(p)
    _experiment(p)
    p.add_argument("--k", type=int)

    p = sub.add_parser("invariants", help="run the exhaustive small-prime checks")
    p.add_argument("--check", action="append", choices=[n for n, _ in SUITE], help="run only these checks")

    p = sub.add_parser("pinned", help="best pinned algebraic distance set")
    _common(p)
    p.add_argument("--points", type=_ints, default=[60], help="|E| values")
    p.add_argument("--poly", default="sumsquares", help="sumsquares, product or parabola")
    p.add_argument("--any-prime", action="store_true", help="drop the p = 3 mod 4 requirement")

    p = sub.add_parser("image", help="polynomial image f(E) and the sumset E + F")
    _common(p)
    p.add_argument("--points", type=_ints, default=[30], help="|E| values")
    p.add_argument("--points-f", type=int, default=10, help="|F|")
    p.add_argument("--poly", default="sumsquares")

    p = sub.add_parser("distset", help="distance set Delta(E, F) in F_p^d")
    _common(p)
    p.add_argument("--points", type=_ints, default=[30], help="|E| values")
    p.add_argument("--points-f", type=int, help="|F| (default |E|)")
    p.add_argument("--dim", type=int, default=2)

    p = sub.add_parser("beck", help="count nondegenerate conics through >= 5 points")
    _common(p)
    p.add_argument("--points", type=_ints, default=[20], help="|P| values")
    p.add_argument("--generator", choices=("uniform", "cartesian"), default="uniform")

    p = sub.add_parser("bench", help="time the incidence counter on random conics")
    _common(p)
    p.add_argument("--points", type=int, default=10_000)
    p.add_argument("--curves", type=int, default=10_000)
    p.add_argument("--thread-counts", type=_ints, default=[1, 2, 4, 8])

    p = sub.add_parser("bound", help="evaluate one bound from the catalog")
    p.add_argument("name", nargs="?", help="bound name; omit with --list")
    p.add_argument("--list", action="store_true")
    for flag in ("size-p", "size-c", "size-a", "size-b", "size-s", "k", "p", "q", "d", "max-collinear"):
        p.add_argument(f"--{flag}", type=Decimal)
    p.add_argument("--not-circles", action="store_true", help="family is not circles (drops p = 3 mod 4)")
    return parser


def _write(args, report: Report) -> None:
    data = emit(report, args.format, timing=not args.no_timing)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _config(args, **extra):
    keys = ("prime", "seed", "trials", "generator", "points", "size_a", "size_b", "subgroup", "curve",
            "family", "curves", "coeff_set", "dim", "bounds", "k")
    values = {k: getattr(args, k, None) for k in keys}
    values.update(extra)
    return load_config(args.config, **values)


def cmd_experiment(args, measure: str) -> int:
    cfg = _config(args)
    rows = run(cfg, threads=args.threads, measure=measure, engine=args.engine)
    _write(args, to_report(cfg, rows))
    return 0


def cmd_invariants(args) -> int:
    failed = False
    for res in run_suite(args.check):
        status = "PASS" if res.passed else "FAIL"
        print(f"{status}  {res.name}  ({res.checked} checked){'  ' + res.detail if res.detail else ''}")
        for f in res.failures[:10]:
            print(f"      {f}")
        failed |= not res.passed
    return 2 if failed else 0


def _sweep(args, default_prime: int):
    cfg = _config(args, prime=args.prime or default_prime, points=None)
    return cfg, PrimeField(cfg.prime)


def cmd_pinned(args) -> int:
    cfg, F = _sweep(args, 103)
    f = apps.DistancePolynomial.by_name(args.poly)
    cols = ["trial", "prime", "points", "poly", "pin", "size", "ratio", "recount", "violated", "wall_time_s"]
    rows = []
    for inst, n in enumerate(args.points):
        for t in range(cfg.trials):
            start = time.perf_counter()
            E = random_points(trial_rng(cfg.seed, t, inst), F, n)
            res = apps.pinned_distance_best(E, f, require_mod4=not args.any_prime, threads=args.threads)
            recount = len({f([a - b for a, b in zip(res.pin, e)], F.p) for e in E})
            rows.append({"trial": t, "prime": F.p, "points": len(E), "poly": f.kind.value,
                         "pin": " ".join(map(str, res.pin)), "size": res.size, "ratio": res.ratio,
                         "recount": recount == res.size, "violated": "; ".join(res.violated),
                         "wall_time_s": round(time.perf_counter() - start, 6)})
    _write(args, Report(cols, rows))
    return 0


def cmd_image(args) -> int:
    cfg, F = _sweep(args, 31)
    f = apps.DistancePolynomial.by_name(args.poly)
    cols = ["trial", "prime", "points", "points_f", "poly", "image", "sumset", "pruned", "axis_points",
            "bound", "ratio", "violated", "wall_time_s"]
    rows = []
    for inst, n in enumerate(args.points):
        for t in range(cfg.trials):
            start = time.perf_counter()
            rng = trial_rng(cfg.seed, t, inst)
            E, Fs = random_points(rng, F, n), random_points(rng, F, args.points_f)
            res = apps.polynomial_image_check(E, Fs, f)
            rows.append({"trial": t, "prime": F.p, "points": len(E), "points_f": len(Fs), "poly": f.kind.value,
                         "image": len(res.image), "sumset": len(res.sumset), "pruned": len(res.pruned),
                         "axis_points": res.axis_points, "bound": res.bound.total,
                         "ratio": Decimal(len(res.image)) / res.bound.total if res.bound.total else None,
                         "violated": "; ".join(res.violated), "wall_time_s": round(time.perf_counter() - start, 6)})
    _write(args, Report(cols, rows))
    return 0


def cmd_distset(args) -> int:
    cfg, F = _sweep(args, 11)
    d = args.dim
    cols = ["trial", "prime", "dim", "points", "points_f", "distances", "pin", "pin_distances", "bound",
            "ratio", "violated", "wall_time_s"]
    rows = []
    for inst, n in enumerate(args.points):
        for t in range(cfg.trials):
            start = time.perf_counter()
            rng = trial_rng(cfg.seed, t, inst)
            E, Fs = random_points(rng, F, n, d), random_points(rng, F, args.points_f or n, d)
            res = apps.distance_set(E, Fs, d)
            prm = BoundParams(size_p=len(E), size_c=len(Fs), q=F.p, d=d)
            bound = evaluate(BoundId.DistSetLower, prm).total
            _, violated = applicability(BoundId.DistSetLower, prm)
            rows.append({"trial": t, "prime": F.p, "dim": d, "points": len(E), "points_f": len(Fs),
                         "distances": len(res.values), "pin": " ".join(map(str, res.pin or ())),
                         "pin_distances": len(res.pin_values), "bound": bound,
                         "ratio": Decimal(len(res.values)) / bound if bound else None,
                         "violated": "; ".join(violated), "wall_time_s": round(time.perf_counter() - start, 6)})
    _write(args, Report(cols, rows))
    return 0


def cmd_beck(args) -> int:
    cfg, F = _sweep(args, 101)
    cols = ["trial", "prime", "points", "max_collinear", "conics", "gp_five_tuples", "gp_formula",
            "gp_formula_holds", "lower_bound", "ratio", "violated", "wall_time_s"]
    rows = []
    for inst, n in enumerate(args.points):
        for t in range(cfg.trials):
            start = time.perf_counter()
            rng = trial_rng(cfg.seed, t, inst)
            if args.generator == "cartesian":
                side = max(1, round(n ** 0.5))
                P = cartesian_points(rng, F, side, side)[0]
            else:
                P = random_points(rng, F, n)
            rep = apps.beck_conic_count(P, threads=args.threads)
            rows.append({"trial": t, "prime": F.p, "points": len(P), "max_collinear": rep.max_collinear,
                         "conics": rep.conic_count, "gp_five_tuples": rep.gp_five_tuples,
                         "gp_formula": rep.gp_formula, "gp_formula_holds": rep.gp_formula_holds,
                         "lower_bound": rep.lower_bound_value,
                         "ratio": Decimal(rep.conic_count) / rep.lower_bound_value if rep.lower_bound_value else None,
                         "violated": "; ".join(rep.violated), "wall_time_s": round(time.perf_counter() - start, 6)})
    _write(args, Report(cols, rows))
    return 0


def bench_rows(prime: int, n_points: int, n_curves: int, thread_counts: list[int], seed: int = 0) -> list[dict]:
    F = PrimeField(prime)
    rng = trial_rng(seed, 0)
    P = random_points(rng, F, n_points)
    if prime ** 5 - prime ** 2 >= n_curves:
        C = random_family(rng, F, "conics", n_curves)
    else:
        raise UsageError("not enough conics over this field")
    curve_richness(P, CurveFamily(CurveKind.CONICS, F, C.members[:8]))  # compile outside the timings
    rows, base, ref = [], None, None
    for th in thread_counts:
        start = time.perf_counter()
        counts = curve_richness(P, C, threads=th)
        secs = time.perf_counter() - start
        ref = counts if ref is None else ref
        base = secs if base is None else base
        rows.append({"threads": th, "points": len(P), "curves": len(C), "incidences": int(counts.sum()),
                     "wall_time_s": round(secs, 6), "pairs_per_s": round(len(P) * len(C) / secs),
                     "speedup": round(base / secs, 6), "identical": bool(np.array_equal(counts, ref))})
    return rows


def cmd_bench(args) -> int:
    prime = args.prime or 2 ** 31 - 1
    rows = bench_rows(prime, args.points, args.curves, args.thread_counts, args.seed or 0)
    cols = ["threads", "points", "curves", "incidences", "wall_time_s", "pairs_per_s", "speedup", "identical"]
    _write(args, Report(cols, rows))
    return 0


def cmd_bound(args) -> int:
    if args.list or not args.name:
        for bid in BoundId:
            d = CATALOG[bid]
            print(f"{bid.value:24s} {d.direction:5s}  {d.description}")
        return 0
    bid = BoundId.from_name(args.name)
    prm = BoundParams(size_p=args.size_p, size_c=args.size_c, size_a=args.size_a, size_b=args.size_b,
                      size_s=args.size_s, k=args.k, p=args.p, q=args.q, d=args.d, max_collinear=args.max_collinear,
                      circles=not args.not_circles)
    val = evaluate(bid, prm)
    ok, violated = applicability(bid, prm)
    print(f"{bid.value}: {val.total}")
    if val.branch:
        print(f"  branch: {val.branch}")
    for label, v in val.terms:
        print(f"  {label} = {v}{'  (dominant)' if label == val.dominant else ''}")
    print(f"  applicable: {'yes' if ok else 'no'}" + (f" (violated: {'; '.join(violated)})" if violated else ""))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("incidence", "rich"):
            return cmd_experiment(args, "incidences" if args.command == "incidence" else "rich")
        handler = {"invariants": cmd_invariants, "pinned": cmd_pinned, "image": cmd_image, "distset": cmd_distset,
                   "beck": cmd_beck, "bench": cmd_bench, "bound": cmd_bound}[args.command]
        return handler(args)
    except (UsageError, FpIncidenceError, ValueError) as e:
        print(f"fpincidence: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
