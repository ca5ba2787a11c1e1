"""Exhaustive and randomized consistency checks at small primes.

Each check returns a CheckResult; ``run_suite`` runs the default set used
by the ``invariants`` CLI command.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

import numpy as np

from .curves import (CircleSpec, Conic, HyperbolaSpec, ParabolaSpec, Sphere, all_conics, all_mobius,
                     conic_through_five_points, mobius_to_conic, to_conic)
from .field import MatrixModP, PrimeField, nullspace
from .incidence import (CurveFamily, CurveKind, PointSet, curve_richness, pinned_duality_check,
                        profile_from_counts, circle_dual, parabola_dual, hyperbola_dual, sphere_dual)
from .projective import LineFp2, ProjTransform, all_proj_points, apply, collinear, transform_line


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)


def check_field(p: int) -> CheckResult:
    F = PrimeField(p)
    res = CheckResult(f"field p={p}")
    for x in range(1, p):
        res.checked += 1
        if x * F.inv(x) % p != 1:
            res.fail(f"inverse of {x}")
        s = F.sqrt(x)
        if (s is not None) != (F.legendre(x) == 1) or (s is not None and s * s % p != x):
            res.fail(f"sqrt/legendre of {x}")
        for y in range(1, p):
            if F.legendre(x * y) != F.legendre(x) * F.legendre(y):
                res.fail(f"legendre not multiplicative at {x},{y}")
    return res


def check_smooth_conic_counts(p: int, conics=None) -> CheckResult:
    """Every nondegenerate conic has p + 1 projective points."""
    F = PrimeField(p)
    res = CheckResult(f"smooth conic point count p={p}")
    for c in (conics if conics is not None else all_conics(F)):
        if not c.is_nondegenerate:
            continue
        res.checked += 1
        n = len(c.projective_points())
        if n != p + 1:
            res.fail(f"{c} has {n} points")
    return res


def mobius_conic_sets(p: int) -> tuple[set, set]:
    """(nondegenerate conics through [0:1:0] and [1:0:0], graphs of non-affine Moebius maps)."""
    F = PrimeField(p)
    through = {c for c in all_conics(F) if c.a == 0 and c.c == 0 and c.is_nondegenerate}
    graphs = {mobius_to_conic(m) for m in all_mobius(F) if not m.is_affine}
    return through, graphs


def check_mobius_characterization(p: int) -> CheckResult:
    res = CheckResult(f"Moebius graphs = conics through both axis points at infinity, p={p}")
    through, graphs = mobius_conic_sets(p)
    res.checked = len(through | graphs)
    if through != graphs:
        res.fail(f"{len(through - graphs)} conics without a map, {len(graphs - through)} maps off the set")
    if len(through) != p * p * (p - 1):
        res.fail(f"{len(through)} conics, expected {p * p * (p - 1)}")
    res.detail = f"{len(through)} curves"
    return res


def _max_pairwise(members: list[frozenset]) -> int:
    universe = sorted(set().union(*members))
    index = {pt: i for i, pt in enumerate(universe)}
    M = np.zeros((len(members), len(universe)), dtype=np.int32)
    for i, pts in enumerate(members):
        M[i, [index[q] for q in pts]] = 1
    G = M @ M.T
    np.fill_diagonal(G, -1)
    return int(G.max()) if len(members) > 1 else 0


def bezout_maxima(p: int) -> dict[str, int]:
    """Largest intersection of two distinct curves in each family over F_p.

    Conics are intersected projectively; circles, parabolas and
    hyperbolas affinely (each family shares its points at infinity).
    """
    F = PrimeField(p)
    out = {}
    conic_sets = {frozenset(q.coords for q in c.projective_points())
                  for c in all_conics(F) if c.is_nondegenerate}
    out["conics"] = _max_pairwise(list(conic_sets))
    fams = {
        "circles": [CircleSpec(F, (a, b), r) for a, b, r in product(range(p), range(p), range(1, p))],
        "parabolas": [ParabolaSpec(F, a, b, c) for a, b, c in product(range(1, p), range(p), range(p))],
        "hyperbolas": [HyperbolaSpec(F, a, b, c) for a, b, c in product(range(p), range(p), range(1, p))],
    }
    for name, curves in fams.items():
        sets = {frozenset(to_conic(c).affine_points()) for c in curves}
        out[name] = _max_pairwise(list(sets))
    return out


def check_bezout(p: int) -> CheckResult:
    res = CheckResult(f"intersection bounds p={p}")
    m = bezout_maxima(p)
    res.checked = len(m)
    if m["conics"] > 4:
        res.fail(f"two conics meet in {m['conics']} points")
    for k in ("circles", "parabolas", "hyperbolas"):
        if m[k] > 2:
            res.fail(f"two {k} meet in {m[k]} points")
    res.detail = ", ".join(f"{k}={v}" for k, v in m.items())
    return res


def random_gp_five(rng: np.random.Generator, F: PrimeField) -> list[tuple[int, int]]:
    while True:
        pts = {tuple(int(v) for v in rng.integers(0, F.p, size=2)) for _ in range(5)}
        if len(pts) < 5:
            continue
        pts = sorted(pts)
        if not any(collinear(F, a, b, c) for i, a in enumerate(pts) for j, b in enumerate(pts[i + 1:], i + 1)
                   for c in pts[j + 1:]):
            return pts


def check_five_point(p: int, trials: int, seed: int = 0) -> CheckResult:
    """A general-position 5-tuple spans a 1-dimensional space of conics and the fit contains all five."""
    F = PrimeField(p)
    rng = np.random.default_rng(seed)
    res = CheckResult(f"five-point determination p={p}")
    for _ in range(trials):
        pts = random_gp_five(rng, F)
        res.checked += 1
        rows = [[x * x, x * y, y * y, x, y, 1] for x, y in pts]
        ns = nullspace(MatrixModP.from_rows(F, rows))
        c = conic_through_five_points(F, pts)
        if len(ns) != 1 or c is None or Conic(F, *ns[0]) != c or not all(c.contains(q) for q in pts):
            res.fail(f"{pts}")
    return res


def random_transform(rng: np.random.Generator, F: PrimeField) -> ProjTransform:
    while True:
        m = MatrixModP.from_rows(F, rng.integers(0, F.p, size=(3, 3)).tolist())
        if m.det():
            return ProjTransform(m)


def projective_incidences(points, lines) -> int:
    return sum(1 for q in points for l in lines if l.contains(q))


def check_projective_invariance(primes=(7, 11), trials: int = 100, seed: int = 0,
                                n_points: int = 12, n_lines: int = 12) -> CheckResult:
    """I(t(P), L) == I(P, t^{-1}(L)) for random transforms t."""
    rng = np.random.default_rng(seed)
    res = CheckResult("projective incidence invariance")
    for i in range(trials):
        F = PrimeField(primes[i % len(primes)])
        allpts = list(all_proj_points(F))
        P = [allpts[j] for j in rng.choice(len(allpts), size=n_points, replace=False)]
        L = []
        while len(L) < n_lines:
            v = [int(x) for x in rng.integers(0, F.p, size=3)]
            if any(v) and LineFp2(F, *v) not in L:
                L.append(LineFp2(F, *v))
        t = random_transform(rng, F)
        lhs = projective_incidences([apply(t, q) for q in P], L)
        rhs = projective_incidences(P, [transform_line(t.inverse(), l) for l in L])
        res.checked += 1
        if lhs != rhs:
            res.fail(f"p={F.p} trial {i}: {lhs} != {rhs}")
    return res


def all_curves(F: PrimeField, kind: CurveKind, dim: int = 3) -> CurveFamily:
    p = F.p
    if kind is CurveKind.CIRCLES:
        cs = [CircleSpec(F, (a, b), r) for a, b, r in product(range(p), range(p), range(1, p))]
    elif kind is CurveKind.PARABOLAS:
        cs = [ParabolaSpec(F, a, b, c) for a, b, c in product(range(1, p), range(p), range(p))]
    elif kind is CurveKind.HYPERBOLAS:
        cs = [HyperbolaSpec(F, a, b, c) for a, b, c in product(range(p), range(p), range(1, p))]
    elif kind is CurveKind.SPHERES:
        cs = [Sphere(F, ctr, r) for ctr in product(range(p), repeat=dim) for r in range(1, p)]
    else:
        raise ValueError(kind)
    return CurveFamily(kind, F, tuple(cs))


def isotropic(v, p: int) -> bool:
    return sum(x * x for x in v) % p == 0


def dual_map_for(kind: CurveKind, P: PointSet):
    """The dual map of P minus the origin, pinned at the origin."""
    rest = P.without((0,) * P.dim)
    if kind is CurveKind.CIRCLES:
        return circle_dual(rest)
    if kind is CurveKind.PARABOLAS:
        return parabola_dual(rest)
    if kind is CurveKind.HYPERBOLAS:
        return hyperbola_dual(rest, (0, 0))
    return sphere_dual(rest)


def check_duality(p: int, kinds=(CurveKind.CIRCLES, CurveKind.PARABOLAS, CurveKind.HYPERBOLAS, CurveKind.SPHERES),
                  pins: int | None = None, seed: int = 0) -> CheckResult:
    """Direct incidences through a pin equal dual incidences plus those carried by skipped points.

    Also checks that skipped points are exactly the documented ones and
    that every dual collision is explained (isotropic parameters only).
    """
    F = PrimeField(p)
    rng = np.random.default_rng(seed)
    res = CheckResult(f"pinned duality p={p}")
    for kind in kinds:
        dim = 3 if kind is CurveKind.SPHERES else 2
        P = PointSet(F, dim, tuple(product(range(p), repeat=dim)))
        fam = all_curves(F, kind, dim)
        pin_list = list(P)
        if pins is not None and pins < len(pin_list):
            pin_list = [pin_list[i] for i in sorted(rng.choice(len(pin_list), size=pins, replace=False))]
        for pin in pin_list:
            chk = pinned_duality_check(P, fam, pin)
            res.checked += 1
            if not chk.consistent:
                res.fail(f"{kind.value} pin {pin}: direct {chk.direct} vs dual {chk.dual}+{chk.skipped_incidences}")
        dmap = dual_map_for(kind, P)
        for q in dmap.skipped:
            ok = (q[0] == 0) if kind is CurveKind.PARABOLAS else (q[0] == 0 or q[1] == 0)
            if not ok:
                res.fail(f"{kind.value}: unexplained skipped point {q}")
        for image, pre in dmap.collisions.items():
            if kind in (CurveKind.CIRCLES, CurveKind.SPHERES) and all(isotropic(v, p) for v in pre):
                continue
            res.fail(f"{kind.value}: unexplained collision {sorted(pre)}")
    return res


def check_oracle_equivalence(instances: int = 20, seed: int = 0, max_size: int = 60) -> CheckResult:
    """Fast and naive engines agree, and the dyadic identity holds for every histogram."""
    from .harness.generators import family_population, random_family, random_points

    res = CheckResult("fast engine = naive engine")
    rng = np.random.default_rng(seed)
    kinds = ["lines", "conics", "circles", "parabolas", "hyperbolas", "mobius", "spheres", "hyperplanes"]
    for i in range(instances):
        p = int(rng.choice([3, 5, 7, 11, 13, 31, 101]))
        F = PrimeField(p)
        kind = kinds[i % len(kinds)]
        dim = 3 if kind in ("spheres", "hyperplanes") else 2
        n_pts = int(rng.integers(1, min(max_size, p ** dim) + 1))
        P = random_points(rng, F, n_pts, dim)
        n_c = int(rng.integers(1, min(max_size, family_population(kind, p, dim)) + 1))
        C = random_family(rng, F, kind, n_c, dim)
        fast = curve_richness(P, C, engine="fast")
        naive = curve_richness(P, C, engine="naive")
        prof = profile_from_counts(fast)
        res.checked += 1
        if not np.array_equal(fast, naive):
            res.fail(f"instance {i} ({kind}, p={p}) engines differ")
        if sum(k * v for k, v in prof.histogram.items()) != prof.total:
            res.fail(f"instance {i}: dyadic identity")
    return res


SUITE: list[tuple[str, Callable[[], CheckResult]]] = [
    ("field", lambda: _merge("field arithmetic", [check_field(p) for p in (3, 5, 7, 11, 13)])),
    ("conic-count", lambda: _merge("smooth conic point counts", [check_smooth_conic_counts(p) for p in (3, 5)])),
    ("mobius", lambda: _merge("Moebius characterization", [check_mobius_characterization(p) for p in (3, 5)])),
    ("bezout", lambda: check_bezout(5)),
    ("five-point", lambda: check_five_point(101, 200)),
    ("projective", lambda: check_projective_invariance(trials=100)),
    ("duality", lambda: check_duality(5)),
    ("engines", lambda: check_oracle_equivalence(24)),
]


def _merge(name: str, results: list[CheckResult]) -> CheckResult:
    out = CheckResult(name)
    for r in results:
        out.checked += r.checked
        out.failures += [f"{r.name}: {f}" for f in r.failures]
    return out


def run_suite(names: list[str] | None = None) -> list[CheckResult]:
    wanted = names or [n for n, _ in SUITE]
    known = dict(SUITE)
    return [known[n]() for n in wanted]
