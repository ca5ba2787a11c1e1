"""Seeded instance generators.

Every trial draws from its own PCG64 stream keyed by (seed, instance, trial),
so results do not depend on how trials are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..curves import CircleSpec, Conic, HyperbolaSpec, Mobius, ParabolaSpec, Sphere
from ..errors import DegenerateInputError, UsageError
from ..field import PrimeField
from ..incidence import CurveFamily, CurveKind, PointSet
from ..projective import Hyperplane, LineFp2
from .config import ExperimentConfig


def trial_rng(seed: int, trial: int, instance: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(instance, trial))))


@dataclass(frozen=True)
class Instance:
    """One point of a size sweep."""

    index: int
    points: int = 0
    size_a: int = 0
    size_b: int = 0
    subgroup: int = 0

    def describe(self, cfg: ExperimentConfig) -> str:
        g = cfg.generator
        if g == "cartesian":
            size = f"A={self.size_a} B={self.size_b}"
        elif g == "coset":
            size = f"H={self.subgroup}"
        else:
            size = f"n={self.points}"
        return f"{g} {size} family={cfg.family} p={cfg.prime}"


def instances(cfg: ExperimentConfig) -> list[Instance]:
    if cfg.generator == "cartesian":
        pairs = (product(cfg.size_a, cfg.size_b) if cfg.size_b else ((a, a) for a in cfg.size_a))
        return [Instance(i, size_a=a, size_b=b) for i, (a, b) in enumerate(pairs)]
    if cfg.generator == "coset":
        return [Instance(i, subgroup=h) for i, h in enumerate(cfg.subgroup)]
    return [Instance(i, points=n) for i, n in enumerate(cfg.points)]


# ---------------------------------------------------------------------------
# point sets


def random_points(rng: np.random.Generator, F: PrimeField, n: int, dim: int = 2) -> PointSet:
    p = F.p
    population = p ** dim
    if n > population:
        raise UsageError(f"cannot draw {n} distinct points from F_{p}^{dim} ({population} points)")
    if 2 * n > population:
        # dense: sample indices directly
        idx = rng.choice(population, size=n, replace=False)
        pts = [tuple(int(i) // p ** j % p for j in range(dim)) for i in idx]
        return PointSet(F, dim, tuple(pts))
    seen: dict[tuple[int, ...], None] = {}
    while len(seen) < n:
        batch = rng.integers(0, p, size=(n - len(seen), dim), dtype=np.int64)
        for row in batch.tolist():
            seen.setdefault(tuple(row), None)
    return PointSet(F, dim, tuple(seen))


def random_subset(rng: np.random.Generator, F: PrimeField, n: int) -> list[int]:
    if n > F.p:
        raise UsageError(f"cannot draw {n} distinct elements of F_{F.p}")
    if 2 * n > F.p:
        return sorted(int(v) for v in rng.choice(F.p, size=n, replace=False))
    seen: dict[int, None] = {}
    while len(seen) < n:
        for v in rng.integers(0, F.p, size=n - len(seen), dtype=np.int64).tolist():
            seen.setdefault(v, None)
    return sorted(seen)


def cartesian_points(rng: np.random.Generator, F: PrimeField, size_a: int, size_b: int) -> tuple[PointSet, list[int], list[int]]:
    A = random_subset(rng, F, size_a)
    B = random_subset(rng, F, size_b)
    return PointSet(F, 2, tuple(product(A, B))), A, B


def primitive_root(F: PrimeField) -> int:
    p = F.p
    n, factors, d = p - 1, set(), 2
    while d * d <= n:
        while n % d == 0:
            factors.add(d)
            n //= d
        d += 1
    if n > 1:
        factors.add(n)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    return 1  # p = 3 falls through only if 2 is not a root, which cannot happen


def subgroup(F: PrimeField, h: int) -> list[int]:
    """The multiplicative subgroup of order h."""
    if (F.p - 1) % h:
        raise UsageError(f"subgroup order {h} does not divide p - 1 = {F.p - 1}")
    g = pow(primitive_root(F), (F.p - 1) // h, F.p)
    return sorted(pow(g, i, F.p) for i in range(h))


def coset_points(F: PrimeField, h: int) -> PointSet:
    H = subgroup(F, h)
    return PointSet(F, 2, tuple(product(H, H)))


def random_nondegenerate_conic(rng: np.random.Generator, F: PrimeField) -> Conic:
    while True:
        c = Conic(F, *(int(v) for v in rng.integers(0, F.p, size=6)))
        if c.is_nondegenerate:
            return c


def points_on_curve(rng: np.random.Generator, F: PrimeField, count: int, coeffs: tuple[int, ...] = ()) -> PointSet:
    if coeffs:
        if len(coeffs) != 6:
            raise UsageError("curve needs six conic coefficients")
        conic = Conic(F, *coeffs)
    else:
        conic = random_nondegenerate_conic(rng, F)
    pts = sorted(conic.affine_points())
    if count > len(pts):
        raise UsageError(f"curve has only {len(pts)} affine points, asked for {count}")
    idx = sorted(int(i) for i in rng.choice(len(pts), size=count, replace=False))
    return PointSet(F, 2, tuple(pts[i] for i in idx))


# ---------------------------------------------------------------------------
# curve families


def family_population(kind: str, p: int, dim: int = 2) -> int:
    return {
        "lines": p * p + p,
        "conics": p ** 5 - p ** 2,
        "circles": p * p * (p - 1),
        "parabolas": p * p * (p - 1),
        "hyperbolas": p * p * (p - 1),
        "mobius": p ** 3 - p,
        "spheres": p ** dim * (p - 1),
        "hyperplanes": (p ** dim - 1) // (p - 1) * p,
    }[kind]


def _draw_member(kind: str, F: PrimeField, v: list[int], dim: int):
    """A curve from raw random residues, or None if the draw is degenerate."""
    p = F.p
    try:
        if kind == "lines":
            return LineFp2(F, *v[:3]) if (v[0] or v[1]) else None
        if kind == "conics":
            c = Conic(F, *v[:6])
            return c if c.is_nondegenerate else None
        if kind == "circles":
            return CircleSpec(F, (v[0], v[1]), v[2])
        if kind == "parabolas":
            return ParabolaSpec(F, v[0], v[1], v[2])
        if kind == "hyperbolas":
            return HyperbolaSpec(F, v[0], v[1], v[2])
        if kind == "mobius":
            return Mobius(F, *v[:4])
        if kind == "spheres":
            return Sphere(F, tuple(v[:dim]), v[dim]) if v[dim] % p else None
        if kind == "hyperplanes":
            return Hyperplane(F, tuple(v[:dim]), v[dim])
    except (DegenerateInputError, ArithmeticError):
        return None
    raise UsageError(f"unknown family {kind!r}")


_KINDS = {
    "lines": CurveKind.LINES, "conics": CurveKind.CONICS, "cartesian-conics": CurveKind.CONICS,
    "circles": CurveKind.CIRCLES, "parabolas": CurveKind.PARABOLAS, "hyperbolas": CurveKind.HYPERBOLAS,
    "mobius": CurveKind.MOBIUS, "spheres": CurveKind.SPHERES, "hyperplanes": CurveKind.HYPERPLANES,
}


def random_family(rng: np.random.Generator, F: PrimeField, kind: str, count: int, dim: int = 2) -> CurveFamily:
    """``count`` distinct random curves of a kind (circles r != 0, conics nondegenerate, ...)."""
    if kind not in _KINDS or kind == "cartesian-conics":
        raise UsageError(f"no random generator for family {kind!r}")
    if kind in ("spheres", "hyperplanes") and dim < 2:
        raise UsageError("spheres and hyperplanes need dim >= 2")
    if count > family_population(kind, F.p, dim):
        raise UsageError(f"only {family_population(kind, F.p, dim)} distinct {kind} over F_{F.p}")
    width = dim + 1 if kind in ("spheres", "hyperplanes") else 6
    seen: dict = {}
    while len(seen) < count:
        batch = rng.integers(0, F.p, size=(max(8, 2 * (count - len(seen))), width), dtype=np.int64)
        for row in batch.tolist():
            c = _draw_member(kind, F, row, dim)
            if c is not None:
                seen.setdefault(c, None)
                if len(seen) == count:
                    break
    return CurveFamily(_KINDS[kind], F, tuple(seen))


def cartesian_conics(rng: np.random.Generator, F: PrimeField, n: int) -> CurveFamily:
    """Nondegenerate a x^2 + xy + b y^2 + d x + c y + e = 0 with each coefficient from its own n-set."""
    p = F.p
    sets = [random_subset(rng, F, n) for _ in range(5)]
    grid = np.array(list(product(*sets)), dtype=np.int64 if p < 2 ** 20 else object).reshape(-1, 5)
    a, b, c, d, e = (grid[:, i] for i in range(5))
    # det of [[2a, 1, d], [1, 2b, c], [d, c, 2e]] (twice the symmetric matrix)
    det = (2 * a * (4 * b * e - c * c) - (2 * e - c * d) + d * (c - 2 * b * d)) % p
    keep = grid[det != 0]
    return CurveFamily(CurveKind.CONICS, F, tuple(Conic(F, int(r[0]), 1, int(r[1]), int(r[3]), int(r[2]), int(r[4]))
                                                   for r in keep.tolist()))


def generate(cfg: ExperimentConfig, trial: int = 0, instance: Instance | None = None) -> tuple[PointSet, CurveFamily, dict]:
    """Points and curves for one trial; the dict records sizes such as |A|, |B| for the bound catalog."""
    inst = instance or instances(cfg)[0]
    F = PrimeField(cfg.prime)
    rng = trial_rng(cfg.seed, trial, inst.index)
    meta: dict = {}
    dim = cfg.dim if cfg.family in ("spheres", "hyperplanes") else 2
    if cfg.generator == "cartesian":
        P, A, B = cartesian_points(rng, F, inst.size_a, inst.size_b)
        meta.update(size_a=len(A), size_b=len(B))
    elif cfg.generator == "coset":
        P = coset_points(F, inst.subgroup)
        meta.update(size_a=inst.subgroup, size_b=inst.subgroup)
    elif cfg.generator == "oncurve":
        if dim != 2:
            raise UsageError("oncurve points are planar")
        P = points_on_curve(rng, F, inst.points, cfg.curve)
    else:
        P = random_points(rng, F, inst.points, dim)
    if P.dim != dim:
        raise UsageError(f"{cfg.generator} points are planar; family {cfg.family} needs dim {dim}")
    if cfg.family == "cartesian-conics":
        C = cartesian_conics(rng, F, cfg.coeff_set or inst.size_a or inst.points)
    else:
        C = random_family(rng, F, cfg.family, cfg.curves, dim)
    return P, C, meta
