"""Incidence counting, richness histograms and the pin-and-dualize maps.

Two engines count incidences:

* ``"naive"``: a double loop over curves and points calling ``contains``;
* ``"fast"``: each curve kind is written as a linear form in a handful of
  point monomials and evaluated by a compiled kernel, optionally split
  over threads by curve blocks.

They must agree exactly; the naive engine is the oracle.
"""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .curves import CircleSpec, Conic, HyperbolaSpec, Mobius, ParabolaSpec, Sphere
from .errors import UsageError
from .field import PrimeField
from .projective import AffinePoint, Hyperplane, LineFp2


class CurveKind(enum.Enum):
    LINES = "Lines"
    CONICS = "Conics"
    CIRCLES = "Circles"
    PARABOLAS = "Parabolas"
    HYPERBOLAS = "Hyperbolas"
    MOBIUS = "MobiusGraphs"
    SPHERES = "Spheres"
    HYPERPLANES = "Hyperplanes"


_KIND_OF_TYPE = {
    LineFp2: CurveKind.LINES,
    Conic: CurveKind.CONICS,
    CircleSpec: CurveKind.CIRCLES,
    ParabolaSpec: CurveKind.PARABOLAS,
    HyperbolaSpec: CurveKind.HYPERBOLAS,
    Mobius: CurveKind.MOBIUS,
    Sphere: CurveKind.SPHERES,
    Hyperplane: CurveKind.HYPERPLANES,
}
_TYPE_OF_KIND = {v: k for k, v in _KIND_OF_TYPE.items()}


@dataclass(frozen=True)
class PointSet:
    """A deduplicated, sorted set of affine points of one dimension."""

    field: PrimeField
    dim: int
    points: tuple[AffinePoint, ...]

    def __post_init__(self) -> None:
        p = self.field.p
        pts = sorted({tuple(int(v) % p for v in pt) for pt in self.points})
        if any(len(pt) != self.dim for pt in pts):
            raise UsageError(f"all points must have dimension {self.dim}")
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def of(cls, F: PrimeField, points: Iterable[Sequence[int]], dim: int | None = None) -> "PointSet":
        pts = [tuple(pt) for pt in points]
        if dim is None:
            if not pts:
                raise UsageError("dimension required for an empty point set")
            dim = len(pts[0])
        return cls(F, dim, tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, pt) -> bool:
        return tuple(pt) in self._lookup

    @cached_property
    def _lookup(self) -> frozenset:
        return frozenset(self.points)

    def translate(self, v: Sequence[int]) -> "PointSet":
        return PointSet(self.field, self.dim, tuple(tuple(a + b for a, b in zip(pt, v)) for pt in self.points))

    def without(self, pt: Sequence[int]) -> "PointSet":
        pt = tuple(pt)
        return PointSet(self.field, self.dim, tuple(q for q in self.points if q != pt))

    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(len(self.points), self.dim)


@dataclass(frozen=True)
class CurveFamily:
    """A homogeneous family of curves, deduplicated by canonical form (first occurrence kept)."""

    kind: CurveKind
    field: PrimeField
    members: tuple

    def __post_init__(self) -> None:
        want = _TYPE_OF_KIND[self.kind]
        seen: dict = {}
        for c in self.members:
            if not isinstance(c, want):
                raise UsageError(f"{type(c).__name__} in a {self.kind.value} family")
            if c.field != self.field:
                raise UsageError("curve over a different field")
            seen.setdefault(c, None)
        object.__setattr__(self, "members", tuple(seen))
        if self.kind in (CurveKind.SPHERES, CurveKind.HYPERPLANES):
            dims = {c.dim for c in self.members}
            if len(dims) > 1:
                raise UsageError("mixed dimensions in family")

    @classmethod
    def of(cls, curves: Iterable, kind: CurveKind | None = None, field: PrimeField | None = None) -> "CurveFamily":
        curves = list(curves)
        if kind is None:
            if not curves:
                raise UsageError("kind required for an empty family")
            kind = _KIND_OF_TYPE[type(curves[0])]
        if field is None:
            if not curves:
                raise UsageError("field required for an empty family")
            field = curves[0].field
        return cls(kind, field, tuple(curves))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def dim(self) -> int | None:
        if self.kind in (CurveKind.SPHERES, CurveKind.HYPERPLANES):
            return self.members[0].dim if self.members else None
        return 2


# ---------------------------------------------------------------------------
# Linear-form encoding per kind


def _coeff_row(kind: CurveKind, c, p: int) -> tuple[int, ...]:
    if kind is CurveKind.LINES:
        return c.coeffs
    if kind is CurveKind.CONICS:
        return c.coeffs
    if kind is CurveKind.CIRCLES:
        (c1, c2), r = c.center, c.r
        return (1, -2 * c1 % p, -2 * c2 % p, (c1 * c1 + c2 * c2 - r) % p)
    if kind is CurveKind.PARABOLAS:
        return (c.a, c.b, p - 1, c.c)
    if kind is CurveKind.HYPERBOLAS:
        return (1, -c.b % p, -c.a % p, (c.a * c.b - c.c) % p)
    if kind is CurveKind.MOBIUS:
        return (c.c, -c.a % p, c.d, -c.b % p)
    if kind is CurveKind.SPHERES:
        return (1,) + tuple(-2 * v % p for v in c.center) + ((sum(v * v for v in c.center) - c.r) % p,)
    if kind is CurveKind.HYPERPLANES:
        return tuple(c.normal) + (c.offset,)
    raise AssertionError(kind)


def _feature_rows(kind: CurveKind, pts: np.ndarray, p: int) -> np.ndarray:
    """Point monomials matching _coeff_row, reduced mod p, as uint64."""
    a = pts.astype(object) if p >= _kernels.MAX_KERNEL_PRIME else pts.astype(np.uint64)
    n = a.shape[0]
    one = np.ones(n, dtype=a.dtype)
    if kind in (CurveKind.SPHERES, CurveKind.HYPERPLANES):
        cols = [a[:, i] for i in range(a.shape[1])]
        if kind is CurveKind.SPHERES:
            sq = np.zeros(n, dtype=a.dtype)
            for col in cols:
                sq = (sq + col * col % p) % p
            cols = [sq] + cols
        return np.stack(cols + [one], axis=1) if n else np.zeros((0, len(cols) + 1), a.dtype)
    x, y = a[:, 0], a[:, 1]
    if kind is CurveKind.LINES:
        cols = [x, y, one]
    elif kind is CurveKind.CONICS:
        cols = [x * x % p, x * y % p, y * y % p, x, y, one]
    elif kind is CurveKind.CIRCLES:
        cols = [(x * x + y * y) % p, x, y, one]
    elif kind is CurveKind.PARABOLAS:
        cols = [x * x % p, x, y, one]
    else:  # hyperbolas and Moebius graphs: (xy, x, y, 1)
        cols = [x * y % p, x, y, one]
    return np.stack(cols, axis=1) if n else np.zeros((0, len(cols)), a.dtype)


def _check_dims(P: PointSet, F: CurveFamily) -> None:
    if P.field != F.field:
        raise UsageError("point set and family are over different fields")
    if F.members and F.dim != P.dim:
        raise UsageError(f"points of dimension {P.dim} vs curves in dimension {F.dim}")
    if not F.members and P.points and F.kind not in (CurveKind.SPHERES, CurveKind.HYPERPLANES) and P.dim != 2:
        raise UsageError("planar family needs planar points")


def _fast_counts(P: PointSet, F: CurveFamily, threads: int = 1, block: int = 1024) -> np.ndarray:
    p = F.field.p
    if not F.members:
        return np.zeros(0, dtype=np.int64)
    if not P.points:
        return np.zeros(len(F), dtype=np.int64)
    feat = _feature_rows(F.kind, P.array(), p)
    rows = [_coeff_row(F.kind, c, p) for c in F.members]
    if p >= _kernels.MAX_KERNEL_PRIME:
        coef = np.array(rows, dtype=object)
        return np.array([int(np.count_nonzero((feat * r).sum(axis=1) % p == 0)) for r in coef], dtype=np.int64)
    coef = np.ascontiguousarray(np.array(rows, dtype=np.uint64))
    feat = np.ascontiguousarray(feat)
    pu, chunk = np.uint64(p), _kernels.reduction_chunk(p)
    if threads <= 1 or len(rows) <= block:
        return _kernels.curve_counts(coef, feat, pu, chunk)
    starts = range(0, len(rows), block)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda s: _kernels.curve_counts(coef[s:s + block], feat, pu, chunk), starts))
    return np.concatenate(parts)


def _naive_counts(P: PointSet, F: CurveFamily) -> np.ndarray:
    return np.array([sum(1 for pt in P.points if c.contains(pt)) for c in F.members], dtype=np.int64)


def curve_richness(P: PointSet, F: CurveFamily, engine: str = "fast", threads: int = 1) -> np.ndarray:
    """|C cap P| for every member C, in family order."""
    _check_dims(P, F)
    if engine == "fast":
        return _fast_counts(P, F, threads=threads)
    if engine == "naive":
        return _naive_counts(P, F)
    raise UsageError(f"unknown engine {engine!r}; use 'fast' or 'naive'")


def count_incidences(P: PointSet, F: CurveFamily, engine: str = "fast", threads: int = 1) -> int:
    """I(P, F) = #{(pt, C) : pt in C}."""
    return int(curve_richness(P, F, engine=engine, threads=threads).sum())


# ---------------------------------------------------------------------------
# Histograms and dyadic bookkeeping


@dataclass(frozen=True)
class DyadicBand:
    index: int
    lower: Fraction  # exclusive
    upper: Fraction  # inclusive
    curves: int
    incidences: int
    rich_at_lower: int  # curves with at least lower points


@dataclass(frozen=True)
class DyadicSplit:
    delta: Fraction
    low: int  # sum over k <= delta of k |C_{=k}|
    high: int  # sum over k > delta
    bands: tuple[DyadicBand, ...]


@dataclass(frozen=True)
class IncidenceProfile:
    """histogram[k] = number of curves meeting P in exactly k points (k = 0 included)."""

    histogram: dict[int, int]
    total: int
    delta: Fraction | None = None

    @property
    def family_size(self) -> int:
        return sum(self.histogram.values())

    @property
    def max_richness(self) -> int:
        return max((k for k, v in self.histogram.items() if v), default=0)

    def rich_count(self, k: int) -> int:
        """|C_k| = number of curves with at least k points."""
        return sum(v for j, v in self.histogram.items() if j >= k)

    def dyadic_split(self, delta=None) -> DyadicSplit:
        delta = Fraction(delta if delta is not None else self.delta)
        if delta <= 0:
            raise UsageError("dyadic threshold must be positive")
        low = sum(k * v for k, v in self.histogram.items() if k <= delta)
        bands = []
        i = 0
        top = self.max_richness
        while delta * 2 ** i < top:
            lo, hi = delta * 2 ** i, delta * 2 ** (i + 1)
            members = {k: v for k, v in self.histogram.items() if lo < k <= hi}
            bands.append(DyadicBand(
                i, lo, hi, sum(members.values()), sum(k * v for k, v in members.items()),
                sum(v for k, v in self.histogram.items() if k >= lo),
            ))
            i += 1
        high = sum(b.incidences for b in bands)
        return DyadicSplit(delta, low, high, tuple(bands))


def profile_from_counts(counts: Iterable[int], delta=None) -> IncidenceProfile:
    counts = [int(c) for c in counts]
    hist = Counter(counts)
    total = sum(counts)  # summed directly, so sum_k k |C_{=k}| == total is a real check
    return IncidenceProfile(dict(sorted(hist.items())), total, None if delta is None else Fraction(delta))


def incidence_histogram(P: PointSet, F: CurveFamily, engine: str = "fast", threads: int = 1,
                        delta=None) -> IncidenceProfile:
    return profile_from_counts(curve_richness(P, F, engine=engine, threads=threads), delta)


@dataclass(frozen=True)
class RichFamily:
    k: int
    curves: tuple
    richness: tuple[int, ...]  # aligned with curves

    def __len__(self) -> int:
        return len(self.curves)


def rich_curves(P: PointSet, F: CurveFamily, k: int, engine: str = "fast", threads: int = 1) -> RichFamily:
    """Members of F containing at least k points of P."""
    if k < 1:
        raise UsageError("richness threshold must be >= 1")
    counts = curve_richness(P, F, engine=engine, threads=threads)
    keep = [(c, int(n)) for c, n in zip(F.members, counts) if n >= k]
    return RichFamily(k, tuple(c for c, _ in keep), tuple(n for _, n in keep))


# ---------------------------------------------------------------------------
# Pin-and-dualize


@dataclass(frozen=True)
class DualMap:
    """Points (in pin-translated coordinates) and their dual lines or hyperplanes.

    ``skipped`` holds points that have no dual object and sit on no
    admissible curve through the pin apart from the pin itself.
    """

    kind: str
    images: dict = dc_field(repr=False)
    skipped: tuple[AffinePoint, ...] = ()

    @property
    def duals(self) -> set:
        return set(self.images.values())

    @property
    def back_map(self) -> dict:
        back = defaultdict(list)
        for pt, h in self.images.items():
            back[h].append(pt)
        return {h: tuple(sorted(v)) for h, v in back.items()}

    @property
    def collisions(self) -> dict:
        return {h: pts for h, pts in self.back_map.items() if len(pts) > 1}

    @property
    def injective(self) -> bool:
        return len(self.duals) == len(self.images)


def _points_of(P) -> tuple[PrimeField | None, list[AffinePoint]]:
    if isinstance(P, PointSet):
        return P.field, list(P.points)
    return None, [tuple(pt) for pt in P]


def circle_dual(P: PointSet) -> DualMap:
    """(alpha, beta) -> the line -2 alpha X - 2 beta Y + alpha^2 + beta^2 = 0.

    The circle through the origin centred at (a, b) contains (alpha, beta)
    iff the dual line contains (a, b).
    """
    if P.dim != 2:
        raise UsageError("circle_dual works in the plane")
    F, p = P.field, P.field.p
    if (0, 0) in set(P.points):
        raise UsageError("translate the pin to the origin and remove it first")
    images = {(al, be): LineFp2(F, -2 * al, -2 * be, al * al + be * be) for al, be in P.points}
    return DualMap("circle", images)


def parabola_dual(P: PointSet) -> DualMap:
    """(alpha, beta) -> the line alpha^2 X + alpha Y - beta = 0 in (a, b)-space.

    Points with alpha = 0 are skipped: no parabola y = a x^2 + b x passes
    through both the origin and (0, beta != 0).
    """
    if P.dim != 2:
        raise UsageError("parabola_dual works in the plane")
    F = P.field
    images, skipped = {}, []
    for al, be in P.points:
        if (al, be) == (0, 0):
            raise UsageError("translate the pin to the origin and remove it first")
        if al == 0:
            skipped.append((al, be))
            continue
        images[(al, be)] = LineFp2(F, al * al, al, -be)
    return DualMap("parabola", images, tuple(skipped))


def hyperbola_dual(P: PointSet, pin: Sequence[int]) -> DualMap:
    """(x, y) -> the line x' X + y' Y + x' y' = 0 where (x', y') = (x, y) - pin.

    A hyperbola (x - a)(y - b) = c through the pin maps to the point
    (q2 - b, q1 - a); points with x' = 0 or y' = 0 are skipped.
    """
    if P.dim != 2:
        raise UsageError("hyperbola_dual works in the plane")
    F, p = P.field, P.field.p
    q1, q2 = (v % p for v in pin)
    images, skipped = {}, []
    for x, y in P.points:
        xp, yp = (x - q1) % p, (y - q2) % p
        if xp == 0 or yp == 0:
            skipped.append((x, y))
            continue
        images[(x, y)] = LineFp2(F, xp, yp, xp * yp)
    return DualMap("hyperbola", images, tuple(skipped))


def sphere_dual(P: PointSet) -> DualMap:
    """alpha -> the hyperplane -2 alpha . X + |alpha|^2 = 0 in F_p^d."""
    F = P.field
    if any(not any(pt) for pt in P.points):
        raise UsageError("translate the pin to the origin and remove it first")
    images = {
        pt: Hyperplane(F, tuple(-2 * v for v in pt), sum(v * v for v in pt))
        for pt in P.points
    }
    return DualMap("sphere", images)


def dual_parameter(curve, pin: Sequence[int]) -> AffinePoint | None:
    """Parameter point of a curve through ``pin`` in the dual picture, or None if it misses the pin."""
    p = curve.field.p
    pin = tuple(v % p for v in pin)
    if not curve.contains(pin):
        return None
    if isinstance(curve, (CircleSpec, Sphere)):
        return tuple((c - q) % p for c, q in zip(curve.center, pin))
    if isinstance(curve, ParabolaSpec):
        return (curve.a, (2 * curve.a * pin[0] + curve.b) % p)
    if isinstance(curve, HyperbolaSpec):
        return ((pin[1] - curve.b) % p, (pin[0] - curve.a) % p)
    raise UsageError(f"no pinned duality for {type(curve).__name__}")


@dataclass(frozen=True)
class DualityCheck:
    pin: AffinePoint
    curves_through_pin: int
    direct: int  # incidences of P minus pin with curves through the pin
    dual: int  # incidences of dual parameter points with dual lines/hyperplanes
    skipped_points: int
    skipped_incidences: int  # direct incidences carried by skipped points
    injective: bool

    @property
    def consistent(self) -> bool:
        return self.direct == self.dual + self.skipped_incidences


def pinned_duality_check(P: PointSet, family: CurveFamily, pin: Sequence[int], engine: str = "fast") -> DualityCheck:
    """Compare the incidences of P with curves through ``pin`` against their dual count."""
    F, p = P.field, P.field.p
    pin = tuple(v % p for v in pin)
    through = [c for c in family.members if c.contains(pin)]
    rest = P.without(pin)
    kind = family.kind
    if kind is CurveKind.HYPERBOLAS:
        dmap = hyperbola_dual(rest, pin)
    else:
        shifted = rest.translate(tuple(-v for v in pin))
        if kind is CurveKind.CIRCLES:
            dmap = circle_dual(shifted)
        elif kind is CurveKind.PARABOLAS:
            dmap = parabola_dual(shifted)
        elif kind is CurveKind.SPHERES:
            dmap = sphere_dual(shifted)
        else:
            raise UsageError(f"no pinned duality for {kind.value}")

    through_fam = CurveFamily(kind, F, tuple(through))
    direct = count_incidences(rest, through_fam, engine=engine)
    if kind is CurveKind.HYPERBOLAS:
        skipped_orig = PointSet(F, 2, dmap.skipped)
    else:
        skipped_orig = PointSet(F, P.dim, dmap.skipped).translate(pin)
    skipped_inc = count_incidences(skipped_orig, through_fam, engine=engine)

    params = PointSet(F, P.dim, tuple(dual_parameter(c, pin) for c in through))
    dual_kind = CurveKind.HYPERPLANES if kind is CurveKind.SPHERES else CurveKind.LINES
    # one dual object per data point, multiplicity kept so collisions do not hide incidences
    duals = list(dmap.images.values())
    dual_total = 0
    if duals:
        uniq = CurveFamily(dual_kind, F, tuple(duals))
        per = dict(zip(uniq.members, curve_richness(params, uniq, engine=engine)))
        dual_total = sum(int(per[h]) for h in duals)
    return DualityCheck(pin, len(through), direct, dual_total, len(dmap.skipped), skipped_inc, dmap.injective)
