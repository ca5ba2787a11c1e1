"""Distance sets, polynomial images and conic counting over F_p.

Value sets are returned as frozensets of canonical residues.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .bounds import BoundId, BoundParams, BoundValue, applicability, evaluate
from .curves import CircleSpec, HyperbolaSpec, conic_through_five_points
from .errors import UsageError
from .field import PrimeField
from .incidence import PointSet
from .projective import AffinePoint, LineFp2, ProjPoint2


class DistanceKind(enum.Enum):
    SUM_SQUARES = "SumSquares"
    PRODUCT = "Product"
    PARABOLA_DIST = "ParabolaDist"
    QUADRANCE = "QuadranceD"
    CUSTOM = "Custom"


Monomial = tuple[int, ...]


@dataclass(frozen=True)
class DistancePolynomial:
    """A polynomial sum(c * prod x_i^e_i) in ``nvars`` variables."""

    kind: DistanceKind
    nvars: int
    terms: tuple[tuple[Monomial, int], ...]

    def __post_init__(self) -> None:
        if any(len(m) != self.nvars for m, _ in self.terms):
            raise UsageError("monomial length must equal the number of variables")

    @property
    def degree(self) -> int:
        return max((sum(m) for m, c in self.terms if c), default=0)

    @classmethod
    def sum_squares(cls) -> "DistancePolynomial":
        return cls(DistanceKind.SUM_SQUARES, 2, (((2, 0), 1), ((0, 2), 1)))

    @classmethod
    def product(cls) -> "DistancePolynomial":
        return cls(DistanceKind.PRODUCT, 2, (((1, 1), 1),))

    @classmethod
    def parabola(cls) -> "DistancePolynomial":
        return cls(DistanceKind.PARABOLA_DIST, 2, (((2, 0), 1), ((0, 1), 1)))

    @classmethod
    def quadrance(cls, d: int) -> "DistancePolynomial":
        if d < 1:
            raise UsageError("dimension must be positive")
        return cls(DistanceKind.QUADRANCE, d, tuple((tuple(2 if i == j else 0 for j in range(d)), 1) for i in range(d)))

    @classmethod
    def custom(cls, terms: Iterable[tuple[Sequence[int], int]]) -> "DistancePolynomial":
        terms = tuple((tuple(m), int(c)) for m, c in terms)
        if not terms:
            raise UsageError("custom polynomial needs at least one term")
        return cls(DistanceKind.CUSTOM, len(terms[0][0]), terms)

    @classmethod
    def x2y2_plus_z2(cls) -> "DistancePolynomial":
        """x^2 y^2 + z^2 on F_p^3."""
        return cls.custom((((2, 2, 0), 1), ((0, 0, 2), 1)))

    @classmethod
    def by_name(cls, name: str, d: int = 2) -> "DistancePolynomial":
        table = {"sumsquares": cls.sum_squares, "product": cls.product, "parabola": cls.parabola,
                 "paraboladist": cls.parabola}
        key = name.lower().replace("-", "").replace("_", "")
        if key in table:
            return table[key]()
        if key in ("quadrance", "quadranced"):
            return cls.quadrance(d)
        if key in ("x2y2z2", "x2y2+z2"):
            return cls.x2y2_plus_z2()
        raise UsageError(f"unknown distance polynomial {name!r}")

    def __call__(self, vec: Sequence[int], p: int) -> int:
        total = 0
        for mono, c in self.terms:
            t = c
            for v, e in zip(vec, mono):
                t = t * pow(v, e, p)
            total += t
        return total % p

    def values(self, diffs: np.ndarray, p: int) -> np.ndarray:
        """Evaluate on each row of ``diffs`` (already reduced mod p)."""
        dtype = np.int64 if p < (1 << 31) else object
        diffs = diffs.astype(dtype)
        out = np.zeros(diffs.shape[0], dtype=dtype)
        for mono, c in self.terms:
            t = np.full(diffs.shape[0], c % p, dtype=dtype)
            for i, e in enumerate(mono):
                for _ in range(e):
                    t = t * diffs[:, i] % p
            out = (out + t) % p
        return out


def _value_set(f: DistancePolynomial, diffs: np.ndarray, p: int) -> frozenset[int]:
    return frozenset(int(v) for v in np.unique(f.values(diffs % p, p)))


def _check_vars(f: DistancePolynomial, dim: int) -> None:
    if f.nvars != dim:
        raise UsageError(f"polynomial in {f.nvars} variables applied to points of dimension {dim}")


# ---------------------------------------------------------------------------
# pinned distances


@dataclass(frozen=True)
class PinnedResult:
    pin: AffinePoint
    values: frozenset[int]
    ratio: Decimal
    violated: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return len(self.values)


def pinned_values(E: PointSet, f: DistancePolynomial, pin: Sequence[int]) -> frozenset[int]:
    """f(pin - E)."""
    _check_vars(f, E.dim)
    p = E.field.p
    if not len(E):
        return frozenset()
    return _value_set(f, np.asarray(pin, dtype=np.int64) - E.array(), p)


def pinned_distance_best(E: PointSet, f: DistancePolynomial, require_mod4: bool = True,
                         threads: int = 1) -> PinnedResult:
    """The pin of E maximizing |f(pin - E)| (smallest pin among ties)."""
    if not len(E):
        raise UsageError("pinned distances need a nonempty point set")
    if E.dim != 2:
        raise UsageError("pinned distances are planar")
    _check_vars(f, 2)
    p = E.field.p
    if require_mod4 and p % 4 != 3:
        raise UsageError(f"p = {p} is not 3 mod 4; pass the override to run anyway")

    pins = list(E)

    def sizes(chunk):
        return [len(pinned_values(E, f, q)) for q in chunk]

    if threads > 1 and len(pins) > 1:
        step = -(-len(pins) // threads)
        with ThreadPoolExecutor(threads) as ex:
            counts = [c for part in ex.map(sizes, [pins[i:i + step] for i in range(0, len(pins), step)]) for c in part]
    else:
        counts = sizes(pins)
    best = max(range(len(pins)), key=lambda i: (counts[i], [-v for v in pins[i]]))
    pin = pins[best]
    values = pinned_values(E, f, pin)
    lower = evaluate(BoundId.PinnedLower815, BoundParams(size_p=len(E), p=p)).total
    _, violated = applicability(BoundId.PinnedLower815, BoundParams(size_p=len(E), p=p))
    return PinnedResult(pin, values, Decimal(len(values)) / lower, tuple(violated))


# ---------------------------------------------------------------------------
# two-set distances with one set on the plane z = 0

# (pin, t) -> plane curves whose union is {(x, y) : f((x, y, 0) - pin) = t}
CurveConstructor = Callable[[Sequence[int], int], list]


def hyperbola_pair_family(F: PrimeField) -> CurveConstructor:
    """Curves of x^2 y^2 + z^2 restricted to z = 0 around a pin.

    ((x - a)(y - b))^2 = t - c^2 is the pair of hyperbolas
    (x - a)(y - b) = +-s when t - c^2 = s^2 != 0, empty when t - c^2 is a
    non-square, and the degenerate cross x = a or y = b when t = c^2
    (returned as no curves; those incidences are reported separately).
    """
    p = F.p

    def build(pin, t):
        a, b, c = pin
        rhs = (t - c * c) % p
        if rhs == 0:
            return []
        s = F.sqrt(rhs)
        if s is None:
            return []
        return [HyperbolaSpec(F, a, b, s), HyperbolaSpec(F, a, b, -s)]
    return build


def quadrance_circle_family(F: PrimeField) -> CurveConstructor:
    """Circles (x - a)^2 + (y - b)^2 = t - c^2 cut from spheres on z = 0."""
    p = F.p

    def build(pin, t):
        a, b, c = pin
        r = (t - c * c) % p
        return [] if r == 0 else [CircleSpec(F, (a, b), r)]
    return build


@dataclass(frozen=True)
class PlanarDistanceResult:
    values: frozenset[int]
    curve_count: int  # curves summed over pins (a multiset: sum_p |C_p|)
    incidences: int | None  # I(E, C) over that multiset
    degenerate_pairs: int | None  # pairs (e, pin) not on any curve of C_pin
    pairs: int  # |E||F|
    bound: BoundValue | None
    violated: tuple[str, ...]
    note: str = ""

    @property
    def incidence_accounting_ok(self) -> bool | None:
        """Every pair (e, pin) is on exactly one curve of C_pin or counted as degenerate."""
        if self.incidences is None:
            return None
        return self.incidences + self.degenerate_pairs == self.pairs


DEGREE_NOTE = ("f(x - pin) restricted to z = 0 has degree 4, not 2; each level set is "
               "decomposed into translate-hyperbolas (x-a)(y-b) = +-s")


def planar_two_set_distances(E: PointSet, F: PointSet, f: DistancePolynomial | None = None,
                             family: CurveConstructor | None = None) -> PlanarDistanceResult:
    """f(E - F) for E on the plane z = 0 and arbitrary F in F_p^3."""
    f = f or DistancePolynomial.x2y2_plus_z2()
    if E.dim != 3 or F.dim != 3:
        raise UsageError("both sets must lie in F_p^3")
    if any(pt[2] for pt in E):
        raise UsageError("E must lie on the plane z = 0")
    _check_vars(f, 3)
    Fld = E.field
    p = Fld.p
    note = ""
    if family is None:
        if f == DistancePolynomial.x2y2_plus_z2():
            family = hyperbola_pair_family(Fld)
            note = DEGREE_NOTE
        elif f == DistancePolynomial.quadrance(3):
            family = quadrance_circle_family(Fld)
    values: set[int] = set()
    if not len(E) or not len(F):
        return PlanarDistanceResult(frozenset(), 0, 0 if family else None, 0 if family else None, 0, None, (), note)
    Earr = E.array()
    planar = [(x, y) for x, y, _ in E]
    curve_count = incidences = degenerate = 0
    for pin in F:
        level = f.values((Earr - np.asarray(pin, dtype=np.int64)) % p, p)
        values.update(int(v) for v in level)
        if family is None:
            continue
        covered = np.zeros(len(planar), dtype=bool)
        for t in sorted(set(int(v) for v in level)):
            for curve in family(pin, t):
                curve_count += 1
                on = np.array([curve.contains(q) for q in planar], dtype=bool)
                incidences += int(on.sum())
                covered |= on
        degenerate += int((~covered).sum())
    nE, nF = len(E), len(F)
    prm = BoundParams(size_p=nE, size_c=nF, p=p)
    bound = evaluate(BoundId.PlanarDistanceLower, prm)
    _, violated = applicability(BoundId.PlanarDistanceLower, prm)
    if family is None:
        return PlanarDistanceResult(frozenset(values), 0, None, None, nE * nF, bound, tuple(violated), note)
    return PlanarDistanceResult(frozenset(values), curve_count, incidences, degenerate, nE * nF, bound,
                                tuple(violated), note)


# ---------------------------------------------------------------------------
# polynomial images


@dataclass(frozen=True)
class ImageResult:
    image: frozenset[int]
    sumset: PointSet
    pruned: PointSet
    axis_points: int  # points of E on x = 0 or y = 0
    bound: BoundValue
    violated: tuple[str, ...]


def sumset(E: PointSet, F: PointSet) -> PointSet:
    if E.dim != F.dim:
        raise UsageError("dimension mismatch")
    a, b = E.array(), F.array()
    s = (a[:, None, :] + b[None, :, :]).reshape(-1, E.dim) % E.field.p
    return PointSet(E.field, E.dim, tuple(map(tuple, np.unique(s, axis=0).tolist())))


def polynomial_image_check(E: PointSet, F: PointSet, f: DistancePolynomial) -> ImageResult:
    if not len(E) or not len(F):
        raise UsageError("polynomial images need nonempty E and F")
    if E.dim != 2 or F.dim != 2:
        raise UsageError("polynomial images are planar")
    _check_vars(f, 2)
    p = E.field.p
    image = _value_set(f, E.array(), p)
    S = sumset(E, F)
    axis = sum(1 for x, y in E if x == 0 or y == 0)
    pruned = E
    extra = []
    if f.kind is DistanceKind.PRODUCT:
        pruned = PointSet(E.field, 2, tuple(q for q in E if q[0] and q[1]))
        if 2 * axis > len(E):
            extra.append("lines x = 0, y = 0 hold at most |E|/2 points of E")
    prm = BoundParams(size_p=len(E), size_c=len(F), size_s=len(S), p=p,
                      circles=f.kind is DistanceKind.SUM_SQUARES)
    _, violated = applicability(BoundId.ImageLower, prm)
    return ImageResult(image, S, pruned, axis, evaluate(BoundId.ImageLower, prm), tuple(violated + extra))


# ---------------------------------------------------------------------------
# distance sets in F_q^d


@dataclass(frozen=True)
class DistanceSetResult:
    values: frozenset[int]
    pin: AffinePoint | None  # point of F maximizing |Delta(pin, E)|
    pin_values: frozenset[int]


def distance_set(E: PointSet, F: PointSet, d: int) -> DistanceSetResult:
    """Delta(E, F) = {sum (x_i - y_i)^2} and the best pinned set Delta(pin, E), pin in F."""
    if E.dim != d or F.dim != d:
        raise UsageError(f"points must have dimension {d}")
    if E.field != F.field:
        raise UsageError("sets over different fields")
    f = DistancePolynomial.quadrance(d)
    p = E.field.p
    values: set[int] = set()
    best: tuple[int, AffinePoint | None, frozenset[int]] = (-1, None, frozenset())
    if len(E):
        Earr = E.array()
        for pin in F:
            vals = _value_set(f, Earr - np.asarray(pin, dtype=np.int64), p)
            values |= vals
            if len(vals) > best[0]:
                best = (len(vals), pin, vals)
    return DistanceSetResult(frozenset(values), best[1], best[2])


# ---------------------------------------------------------------------------
# conics defined by a point set


@dataclass(frozen=True)
class BeckReport:
    max_collinear: int
    conic_count: int
    gp_five_tuples: int  # ordered 5-tuples, no three collinear
    lower_bound_value: Decimal  # |P|^{20/7}
    gp_formula: Decimal  # |P|(|P|-1)(|P|-L)(|P|-3L)(|P|-6L), clamped at 0
    violated: tuple[str, ...] = ()
    note: str = ""

    @property
    def gp_formula_holds(self) -> bool:
        return self.gp_five_tuples >= self.gp_formula


def max_collinear(P: PointSet) -> int:
    pts = list(P)
    if len(pts) <= 2:
        return len(pts)
    F = P.field
    best = 2
    for i, a in enumerate(pts):
        # lines through a: count points by direction
        pa = ProjPoint2.from_affine(F, a)
        counts: dict[LineFp2, int] = {}
        for b in pts[i + 1:]:
            line = LineFp2.through(pa, ProjPoint2.from_affine(F, b))
            counts[line] = counts.get(line, 0) + 1
        if counts:
            best = max(best, 1 + max(counts.values()))
    return best


def _beck_fits(P: PointSet, threads: int) -> tuple[int, np.ndarray]:
    p = P.field.p
    arr = P.array()
    xs, ys = arr[:, 0].copy(), arr[:, 1].copy()
    col = _kernels.collinear_table(xs, ys, p)
    n = len(P)
    # balance by 5-subsets started at i: roughly C(n - i - 1, 4)
    weights = [max(1, (n - i - 1) * (n - i - 2) * (n - i - 3) * (n - i - 4)) for i in range(n)]
    parts = max(1, min(n, 4 * threads))
    target = sum(weights) / parts
    bounds_, acc, start = [], 0.0, 0
    for i, w in enumerate(weights):
        acc += w
        if acc >= target or i == n - 1:
            bounds_.append((start, i + 1))
            start, acc = i + 1, 0.0

    def work(rng):
        count, rows = _kernels.gp_five_subsets(col, rng[0], rng[1], True, xs, ys, p)
        return count, (np.unique(rows, axis=0) if len(rows) else rows)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(work, bounds_))
    else:
        results = [work(b) for b in bounds_]
    total = sum(c for c, _ in results)
    rows = np.concatenate([r for _, r in results]) if results else np.zeros((0, 6), dtype=np.int64)
    return total, (np.unique(rows, axis=0) if len(rows) else rows)


def _beck_fits_python(P: PointSet) -> tuple[int, set]:
    F = P.field
    subsets = 0
    conics = set()
    for five in combinations(list(P), 5):
        c = conic_through_five_points(F, five)
        if c is not None:
            subsets += 1
            conics.add(c)
    return subsets, conics


def beck_conic_count(P: PointSet, threads: int = 1) -> BeckReport:
    """Exact number of nondegenerate conics through at least five points of P."""
    if P.dim != 2:
        raise UsageError("conic counting is planar")
    n = len(P)
    L = max_collinear(P)
    prm = BoundParams(size_p=n, max_collinear=L, p=P.field.p)
    lower = evaluate(BoundId.BeckLower207, prm).total
    formula = evaluate(BoundId.GP5TupleLower, prm).total
    _, violated = applicability(BoundId.BeckLower207, prm)
    if n < 5:
        return BeckReport(L, 0, 0, lower, formula, tuple(violated), "fewer than five points")
    if P.field.p < _kernels.MAX_FIT_PRIME:
        subsets, rows = _beck_fits(P, threads)
        count = len(rows)
    else:
        subsets, conics = _beck_fits_python(P)
        count = len(conics)
    return BeckReport(L, count, 120 * subsets, lower, formula, tuple(violated))
