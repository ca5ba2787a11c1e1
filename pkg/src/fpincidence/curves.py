"""Plane conics and the special curve families built on them.

A :class:`Conic` is the projective curve

    a x^2 + b xy + c y^2 + d xz + e yz + f z^2 = 0

read affinely at z = 1.  Circles, translate-parabolas, translate-hyperbolas
and Moebius graphs all convert to conics; spheres live in F_p^d and are
handled on their own.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence, Union

from .errors import DegenerateInputError, UsageError
from .field import MatrixModP, PrimeField, nullspace
from .projective import (
    AffinePoint,
    Hyperplane,
    LineFp2,
    ProjPoint2,
    collinear,
    normalize_first,
)


class ConicType(enum.Enum):
    ELLIPSE = "NondegenerateEllipse"
    PARABOLA = "NondegenerateParabola"
    HYPERBOLA = "NondegenerateHyperbola"
    DEGENERATE = "Degenerate"


_BY_INFINITY = {0: ConicType.ELLIPSE, 1: ConicType.PARABOLA, 2: ConicType.HYPERBOLA}


@dataclass(frozen=True)
class ConicClass:
    """Classification of a conic.

    ``infinity_points`` counts the points on z = 0; it is in {0, 1, 2} for
    nondegenerate conics and equals p + 1 when the whole line at infinity
    is a component.
    """

    tag: ConicType
    matrix_rank: int
    infinity_points: int

    @property
    def nondegenerate(self) -> bool:
        return self.tag is not ConicType.DEGENERATE


@dataclass(frozen=True)
class Conic:
    field: PrimeField
    a: int
    b: int
    c: int
    d: int
    e: int
    f: int

    def __post_init__(self) -> None:
        vec = normalize_first(
            (self.a, self.b, self.c, self.d, self.e, self.f), self.field.p
        )
        for name, v in zip("abcdef", vec):
            object.__setattr__(self, name, v)

    @classmethod
    def from_coeffs(cls, F: PrimeField, coeffs: Sequence[int]) -> "Conic":
        if len(coeffs) != 6:
            raise UsageError("a conic has six coefficients")
        return cls(F, *(int(v) % F.p for v in coeffs))

    @property
    def coeffs(self) -> tuple[int, int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def evaluate(self, x: int, y: int, z: int = 1) -> int:
        return (
            self.a * x * x + self.b * x * y + self.c * y * y
            + self.d * x * z + self.e * y * z + self.f * z * z
        ) % self.field.p

    def contains(self, pt: ProjPoint2 | Sequence[int]) -> bool:
        if isinstance(pt, ProjPoint2):
            return self.evaluate(*pt.coords) == 0
        return self.evaluate(pt[0], pt[1]) == 0

    def matrix(self) -> MatrixModP:
        """Twice the symmetric matrix of the quadratic form (same rank, p odd)."""
        a, b, c, d, e, f = self.coeffs
        return MatrixModP.from_rows(
            self.field, [[2 * a, b, d], [b, 2 * c, e], [d, e, 2 * f]]
        )

    def classify(self) -> ConicClass:
        return classify(self)

    @property
    def is_nondegenerate(self) -> bool:
        return self.matrix().det() != 0

    def affine_points(self) -> list[AffinePoint]:
        return _conic_affine_points(self)

    def points_at_infinity(self) -> list[ProjPoint2]:
        F, p = self.field, self.field.p
        a, b, c = self.a, self.b, self.c
        pts = []
        if a == 0:
            pts.append(ProjPoint2(F, 1, 0, 0))
        # [x:1:0] with a x^2 + b x + c = 0
        pts.extend(ProjPoint2(F, x, 1, 0) for x in _quadratic_roots(F, a, b, c))
        return sorted(pts, key=lambda q: q.coords)

    def projective_points(self) -> list[ProjPoint2]:
        F = self.field
        pts = [ProjPoint2(F, x, y, 1) for x, y in self.affine_points()]
        return sorted(pts + self.points_at_infinity(), key=lambda q: q.coords)

    def __repr__(self) -> str:
        return f"Conic(p={self.field.p}, {self.coeffs})"


def _quadratic_roots(F: PrimeField, a: int, b: int, c: int) -> list[int]:
    """Roots in F_p of a t^2 + b t + c, all of F_p when the polynomial vanishes."""
    p = F.p
    a, b, c = a % p, b % p, c % p
    if a == 0:
        if b == 0:
            return list(range(p)) if c == 0 else []
        return [-c * pow(b, -1, p) % p]
    disc = (b * b - 4 * a * c) % p
    s = F.sqrt(disc)
    if s is None:
        return []
    inv2a = pow(2 * a, -1, p)
    return sorted({(-b + s) * inv2a % p, (-b - s) * inv2a % p})


def _conic_affine_points(conic: Conic) -> list[AffinePoint]:
    F, p = conic.field, conic.field.p
    a, b, c, d, e, f = conic.coeffs
    out = []
    for x in range(p):
        # c y^2 + (b x + e) y + (a x^2 + d x + f) = 0
        for y in _quadratic_roots(F, c, b * x + e, a * x * x + d * x + f):
            out.append((x, y))
    return out


def classify(conic: Conic) -> ConicClass:
    rank = conic.matrix().rank()
    n_inf = len(conic.points_at_infinity())
    if rank < 3:
        return ConicClass(ConicType.DEGENERATE, rank, n_inf)
    return ConicClass(_BY_INFINITY[n_inf], rank, n_inf)


def all_conics(F: PrimeField):
    """Every conic over F_p up to scalar, i.e. (p^6 - 1)/(p - 1) of them."""
    p = F.p
    for lead in range(6):
        for tail in product(range(p), repeat=5 - lead):
            yield Conic(F, *((0,) * lead + (1,) + tail))


# ---------------------------------------------------------------------------
# Moebius maps


@dataclass(frozen=True)
class Mobius:
    """The map x -> (a x + b) / (c x + d) with ad - bc != 0, modulo scalars."""

    field: PrimeField
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        p = self.field.p
        if (self.a * self.d - self.b * self.c) % p == 0:
            raise DegenerateInputError("Moebius map needs ad - bc != 0")
        for name, v in zip("abcd", normalize_first((self.a, self.b, self.c, self.d), p)):
            object.__setattr__(self, name, v)

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def is_affine(self) -> bool:
        """c == 0: the graph is a line, not a conic through both infinity points."""
        return self.c == 0

    def __call__(self, x: int) -> int | None:
        p = self.field.p
        den = (self.c * x + self.d) % p
        if den == 0:
            return None
        return (self.a * x + self.b) * pow(den, -1, p) % p

    def contains(self, pt: Sequence[int]) -> bool:
        x, y = pt
        # y (c x + d) = a x + b has no spurious solution at the pole since ad != bc
        return (y * (self.c * x + self.d) - self.a * x - self.b) % self.field.p == 0

    def affine_points(self) -> list[AffinePoint]:
        return [(x, y) for x in range(self.field.p) if (y := self(x)) is not None]


def all_mobius(F: PrimeField):
    p = F.p
    for a, b, c, d in product(range(p), repeat=4):
        if (a * d - b * c) % p and next(v for v in (a, b, c, d) if v) == 1:
            yield Mobius(F, a, b, c, d)


def mobius_to_conic(m: Mobius) -> Conic:
    """Graph of ``m`` as the conic c xy - a xz + d yz - b z^2 = 0.

    Affine maps (c = 0) are rejected: their graph is a line and the
    projective closure contains the whole line at infinity.
    """
    if m.is_affine:
        raise DegenerateInputError(f"affine Moebius map {m.coeffs} has no conic graph")
    return Conic(m.field, 0, m.c, 0, -m.a, m.d, -m.b)


def conic_to_mobius(conic: Conic) -> Mobius | None:
    if conic.a or conic.c or not conic.is_nondegenerate:
        return None
    # normalized: xy + d xz + e yz + f z^2, i.e. y = (-d x - f) / (x + e)
    return Mobius(conic.field, -conic.d, -conic.f, 1, conic.e)


# ---------------------------------------------------------------------------
# Five-point fitting


def _monomials(x: int, y: int, p: int) -> list[int]:
    return [x * x % p, x * y % p, y * y % p, x % p, y % p, 1]


def conic_through_five_points(F: PrimeField, pts: Sequence[Sequence[int]]) -> Conic | None:
    """The unique conic through five points in general position, else None."""
    pts = [(int(x) % F.p, int(y) % F.p) for x, y in pts]
    if len(pts) != 5:
        raise UsageError("exactly five points are required")
    if len(set(pts)) != 5:
        raise UsageError("points must be pairwise distinct")
    if any(collinear(F, *t) for t in combinations(pts, 3)):
        return None
    M = MatrixModP.from_rows(F, [_monomials(x, y, F.p) for x, y in pts])
    basis = nullspace(M)
    if len(basis) != 1:
        raise AssertionError("five points in general position impose independent conditions")
    return Conic.from_coeffs(F, basis[0])


# ---------------------------------------------------------------------------
# Circle / parabola / hyperbola / sphere families


@dataclass(frozen=True)
class CircleSpec:
    """(x - c1)^2 + (y - c2)^2 = r with r != 0."""

    field: PrimeField
    center: tuple[int, int]
    r: int

    def __post_init__(self) -> None:
        p = self.field.p
        object.__setattr__(self, "center", tuple(v % p for v in self.center))
        object.__setattr__(self, "r", self.r % p)
        if len(self.center) != 2:
            raise UsageError("circle centre must be planar")
        if self.r == 0:
            raise DegenerateInputError("circles need r != 0")

    def contains(self, pt: Sequence[int]) -> bool:
        (c1, c2), (x, y) = self.center, pt
        return ((x - c1) ** 2 + (y - c2) ** 2 - self.r) % self.field.p == 0


@dataclass(frozen=True)
class ParabolaSpec:
    """y = a x^2 + b x + c with a != 0."""

    field: PrimeField
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        p = self.field.p
        for name in "abc":
            object.__setattr__(self, name, getattr(self, name) % p)
        if self.a == 0:
            raise DegenerateInputError("parabolas need a != 0")

    def contains(self, pt: Sequence[int]) -> bool:
        x, y = pt
        return (self.a * x * x + self.b * x + self.c - y) % self.field.p == 0


@dataclass(frozen=True)
class HyperbolaSpec:
    """(x - a)(y - b) = c with c != 0."""

    field: PrimeField
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        p = self.field.p
        for name in "abc":
            object.__setattr__(self, name, getattr(self, name) % p)
        if self.c == 0:
            raise DegenerateInputError("hyperbolas need c != 0")

    def contains(self, pt: Sequence[int]) -> bool:
        x, y = pt
        return ((x - self.a) * (y - self.b) - self.c) % self.field.p == 0


@dataclass(frozen=True)
class Sphere:
    """{x in F_p^d : sum (x_i - centre_i)^2 = r}, d >= 2."""

    field: PrimeField
    center: tuple[int, ...]
    r: int

    def __post_init__(self) -> None:
        p = self.field.p
        if len(self.center) < 2:
            raise UsageError("spheres need dimension >= 2")
        object.__setattr__(self, "center", tuple(v % p for v in self.center))
        object.__setattr__(self, "r", self.r % p)

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, pt: Sequence[int]) -> bool:
        if len(pt) != self.dim:
            raise UsageError(f"point of dimension {len(pt)} vs sphere in dimension {self.dim}")
        return (sum((x - c) ** 2 for x, c in zip(pt, self.center)) - self.r) % self.field.p == 0

    def affine_points(self) -> list[AffinePoint]:
        return [pt for pt in product(range(self.field.p), repeat=self.dim) if self.contains(pt)]


def to_conic(spec: "CircleSpec | ParabolaSpec | HyperbolaSpec") -> Conic:
    F = spec.field
    if isinstance(spec, CircleSpec):
        c1, c2 = spec.center
        return Conic(F, 1, 0, 1, -2 * c1, -2 * c2, c1 * c1 + c2 * c2 - spec.r)
    if isinstance(spec, ParabolaSpec):
        return Conic(F, spec.a, 0, 0, spec.b, -1, spec.c)
    if isinstance(spec, HyperbolaSpec):
        return Conic(F, 0, 1, 0, -spec.b, -spec.a, spec.a * spec.b - spec.c)
    raise UsageError(f"no conic form for {type(spec).__name__}")


Curve = Union[Conic, Mobius, CircleSpec, ParabolaSpec, HyperbolaSpec, Sphere, LineFp2, Hyperplane]


def enumerate_points(curve: Curve) -> list[AffinePoint]:
    """Rational affine points of a curve in lexicographic order."""
    if isinstance(curve, (Conic, Mobius, Sphere)):
        return sorted(curve.affine_points())
    if isinstance(curve, (CircleSpec, ParabolaSpec, HyperbolaSpec)):
        return sorted(to_conic(curve).affine_points())
    if isinstance(curve, LineFp2):
        return sorted(curve.affine_points())
    if isinstance(curve, Hyperplane):
        return [pt for pt in product(range(curve.field.p), repeat=curve.dim) if curve.contains(pt)]
    raise UsageError(f"cannot enumerate {type(curve).__name__}")


def projective_points(curve: Curve) -> list[ProjPoint2]:
    if isinstance(curve, Conic):
        return curve.projective_points()
    if isinstance(curve, (CircleSpec, ParabolaSpec, HyperbolaSpec)):
        return to_conic(curve).projective_points()
    if isinstance(curve, Mobius):
        return mobius_to_conic(curve).projective_points()
    raise UsageError(f"no projective closure for {type(curve).__name__}")
