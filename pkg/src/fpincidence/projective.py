"""Points, lines and hyperplanes over F_p, and projective maps of P^2(F_p).

Affine points are plain tuples of canonical residues.  Projective objects
are kept in a normal form so that ``==`` and ``hash`` are projective
equality:

* points: last nonzero coordinate is 1, so ``(a, b)`` reads as ``[a:b:1]``;
* lines, hyperplanes, transforms: first nonzero coefficient is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .errors import DegenerateInputError, DomainError, UsageError
from .field import MatrixModP, PrimeField

AffinePoint = tuple[int, ...]


def normalize_first(vec: Sequence[int], p: int) -> tuple[int, ...]:
    """Scale so the first nonzero entry is 1; raises on the zero vector."""
    for v in vec:
        if v % p:
            inv = pow(v, -1, p)
            return tuple(x * inv % p for x in vec)
    raise DegenerateInputError("zero vector has no projective normal form")


def normalize_last(vec: Sequence[int], p: int) -> tuple[int, ...]:
    for v in reversed(vec):
        if v % p:
            inv = pow(v, -1, p)
            return tuple(x * inv % p for x in vec)
    raise DegenerateInputError("zero vector has no projective normal form")


@dataclass(frozen=True)
class ProjPoint2:
    field: PrimeField
    x: int
    y: int
    z: int

    def __post_init__(self) -> None:
        x, y, z = normalize_last((self.x, self.y, self.z), self.field.p)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @classmethod
    def from_affine(cls, F: PrimeField, pt: Sequence[int]) -> "ProjPoint2":
        if len(pt) != 2:
            raise UsageError("planar points need two coordinates")
        return cls(F, pt[0] % F.p, pt[1] % F.p, 1)

    @property
    def coords(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)

    @property
    def at_infinity(self) -> bool:
        return self.z == 0

    def affine(self) -> AffinePoint | None:
        return None if self.z == 0 else (self.x, self.y)

    def __repr__(self) -> str:
        return f"[{self.x}:{self.y}:{self.z}]"


def all_proj_points(F: PrimeField) -> Iterator[ProjPoint2]:
    """Every point of P^2(F_p) (p^2 + p + 1 of them), ordered by normal-form triple."""
    p = F.p
    pts = [(x, y, 1) for x in range(p) for y in range(p)]
    pts += [(x, 1, 0) for x in range(p)]
    pts.append((1, 0, 0))
    for c in sorted(pts):
        yield ProjPoint2(F, *c)


@dataclass(frozen=True)
class LineFp2:
    """The line l1*X + l2*Y + l3*Z = 0 (affinely l1*x + l2*y + l3 = 0)."""

    field: PrimeField
    l1: int
    l2: int
    l3: int

    def __post_init__(self) -> None:
        a, b, c = normalize_first((self.l1, self.l2, self.l3), self.field.p)
        object.__setattr__(self, "l1", a)
        object.__setattr__(self, "l2", b)
        object.__setattr__(self, "l3", c)

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return (self.l1, self.l2, self.l3)

    @property
    def is_line_at_infinity(self) -> bool:
        return self.l1 == 0 and self.l2 == 0

    def contains(self, pt: ProjPoint2 | Sequence[int]) -> bool:
        if isinstance(pt, ProjPoint2):
            x, y, z = pt.coords
        else:
            x, y = pt
            z = 1
        return (self.l1 * x + self.l2 * y + self.l3 * z) % self.field.p == 0

    def affine_points(self) -> list[AffinePoint]:
        p = self.field.p
        if self.is_line_at_infinity:
            return []
        if self.l2:
            # l1 = 1 or 0 after normalization; solve for y.
            inv = pow(self.l2, -1, p)
            return [(x, -(self.l1 * x + self.l3) * inv % p) for x in range(p)]
        # vertical line x = -l3 (l1 == 1)
        return [(-self.l3 % p, y) for y in range(p)]

    @classmethod
    def through(cls, a: ProjPoint2, b: ProjPoint2) -> "LineFp2":
        if a == b:
            raise DegenerateInputError("a line needs two distinct points")
        x1, y1, z1 = a.coords
        x2, y2, z2 = b.coords
        return cls(a.field, y1 * z2 - z1 * y2, z1 * x2 - x1 * z2, x1 * y2 - y1 * x2)


def collinear(F: PrimeField, a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> bool:
    """True if three affine planar points lie on a common line."""
    return ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) % F.p == 0


@dataclass(frozen=True)
class Hyperplane:
    """The affine hyperplane {x in F_p^d : normal . x + offset = 0}."""

    field: PrimeField
    normal: tuple[int, ...]
    offset: int

    def __post_init__(self) -> None:
        p = self.field.p
        if not any(v % p for v in self.normal):
            raise DegenerateInputError("hyperplane normal must be nonzero")
        vec = normalize_first(tuple(self.normal) + (self.offset,), p)
        object.__setattr__(self, "normal", vec[:-1])
        object.__setattr__(self, "offset", vec[-1])

    @property
    def dim(self) -> int:
        return len(self.normal)

    def contains(self, pt: Sequence[int]) -> bool:
        if len(pt) != self.dim:
            raise UsageError(f"point of dimension {len(pt)} vs hyperplane in dimension {self.dim}")
        return (sum(a * x for a, x in zip(self.normal, pt)) + self.offset) % self.field.p == 0


@dataclass(frozen=True)
class ProjTransform:
    """An element of PGL(3, p); stored with first nonzero matrix entry 1."""

    m: MatrixModP

    def __post_init__(self) -> None:
        if self.m.rows != 3 or self.m.cols != 3:
            raise UsageError("projective transforms of the plane are 3x3")
        if self.m.det() == 0:
            raise DomainError("transform matrix is singular")
        entries = normalize_first(self.m.entries, self.m.field.p)
        object.__setattr__(self, "m", MatrixModP(self.m.field, 3, 3, entries))

    @classmethod
    def from_rows(cls, F: PrimeField, rows: Sequence[Sequence[int]]) -> "ProjTransform":
        return cls(MatrixModP.from_rows(F, rows))

    @classmethod
    def identity(cls, F: PrimeField) -> "ProjTransform":
        return cls(MatrixModP.identity(F, 3))

    @property
    def field(self) -> PrimeField:
        return self.m.field

    def __matmul__(self, other: "ProjTransform") -> "ProjTransform":
        return ProjTransform(self.m @ other.m)

    def inverse(self) -> "ProjTransform":
        return ProjTransform(self.m.inverse())


def apply(t: ProjTransform, pt: ProjPoint2) -> ProjPoint2:
    return ProjPoint2(pt.field, *t.m.apply(pt.coords))


def transform_line(t: ProjTransform, line: LineFp2) -> LineFp2:
    """Image of a line, so that pt in line iff apply(t, pt) in transform_line(t, line)."""
    inv_t = t.m.inverse().transpose()
    return LineFp2(line.field, *inv_t.apply(line.coeffs))


INF_Y = (0, 1, 0)
INF_X = (1, 0, 0)


def two_point_normalization(q1: ProjPoint2, q2: ProjPoint2) -> ProjTransform:
    """A transform sending q1 to [0:1:0] and q2 to [1:0:0].

    Built as the inverse of the matrix with columns (q2, q1, r), where r is
    the first point of P^2 in normal-form order off the line q1 q2.
    """
    if q1 == q2:
        raise DegenerateInputError("two_point_normalization needs distinct points")
    F = q1.field
    for r in all_proj_points(F):
        cols = (q2.coords, q1.coords, r.coords)
        m = MatrixModP.from_rows(F, [[c[i] for c in cols] for i in range(3)])
        if m.det():
            return ProjTransform(m.inverse())
    raise AssertionError("unreachable: P^2 is not a line")
