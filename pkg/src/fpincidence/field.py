"""Exact arithmetic and small linear algebra over a prime field F_p.

Elements are stored as canonical residues in ``[0, p)``.  The geometric
modules work on those plain integers for speed and wrap them in
:class:`FieldElem` only at the public boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, UsageError


def is_prime(n: int) -> bool:
    """Deterministic trial division; intended for desk-scale moduli only."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for an odd prime p."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise UsageError(f"modulus must be an int, got {self.p!r}")
        if self.p == 2:
            raise UsageError("characteristic 2 is not supported")
        if not is_prime(self.p):
            raise UsageError(f"{self.p} is not an odd prime")

    @property
    def residue_class_mod4(self) -> int:
        return self.p % 4

    def __call__(self, value: int) -> "FieldElem":
        return FieldElem(value % self.p, self)

    def elements(self) -> Iterator["FieldElem"]:
        for v in range(self.p):
            yield FieldElem(v, self)

    # -- integer-level helpers used by the geometry modules --------------

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise DomainError("zero has no multiplicative inverse")
        return pow(x, -1, self.p)

    def legendre(self, x: int) -> int:
        x %= self.p
        if x == 0:
            return 0
        return 1 if pow(x, (self.p - 1) // 2, self.p) == 1 else -1

    def is_square(self, x: int) -> bool:
        return self.legendre(x) >= 0

    @cached_property
    def _sqrt_table(self) -> dict[int, int] | None:
        if self.p > 1 << 16:
            return None
        table: dict[int, int] = {}
        for r in range((self.p + 1) // 2):
            table.setdefault(r * r % self.p, r)
        return table

    def sqrt(self, x: int) -> int | None:
        """Smallest-representative square root of ``x`` or None for non-squares."""
        x %= self.p
        table = self._sqrt_table
        if table is not None:
            return table.get(x)
        if x == 0:
            return 0
        if self.legendre(x) != 1:
            return None
        r = _tonelli_shanks(x, self.p)
        return min(r, self.p - r)

    @cached_property
    def inverse_table(self) -> list[int]:
        """All inverses mod p (index 0 holds 0); only sensible for small p."""
        inv = [0, 1] + [0] * (self.p - 2)
        for i in range(2, self.p):
            inv[i] = (self.p - (self.p // i) * inv[self.p % i] % self.p) % self.p
        return inv


def _tonelli_shanks(n: int, p: int) -> int:
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass(frozen=True)
class FieldElem:
    value: int
    field: PrimeField = dc_field(repr=False)

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.p:
            raise UsageError(f"{self.value} is not a canonical residue mod {self.field.p}")

    def _coerce(self, other: "FieldElem | int") -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise UsageError("cannot combine elements of different fields")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented  # type: ignore[return-value]

    def _wrap(self, v: int) -> "FieldElem":
        return FieldElem(v % self.field.p, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.value * self.field.inv(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(o * self.field.inv(self.value))

    def __neg__(self) -> "FieldElem":
        return self._wrap(-self.value)

    def __pow__(self, e: int) -> "FieldElem":
        if e < 0:
            return invert(self) ** (-e)
        return self._wrap(pow(self.value, e, self.field.p))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return str(self.value)


def invert(x: FieldElem) -> FieldElem:
    """Multiplicative inverse; raises DomainError on zero."""
    return FieldElem(x.field.inv(x.value), x.field)


def legendre_symbol(x: FieldElem) -> int:
    return x.field.legendre(x.value)


# ---------------------------------------------------------------------------
# Linear algebra


@dataclass(frozen=True)
class MatrixModP:
    """Dense row-major matrix of canonical residues."""

    field: PrimeField
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise UsageError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, F: PrimeField, rows: Sequence[Sequence[int | FieldElem]]) -> "MatrixModP":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise UsageError("ragged rows")
        flat = tuple(int(v) % F.p for r in rows for v in r)
        return cls(F, len(rows), ncols, flat)

    @classmethod
    def identity(cls, F: PrimeField, n: int) -> "MatrixModP":
        return cls(F, n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "MatrixModP":
        return MatrixModP(
            self.field, self.cols, self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "MatrixModP") -> "MatrixModP":
        if self.field != other.field:
            raise UsageError("matrices over different fields")
        if self.cols != other.rows:
            raise UsageError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        p = self.field.p
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                out.append(sum(r[k] * other[k, j] for k in range(self.cols)) % p)
        return MatrixModP(self.field, self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise UsageError("vector length does not match matrix width")
        p = self.field.p
        return tuple(sum(a * b for a, b in zip(self.row(i), vec)) % p for i in range(self.rows))

    def scale(self, lam: int) -> "MatrixModP":
        p = self.field.p
        return MatrixModP(self.field, self.rows, self.cols, tuple(v * lam % p for v in self.entries))

    def rank(self) -> int:
        return len(_rref(self.to_rows(), self.field.p)[1])

    def det(self) -> int:
        if self.rows != self.cols:
            raise UsageError("determinant of a non-square matrix")
        return _det(self.to_rows(), self.field.p)

    def inverse(self) -> "MatrixModP":
        if self.rows != self.cols:
            raise UsageError("inverse of a non-square matrix")
        n, p = self.rows, self.field.p
        aug = [r + [int(i == j) for j in range(n)] for i, r in enumerate(self.to_rows())]
        red, pivots = _rref(aug, p)
        if pivots[:n] != list(range(n)):
            raise DomainError("matrix is singular")
        return MatrixModP(self.field, n, n, tuple(v for r in red[:n] for v in r[n:]))


def _rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form (in place on a copy); returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def _det(rows: list[list[int]], p: int) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv % p
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[c])]
    return det % p


def nullspace(M: MatrixModP) -> list[tuple[int, ...]]:
    """Basis of {x : M x = 0}, one vector per free column."""
    p = M.field.p
    red, pivots = _rref(M.to_rows(), p)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * M.cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc] % p
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class LinearSolution:
    """Outcome of :func:`solve_linear`.

    ``kind`` is ``"unique"``, ``"affine"`` or ``"inconsistent"``.  For the
    first two, ``particular`` solves the system and ``basis`` spans the
    homogeneous solutions (empty when unique).
    """

    kind: str
    particular: tuple[int, ...] | None = None
    basis: tuple[tuple[int, ...], ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.basis) if self.kind != "inconsistent" else -1


def solve_linear(M: MatrixModP, rhs: Sequence[int | FieldElem]) -> LinearSolution:
    if len(rhs) != M.rows:
        raise UsageError(f"rhs has length {len(rhs)}, matrix has {M.rows} rows")
    p = M.field.p
    aug = [list(M.row(i)) + [int(rhs[i]) % p] for i in range(M.rows)]
    if M.rows == 0:
        return LinearSolution("unique" if M.cols == 0 else "affine", (0,) * M.cols,
                              tuple(nullspace(M)))
    red, pivots = _rref(aug, p)
    if M.cols in pivots:
        return LinearSolution("inconsistent")
    x = [0] * M.cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][M.cols]
    basis = tuple(nullspace(M))
    return LinearSolution("unique" if not basis else "affine", tuple(x), basis)


def vectors(F: PrimeField, n: int) -> Iterable[tuple[int, ...]]:
    """All of F_p^n in lexicographic order."""
    from itertools import product

    return product(range(F.p), repeat=n)
