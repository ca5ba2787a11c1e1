"""Independent reference computations used by the tests.

Nothing here imports the package; everything is plain loops or numpy
with its own arithmetic.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np


def egcd_inverse(a: int, p: int) -> int:
    old_r, r, old_s, s = a % p, p, 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise ZeroDivisionError(a)
    return old_s % p


def euler_legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def projective_triples(p: int):
    """Representatives of P^2(F_p): one per line through the origin of F_p^3."""
    seen = set()
    for v in product(range(p), repeat=3):
        if not any(v):
            continue
        lead = next(x for x in v if x)
        inv = egcd_inverse(lead, p)
        key = tuple(x * inv % p for x in v)
        if key not in seen:
            seen.add(key)
            yield key


def conic_value(c, x, y, z, p):
    a, b, cc, d, e, f = c
    return (a * x * x + b * x * y + cc * y * y + d * x * z + e * y * z + f * z * z) % p


def brute_projective_count(c, p: int) -> int:
    return sum(1 for x, y, z in projective_triples(p) if conic_value(c, x, y, z, p) == 0)


def det3(m, p: int) -> int:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) % p


def conic_is_nondegenerate(c, p: int) -> bool:
    a, b, cc, d, e, f = c
    return det3([[2 * a, b, d], [b, 2 * cc, e], [d, e, 2 * f]], p) != 0


def canonical(vec, p: int) -> tuple[int, ...]:
    lead = next(v for v in vec if v % p)
    inv = egcd_inverse(lead, p)
    return tuple(v * inv % p for v in vec)


def affine_points_bruteforce(pred, p: int, dim: int = 2):
    return [pt for pt in product(range(p), repeat=dim) if pred(pt)]


# ---------------------------------------------------------------------------
# conics through >= 5 points, enumerated through point pairs


def _inv3(m, p):
    """Inverse of a 3x3 matrix mod p via the adjugate."""
    d = det3(m, p)
    inv_d = egcd_inverse(d, p)
    adj = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != j]
            cols = [c for c in range(3) if c != i]
            minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
            adj[i][j] = (-1) ** (i + j) * minor * inv_d % p
    return adj


def _frame_to_infinity(q1, q2, p):
    """T with T q1 ~ (0,1,0) and T q2 ~ (1,0,0) (affine q1, q2)."""
    a = (q1[0], q1[1], 1)
    b = (q2[0], q2[1], 1)
    for r in projective_triples(p):
        M = [[b[i], a[i], r[i]] for i in range(3)]
        if det3(M, p):
            return _inv3(M, p)
    raise AssertionError


def beck_pair_pinned(points, p: int) -> set[tuple[int, ...]]:
    """All nondegenerate conics containing at least five of ``points``.

    For each pair (q1, q2), send q1, q2 to the two axis points at infinity;
    a nondegenerate conic through both becomes xy + D x + E y + F = 0 with
    F != DE.  Each triple of further (finite) images fixes (D, E, F) by
    Cramer's rule.  Candidates are mapped back, canonicalized, merged and
    re-counted.
    """
    pts = [tuple(q) for q in points]
    n = len(pts)
    if n < 5:
        return set()
    assert p < 1400, "row keys are packed into int64"
    inv2 = egcd_inverse(2, p)
    inv_table = np.array([0] + [egcd_inverse(v, p) for v in range(1, p)], dtype=np.int64)
    found = []
    P = np.array(pts, dtype=np.int64)
    for i, j in combinations(range(n), 2):
        T = np.array(_frame_to_infinity(pts[i], pts[j], p), dtype=np.int64)
        others = [k for k in range(n) if k not in (i, j)]
        hom = np.concatenate([P[others], np.ones((len(others), 1), dtype=np.int64)], axis=1)
        img = hom @ T.T % p
        finite = img[:, 2] != 0
        img = img[finite]
        if len(img) < 3:
            continue
        zinv = inv_table[img[:, 2]]
        xs, ys = img[:, 0] * zinv % p, img[:, 1] * zinv % p
        tri = np.array(list(combinations(range(len(xs)), 3)), dtype=np.int64)
        X, Y = xs[tri], ys[tri]
        R = (-X * Y) % p
        # rows (x, y, 1) . (D, E, F) = -xy
        def d3(c0, c1, c2):
            return (c0[:, 0] * (c1[:, 1] * c2[:, 2] - c1[:, 2] * c2[:, 1])
                    - c1[:, 0] * (c0[:, 1] * c2[:, 2] - c0[:, 2] * c2[:, 1])
                    + c2[:, 0] * (c0[:, 1] * c1[:, 2] - c0[:, 2] * c1[:, 1])) % p
        ones = np.ones_like(X)
        det = d3(X, Y, ones)
        ok = det != 0
        X, Y, R, ones, det = X[ok], Y[ok], R[ok], ones[ok], det[ok]
        if not len(X):
            continue
        dinv = inv_table[det]
        D = d3(R, Y, ones) * dinv % p
        E = d3(X, R, ones) * dinv % p
        F = d3(X, Y, R) * dinv % p
        nd = (F - D * E) % p != 0
        D, E, F = D[nd], E[nd], F[nd]
        # symmetric matrix (doubled) of xy + D xz + E yz + F z^2, pulled back by T
        Q = np.zeros((len(D), 3, 3), dtype=np.int64)
        Q[:, 0, 1] = Q[:, 1, 0] = 1
        Q[:, 0, 2] = Q[:, 2, 0] = D
        Q[:, 1, 2] = Q[:, 2, 1] = E
        Q[:, 2, 2] = 2 * F % p
        Qb = np.matmul(np.matmul(T.T, Q) % p, T) % p
        coeffs = np.stack([Qb[:, 0, 0] * inv2 % p, Qb[:, 0, 1], Qb[:, 1, 1] * inv2 % p,
                           Qb[:, 0, 2], Qb[:, 1, 2], Qb[:, 2, 2] * inv2 % p], axis=1)
        found.append(_canonical_rows(coeffs, inv_table, p))
    if not found:
        return set()
    rows = np.concatenate(found)
    weights = p ** np.arange(5, -1, -1, dtype=np.int64)
    _, first = np.unique(rows @ weights, return_index=True)
    cand = rows[first]
    x, y = P[:, 0], P[:, 1]
    mons = np.stack([x * x, x * y, y * y, x, y, np.ones_like(x)], axis=1) % p
    on = ((cand @ mons.T) % p == 0).sum(axis=1)
    out = set()
    for c in cand[on >= 5].tolist():
        if conic_is_nondegenerate(c, p):
            out.add(tuple(c))
    return out


def _canonical_rows(rows: np.ndarray, inv_table: np.ndarray, p: int) -> np.ndarray:
    lead_col = np.argmax(rows != 0, axis=1)
    lead = rows[np.arange(len(rows)), lead_col]
    return rows * inv_table[lead][:, None] % p


def max_collinear_bruteforce(points, p: int) -> int:
    pts = [tuple(q) for q in points]
    if len(pts) <= 2:
        return len(pts)
    best = 2
    for a, b in combinations(pts, 2):
        on = sum(1 for c in pts if ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) % p == 0)
        best = max(best, on)
    return best


def gp_five_tuples_bruteforce(points, p: int) -> int:
    pts = [tuple(q) for q in points]

    def col(a, b, c):
        return ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) % p == 0

    n = sum(1 for five in combinations(pts, 5) if not any(col(*t) for t in combinations(five, 3)))
    return 120 * n


# ---------------------------------------------------------------------------
# distance-type sets by double loops


def pinned_set(pin, E, f, p):
    return {f(tuple((a - b) % p for a, b in zip(pin, e))) % p for e in E}


def best_pin_exhaustive(E, f, p):
    best = None
    for q in sorted(E):
        s = len(pinned_set(q, E, f, p))
        if best is None or s > best[1]:
            best = (q, s)
    return best


def quadrance(u, v, p):
    return sum((a - b) ** 2 for a, b in zip(u, v)) % p


def kernel_basis(rows, p):
    """A basis of the nullspace of an integer matrix mod p, by Gauss-Jordan elimination."""
    m = [[v % p for v in r] for r in rows]
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = egcd_inverse(m[r][c], p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vec = [0] * ncols
        vec[free] = 1
        for i, c in enumerate(pivots):
            vec[c] = -m[i][free] % p
        basis.append(vec)
    return basis


def five_point_rows(points):
    return [(x * x, x * y, y * y, x, y, 1) for x, y in points]


def no_three_collinear(points, p: int) -> bool:
    return all(det3([(a[0], a[1], 1), (b[0], b[1], 1), (c[0], c[1], 1)], p) != 0
               for a, b, c in combinations(points, 3))


def distinct_five_point_conics(points, p: int) -> set[tuple[int, ...]]:
    """Conics through 5-subsets with no three collinear, each fitted independently."""
    out = set()
    for sub in combinations(points, 5):
        if not no_three_collinear(sub, p):
            continue
        basis = kernel_basis(five_point_rows(sub), p)
        out.add(canonical(basis[0], p))
    return out
