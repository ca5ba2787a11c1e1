"""Compiled inner loops for incidence counting.

Every curve kind is reduced to a linear form: a point is on a curve iff
``sum_k coef[k] * feat[k] == 0 (mod p)``, with the point features
(monomials such as x^2, xy, ...) and curve coefficients both reduced
mod p.  Products stay below 2^64 for p < 2^32, so the accumulator only
needs a reduction every ``chunk`` products.
"""

from __future__ import annotations

import numpy as np
from numba import njit

UINT64_MAX = (1 << 64) - 1
MAX_KERNEL_PRIME = 1 << 32


def reduction_chunk(p: int) -> int:
    """How many products (each < (p-1)^2) fit on top of a residue < p in uint64."""
    sq = (p - 1) ** 2
    if sq == 0:
        return 1 << 30
    return max(1, (UINT64_MAX - (p - 1)) // sq)


@njit(nogil=True, cache=True)
def curve_counts(coef, feat, p, chunk):
    """Number of points on each curve.

    coef: (n_curves, m) uint64, feat: (n_points, m) uint64, both reduced mod p.
    Curves outer, points inner; feature rows are contiguous per point.
    """
    nc, m = coef.shape
    npts = feat.shape[0]
    out = np.zeros(nc, dtype=np.int64)
    zero = np.uint64(0)
    if chunk >= m:
        for j in range(nc):
            cnt = 0
            for i in range(npts):
                acc = zero
                for k in range(m):
                    acc += coef[j, k] * feat[i, k]
                if acc % p == zero:
                    cnt += 1
            out[j] = cnt
        return out
    for j in range(nc):
        cnt = 0
        for i in range(npts):
            acc = zero
            used = 0
            for k in range(m):
                acc += coef[j, k] * feat[i, k]
                used += 1
                if used == chunk:
                    acc = acc % p
                    used = 0
            if acc % p == zero:
                cnt += 1
        out[j] = cnt
    return out


@njit(nogil=True, cache=True)
def point_counts(coef, feat, p, chunk):
    """Number of curves through each point (same layout as curve_counts)."""
    nc, m = coef.shape
    npts = feat.shape[0]
    out = np.zeros(npts, dtype=np.int64)
    zero = np.uint64(0)
    for j in range(nc):
        for i in range(npts):
            acc = zero
            used = 0
            for k in range(m):
                acc += coef[j, k] * feat[i, k]
                used += 1
                if used == chunk:
                    acc = acc % p
                    used = 0
            if acc % p == zero:
                out[i] += 1
    return out


# ---------------------------------------------------------------------------
# Five-point conic fitting (int64 arithmetic; needs p < 2^31)

MAX_FIT_PRIME = 1 << 31


@njit(nogil=True, cache=True)
def _inv_mod(a, p):
    t, new_t = 0, 1
    r, new_r = p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % p


@njit(nogil=True, cache=True)
def collinear_table(xs, ys, p):
    n = xs.shape[0]
    col = np.zeros((n, n, n), dtype=np.bool_)
    for i in range(n):
        for j in range(n):
            dx1 = (xs[j] - xs[i]) % p
            dy1 = (ys[j] - ys[i]) % p
            for k in range(n):
                dx2 = (xs[k] - xs[i]) % p
                dy2 = (ys[k] - ys[i]) % p
                col[i, j, k] = (dx1 * dy2 % p - dy1 * dx2 % p) % p == 0
    return col


@njit(nogil=True, cache=True)
def _fit(xs, ys, idx, p, out):
    m = np.empty((5, 6), dtype=np.int64)
    for r in range(5):
        x = xs[idx[r]]
        y = ys[idx[r]]
        m[r, 0] = x * x % p
        m[r, 1] = x * y % p
        m[r, 2] = y * y % p
        m[r, 3] = x
        m[r, 4] = y
        m[r, 5] = 1
    pivcol = np.full(5, -1, dtype=np.int64)
    row = 0
    for c in range(6):
        if row == 5:
            break
        piv = -1
        for r in range(row, 5):
            if m[r, c] != 0:
                piv = r
                break
        if piv < 0:
            continue
        for k in range(6):
            m[row, k], m[piv, k] = m[piv, k], m[row, k]
        inv = _inv_mod(m[row, c], p)
        for k in range(6):
            m[row, k] = m[row, k] * inv % p
        for r in range(5):
            if r != row and m[r, c] != 0:
                f = m[r, c]
                for k in range(6):
                    m[r, k] = (m[r, k] - f * m[row, k] % p) % p
        pivcol[row] = c
        row += 1
    if row != 5:
        return False
    free = 0
    for c in range(6):
        is_piv = False
        for r in range(5):
            if pivcol[r] == c:
                is_piv = True
        if not is_piv:
            free = c
            break
    for k in range(6):
        out[k] = 0
    out[free] = 1
    for r in range(5):
        out[pivcol[r]] = (p - m[r, free]) % p
    # first nonzero coefficient to 1
    for k in range(6):
        if out[k] != 0:
            inv = _inv_mod(out[k], p)
            for j in range(6):
                out[j] = out[j] * inv % p
            break
    return True


@njit(nogil=True, cache=True)
def gp_five_subsets(col, i_start, i_stop, fits, xs, ys, p):
    """Walk the 5-subsets {i<j<k<l<m} with i in [i_start, i_stop) and no three collinear.

    Returns their number; when ``fits`` is True also returns the fitted
    conic of each (one row per subset, in walk order).
    """
    n = col.shape[0]
    count = 0
    for i in range(i_start, i_stop):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if col[i, j, k]:
                    continue
                for l in range(k + 1, n):
                    if col[i, j, l] or col[i, k, l] or col[j, k, l]:
                        continue
                    for m in range(l + 1, n):
                        if (col[i, j, m] or col[i, k, m] or col[i, l, m] or col[j, k, m]
                                or col[j, l, m] or col[k, l, m]):
                            continue
                        count += 1
    out = np.zeros((count if fits else 0, 6), dtype=np.int64)
    if not fits:
        return count, out
    idx = np.empty(5, dtype=np.int64)
    row = 0
    for i in range(i_start, i_stop):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if col[i, j, k]:
                    continue
                for l in range(k + 1, n):
                    if col[i, j, l] or col[i, k, l] or col[j, k, l]:
                        continue
                    for m in range(l + 1, n):
                        if (col[i, j, m] or col[i, k, m] or col[i, l, m] or col[j, k, m]
                                or col[j, l, m] or col[k, l, m]):
                            continue
                        idx[0] = i
                        idx[1] = j
                        idx[2] = k
                        idx[3] = l
                        idx[4] = m
                        _fit(xs, ys, idx, p, out[row])
                        row += 1
    return count, out
