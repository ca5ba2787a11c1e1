from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpincidence.curves import CircleSpec, Conic, HyperbolaSpec, ParabolaSpec, Sphere, all_conics, enumerate_points
from fpincidence.errors import UsageError
from fpincidence.field import PrimeField
from fpincidence.harness.generators import random_family, random_points
from fpincidence.incidence import (CurveFamily, CurveKind, PointSet, circle_dual, count_incidences, curve_richness,
                                   dual_parameter, hyperbola_dual, incidence_histogram, parabola_dual,
                                   pinned_duality_check, profile_from_counts, rich_curves, sphere_dual)
from fpincidence.invariants import all_curves, isotropic
from fpincidence.projective import LineFp2

from oracles import conic_value

KINDS = ["lines", "conics", "circles", "parabolas", "hyperbolas", "mobius", "spheres", "hyperplanes"]


def _instance(seed, kind, p=101, max_size=200):
    rng = np.random.default_rng(seed)
    F = PrimeField(p)
    dim = 3 if kind in ("spheres", "hyperplanes") else 2
    P = random_points(rng, F, int(rng.integers(0, max_size + 1)), dim)
    C = random_family(rng, F, kind, int(rng.integers(1, max_size + 1)), dim)
    return P, C


def test_count_examples():
    F = PrimeField(5)
    par = CurveFamily.of([ParabolaSpec(F, 1, 0, 0)])
    assert count_incidences(PointSet(F, 2, ()), par) == 0
    plane = PointSet(F, 2, tuple(product(range(5), repeat=2)))
    assert count_incidences(plane, par) == 5
    assert count_incidences(plane, CurveFamily.of([Conic(F, 1, 0, 0, 0, -1, 0)])) == 5


@pytest.mark.parametrize("kind", KINDS)
def test_fast_equals_naive(kind):
    for seed in range(25):
        P, C = _instance(seed, kind)
        assert np.array_equal(curve_richness(P, C), curve_richness(P, C, engine="naive"))


def test_conic_counts_against_independent_evaluation():
    P, C = _instance(11, "conics")
    p = 101
    expected = [sum(1 for x, y in P if conic_value(c.coeffs, x, y, 1, p) == 0) for c in C]
    assert curve_richness(P, C).tolist() == expected


def test_large_prime_path():
    F = PrimeField(4_294_967_311)  # above the uint64 kernel range: object-dtype path
    rng = np.random.default_rng(0)
    pts = [(int(x), int(x) ** 2 % F.p) for x in rng.integers(0, F.p, size=50)]
    P = PointSet(F, 2, tuple(pts))
    C = CurveFamily.of([Conic(F, 1, 0, 0, 0, -1, 0), Conic(F, 1, 0, 1, 0, 0, -1)])
    assert curve_richness(P, C).tolist() == [50, sum(1 for x, y in pts if (x * x + y * y - 1) % F.p == 0)]


def test_threads_do_not_change_counts():
    P, C = _instance(3, "conics", max_size=500)
    C = random_family(np.random.default_rng(1), PrimeField(101), "conics", 3000)
    assert np.array_equal(curve_richness(P, C, threads=4), curve_richness(P, C))


def test_dimension_mismatch():
    F = PrimeField(7)
    with pytest.raises(UsageError):
        count_incidences(PointSet(F, 2, ((1, 2),)), CurveFamily.of([Sphere(F, (0, 0, 0), 1)]))
    with pytest.raises(UsageError):
        count_incidences(PointSet(F, 3, ((1, 2, 3),)), CurveFamily.of([LineFp2(F, 1, 0, 0)]))
    with pytest.raises(UsageError):
        curve_richness(PointSet(F, 2, ()), CurveFamily.of([LineFp2(F, 1, 0, 0)]), engine="magic")


def test_family_dedups_and_checks_types():
    F = PrimeField(7)
    fam = CurveFamily.of([LineFp2(F, 1, 2, 3), LineFp2(F, 2, 4, 6)])
    assert len(fam) == 1
    with pytest.raises(UsageError):
        CurveFamily(CurveKind.LINES, F, (Conic(F, 1, 0, 0, 0, 0, 1),))
    assert len(PointSet.of(F, [(1, 1), (8, 8), (2, 2)])) == 2


def test_histogram_examples():
    F = PrimeField(7)
    P = PointSet(F, 2, ((0, 0), (1, 1), (2, 4), (5, 5)))
    prof = incidence_histogram(P, CurveFamily.of([ParabolaSpec(F, 1, 0, 0)]))
    assert prof.histogram == {3: 1} and prof.total == 3

    F3 = PrimeField(3)
    conics = CurveFamily.of([c for c in all_conics(F3) if c.is_nondegenerate])
    plane = PointSet(F3, 2, tuple(product(range(3), repeat=2)))
    prof = incidence_histogram(plane, conics)
    naive = sum(1 for c in conics for q in plane if conic_value(c.coeffs, *q, 1, 3) == 0)
    assert sum(k * v for k, v in prof.histogram.items()) == naive == prof.total
    assert prof.family_size == len(conics)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from(KINDS))
def test_profile_identities(seed, kind):
    P, C = _instance(seed, kind, p=31, max_size=80)
    prof = incidence_histogram(P, C)
    assert sum(k * v for k, v in prof.histogram.items()) == prof.total == count_incidences(P, C, engine="naive")
    assert prof.family_size == len(C)
    split = prof.dyadic_split(3)
    assert split.low + split.high == prof.total
    for band in split.bands:
        assert band.lower < band.upper == 2 * band.lower


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from(["circles", "parabolas", "hyperbolas", "conics", "lines"]))
def test_translation_invariance(seed, kind):
    P, C = _instance(seed, kind, p=31, max_size=60)
    rng = np.random.default_rng(seed)
    v = [int(t) for t in rng.integers(0, 31, size=2)]
    F = P.field
    moved = []
    for c in C:
        if kind == "circles":
            moved.append(CircleSpec(F, (c.center[0] + v[0], c.center[1] + v[1]), c.r))
        elif kind == "parabolas":
            # y - v1 = a (x - v0)^2 + b (x - v0) + c
            moved.append(ParabolaSpec(F, c.a, c.b - 2 * c.a * v[0], c.a * v[0] ** 2 - c.b * v[0] + c.c + v[1]))
        elif kind == "hyperbolas":
            moved.append(HyperbolaSpec(F, c.a + v[0], c.b + v[1], c.c))
        elif kind == "lines":
            moved.append(LineFp2(F, c.l1, c.l2, c.l3 - c.l1 * v[0] - c.l2 * v[1]))
        else:
            a, b, cc, d, e, f = c.coeffs
            x0, y0 = v
            moved.append(Conic(F, a, b, cc, d - 2 * a * x0 - b * y0, e - b * x0 - 2 * cc * y0,
                               a * x0 * x0 + b * x0 * y0 + cc * y0 * y0 - d * x0 - e * y0 + f))
    assert count_incidences(P.translate(v), CurveFamily.of(moved, C.kind, F)) == count_incidences(P, C)


def test_rich_curves():
    P, C = _instance(5, "circles", p=31, max_size=150)
    counts = curve_richness(P, C)
    with pytest.raises(UsageError):
        rich_curves(P, C, 0)
    assert len(rich_curves(P, C, int(counts.max()) + 1)) == 0
    prev = None
    for k in range(1, int(counts.max()) + 2):
        rich = rich_curves(P, C, k)
        for c, n in zip(rich.curves, rich.richness):
            on = set(enumerate_points(c)) & set(P)
            assert len(on) == n >= k
        if prev is not None:
            assert set(rich.curves) <= set(prev.curves)
        prev = rich
    prof = profile_from_counts(counts)
    assert [prof.rich_count(k) for k in range(1, 5)] == [len(rich_curves(P, C, k)) for k in range(1, 5)]


# ---------------------------------------------------------------------------
# dualities


def test_circle_dual_examples():
    F7 = PrimeField(7)
    dm = circle_dual(PointSet(F7, 2, ((1, 0),)))
    assert dm.images[(1, 0)] == LineFp2(F7, 1, 0, -4)
    nonzero = [q for q in product(range(7), repeat=2) if q != (0, 0)]
    assert circle_dual(PointSet(F7, 2, tuple(nonzero))).injective
    F5 = PrimeField(5)
    dm5 = circle_dual(PointSet(F5, 2, tuple(q for q in product(range(5), repeat=2) if q != (0, 0))))
    assert dm5.images[(2, 1)] == dm5.images[(4, 2)]
    assert not dm5.injective
    with pytest.raises(UsageError):
        circle_dual(PointSet(F7, 2, ((0, 0),)))


def test_parabola_dual_examples():
    F5 = PrimeField(5)
    dm = parabola_dual(PointSet(F5, 2, ((1, 1), (0, 3))))
    assert dm.images[(1, 1)] == LineFp2(F5, 1, 1, -1)
    assert dm.skipped == ((0, 3),)


def test_hyperbola_dual_examples():
    F5 = PrimeField(5)
    dm = hyperbola_dual(PointSet(F5, 2, ((1, 1), (0, 2), (3, 0))), (0, 0))
    assert set(dm.skipped) == {(0, 2), (3, 0)}
    # hyperbola (a, b) through the pin: c = (0 - a)(0 - b)
    for a, b in product(range(1, 5), repeat=2):
        h = HyperbolaSpec(F5, a, b, a * b)
        assert h.contains((1, 1)) == dm.images[(1, 1)].contains(dual_parameter(h, (0, 0)))


def test_sphere_dual_d2_matches_circle_dual():
    F = PrimeField(7)
    P = PointSet(F, 2, tuple(q for q in product(range(7), repeat=2) if q != (0, 0)))
    circ, sph = circle_dual(P), sphere_dual(P)
    for q in P:
        line, h = circ.images[q], sph.images[q]
        assert line.coeffs == h.normal + (h.offset,)


def test_sphere_dual_d3_collisions_are_isotropic():
    p = 7
    F = PrimeField(p)
    P = PointSet(F, 3, tuple(v for v in product(range(p), repeat=3) if any(v)))
    dm = sphere_dual(P)
    assert len(dm.images) == 342
    for pre in dm.collisions.values():
        assert all(isotropic(v, p) for v in pre)
    assert not dm.injective  # e.g. (1, 2, 3) has 1 + 4 + 9 = 14 = 0 mod 7
    assert dm.images[(1, 2, 3)] == dm.images[(2, 4, 6)]


def test_sphere_dual_random_pairs_p11():
    p = 11
    F = PrimeField(p)
    rng = np.random.default_rng(2)
    for _ in range(300):
        a = tuple(int(v) for v in rng.integers(0, p, size=3))
        q = tuple(int(v) for v in rng.integers(0, p, size=3))
        if not any(q):
            continue
        s = Sphere(F, a, sum(v * v for v in a))  # through the origin
        h = sphere_dual(PointSet(F, 3, (q,))).images[q]
        assert s.contains(q) == h.contains(a)


@pytest.mark.parametrize("kind", [CurveKind.CIRCLES, CurveKind.PARABOLAS, CurveKind.HYPERBOLAS])
def test_pinned_duality_exhaustive_p5(kind):
    F = PrimeField(5)
    P = PointSet(F, 2, tuple(product(range(5), repeat=2)))
    fam = all_curves(F, kind)
    for pin in P:
        chk = pinned_duality_check(P, fam, pin)
        assert chk.consistent, (kind, pin, chk)
