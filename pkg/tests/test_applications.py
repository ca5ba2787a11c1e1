from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpincidence.applications import (DEGREE_NOTE, DistancePolynomial, beck_conic_count, distance_set, max_collinear,
                                      pinned_distance_best, pinned_values, planar_two_set_distances,
                                      polynomial_image_check, sumset)
from fpincidence.errors import UsageError
from fpincidence.field import PrimeField
from fpincidence.harness.generators import random_points, random_subset
from fpincidence.incidence import PointSet

from oracles import (beck_pair_pinned, best_pin_exhaustive, distinct_five_point_conics, gp_five_tuples_bruteforce,
                     max_collinear_bruteforce, pinned_set, quadrance)

POLYS = {
    "sumsquares": (DistancePolynomial.sum_squares(), lambda v, p: (v[0] ** 2 + v[1] ** 2) % p),
    "product": (DistancePolynomial.product(), lambda v, p: v[0] * v[1] % p),
    "parabola": (DistancePolynomial.parabola(), lambda v, p: (v[0] ** 2 + v[1]) % p),
}


def _pts(seed, p, n, dim=2):
    return random_points(np.random.default_rng(seed), PrimeField(p), n, dim)


def test_polynomial_basics():
    f = DistancePolynomial.x2y2_plus_z2()
    assert f.degree == 4 and f.nvars == 3
    assert f((2, 3, 1), 7) == (4 * 9 + 1) % 7
    assert DistancePolynomial.by_name("sum-squares") == DistancePolynomial.sum_squares()
    assert DistancePolynomial.quadrance(3)((1, 2, 3), 11) == 14 % 11
    with pytest.raises(UsageError):
        DistancePolynomial.by_name("cubic")
    arr = np.array([[1, 2], [3, 4]])
    assert DistancePolynomial.parabola().values(arr, 7).tolist() == [3, 13 % 7]


def test_pinned_single_point():
    F = PrimeField(7)
    res = pinned_distance_best(PointSet(F, 2, ((0, 0),)), DistancePolynomial.sum_squares())
    assert res.pin == (0, 0) and res.values == frozenset({0}) and res.size == 1


def test_pinned_full_plane_f5():
    F = PrimeField(5)
    E = PointSet(F, 2, tuple(product(range(5), repeat=2)))
    f = DistancePolynomial.sum_squares()
    with pytest.raises(UsageError):
        pinned_distance_best(E, f)  # 5 is 1 mod 4
    res = pinned_distance_best(E, f, require_mod4=False)
    oracle = best_pin_exhaustive(list(E), lambda v: (v[0] ** 2 + v[1] ** 2), 5)
    assert res.size == oracle[1] == 5
    assert res.pin == oracle[0] == (0, 0)


@pytest.mark.parametrize("name", list(POLYS))
def test_pinned_matches_recount(name):
    f, g = POLYS[name]
    p = 31
    for seed in range(100):
        E = _pts(seed, p, 60)
        res = pinned_distance_best(E, f)
        assert res.values == pinned_set(res.pin, list(E), lambda v: g(v, p), p)
        best = best_pin_exhaustive(list(E), lambda v: g(v, p), p)
        assert (res.pin, res.size) == best
        assert float(res.ratio) == pytest.approx(res.size / 60 ** (8 / 15), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from(list(POLYS)))
def test_pinned_value_sizes_bounded(seed, name):
    f, _ = POLYS[name]
    E = _pts(seed, 23, 1 + seed % 40)
    for q in E:
        assert 1 <= len(pinned_values(E, f, q)) <= len(E)


def test_pinned_threads_and_errors():
    E = _pts(4, 31, 80)
    f = DistancePolynomial.product()
    assert pinned_distance_best(E, f, threads=3) == pinned_distance_best(E, f)
    with pytest.raises(UsageError):
        pinned_distance_best(PointSet(PrimeField(7), 2, ()), f)


def test_planar_single_pin_reduces_to_pinned_set():
    p = 11
    F = PrimeField(p)
    E2 = _pts(1, p, 30)
    E = PointSet(F, 3, tuple((x, y, 0) for x, y in E2))
    pin = (3, 4, 0)
    res = planar_two_set_distances(E, PointSet(F, 3, (pin,)), DistancePolynomial.quadrance(3))
    assert res.values == pinned_values(E2, DistancePolynomial.sum_squares(), (3, 4))
    assert res.incidence_accounting_ok


def test_planar_x2y2_z2_matches_double_loop():
    p = 7
    F = PrimeField(p)
    rng = np.random.default_rng(3)
    E2 = random_points(rng, F, 25)
    E = PointSet(F, 3, tuple((x, y, 0) for x, y in E2))
    Fs = random_points(rng, F, 20, 3)
    res = planar_two_set_distances(E, Fs)
    brute = {((e[0] - q[0]) ** 2 * (e[1] - q[1]) ** 2 + (e[2] - q[2]) ** 2) % p for e in E for q in Fs}
    assert res.values == brute
    assert res.note == DEGREE_NOTE
    assert res.incidence_accounting_ok
    assert res.pairs == 25 * 20


def test_planar_edge_cases():
    F = PrimeField(7)
    E = PointSet(F, 3, ((1, 2, 0),))
    assert planar_two_set_distances(E, PointSet(F, 3, ())).values == frozenset()
    with pytest.raises(UsageError):
        planar_two_set_distances(PointSet(F, 3, ((1, 2, 3),)), E)


def test_image_examples():
    p = 31
    F = PrimeField(p)
    circle = [(x, y) for x, y in product(range(p), repeat=2) if (x * x + y * y - 5) % p == 0]
    res = polynomial_image_check(PointSet(F, 2, tuple(circle)), PointSet(F, 2, ((0, 0),)),
                                 DistancePolynomial.sum_squares())
    assert res.image == frozenset({5})
    axes = [(0, y) for y in range(5)] + [(x, 0) for x in range(1, 5)]
    res = polynomial_image_check(PointSet(F, 2, tuple(axes)), PointSet(F, 2, ((1, 1),)), DistancePolynomial.product())
    assert res.image == frozenset({0})
    assert len(res.pruned) == 0 and res.axis_points == len(axes)
    with pytest.raises(UsageError):
        polynomial_image_check(PointSet(F, 2, ()), PointSet(F, 2, ((1, 1),)), DistancePolynomial.product())


@pytest.mark.parametrize("name", list(POLYS))
def test_image_and_sumset_double_loop(name):
    f, g = POLYS[name]
    p = 31
    for seed in range(10):
        E, Fs = _pts(seed, p, 40), _pts(seed + 100, p, 25)
        res = polynomial_image_check(E, Fs, f)
        assert res.image == {g(e, p) for e in E}
        brute = {((a + c) % p, (b + d) % p) for a, b in E for c, d in Fs}
        assert set(res.sumset) == brute
        assert len(res.sumset) >= max(len(E), len(Fs))


def test_sumset_dimension_mismatch():
    F = PrimeField(5)
    with pytest.raises(UsageError):
        sumset(PointSet(F, 2, ((1, 1),)), PointSet(F, 3, ((1, 1, 1),)))


def test_distance_set_examples():
    F3 = PrimeField(3)
    assert distance_set(PointSet(F3, 2, ((0, 0),)), PointSet(F3, 2, ((0, 0),)), 2).values == frozenset({0})
    plane = PointSet(F3, 2, tuple(product(range(3), repeat=2)))
    assert distance_set(plane, plane, 2).values == frozenset({0, 1, 2})
    with pytest.raises(UsageError):
        distance_set(plane, plane, 3)


def test_distance_set_d3_double_loop_and_symmetry():
    p = 11
    for seed in range(10):
        E, Fs = _pts(seed, p, 30, 3), _pts(seed + 50, p, 20, 3)
        res = distance_set(E, Fs, 3)
        assert res.values == {quadrance(a, b, p) for a in E for b in Fs}
        assert res.values == distance_set(Fs, E, 3).values
        best = max(len({quadrance(q, e, p) for e in E}) for q in Fs)
        assert len(res.pin_values) == best
        assert res.pin_values == {quadrance(res.pin, e, p) for e in E}


def test_beck_examples():
    F = PrimeField(7)
    on_parabola = PointSet(F, 2, ((0, 0), (1, 1), (2, 4), (3, 2), (4, 2)))
    rep = beck_conic_count(on_parabola)
    assert rep.conic_count == 1 and rep.gp_five_tuples == 120
    three_on_line = PointSet(F, 2, ((0, 0), (1, 1), (2, 2), (3, 2), (4, 2)))
    assert beck_conic_count(three_on_line).conic_count == 0
    small = beck_conic_count(PointSet(F, 2, ((0, 0), (1, 1))))
    assert small.conic_count == 0 and small.note


def test_beck_cartesian_against_pair_oracle():
    p = 101
    F = PrimeField(p)
    rng = np.random.default_rng(8)
    A, B = random_subset(rng, F, 4), random_subset(rng, F, 4)
    P = PointSet(F, 2, tuple(product(A, B)))
    rep = beck_conic_count(P)
    assert rep.conic_count == len(beck_pair_pinned(list(P), p))
    assert rep.max_collinear == max_collinear_bruteforce(list(P), p) == 4
    assert rep.gp_five_tuples == gp_five_tuples_bruteforce(list(P), p)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(5, 14))
def test_beck_random_against_oracles(seed, n):
    p = 13
    P = _pts(seed, p, n)
    rep = beck_conic_count(P)
    assert rep.conic_count == len(beck_pair_pinned(list(P), p))
    assert rep.max_collinear == max_collinear(P) == max_collinear_bruteforce(list(P), p)
    assert rep.gp_five_tuples == gp_five_tuples_bruteforce(list(P), p)
    assert rep.gp_five_tuples <= n * (n - 1) * (n - 2) * (n - 3) * (n - 4)
    assert rep.gp_formula_holds


def test_beck_threads_and_large_prime_fallback():
    P = _pts(2, 101, 18)
    assert beck_conic_count(P, threads=3) == beck_conic_count(P)
    big = PrimeField(2_147_483_659)  # above the fitting kernel's range
    pts = [(x, (x * x + 3 * x + 1) % big.p) for x in range(6)] + [(1, 2)]
    rep = beck_conic_count(PointSet(big, 2, tuple(pts)))
    assert rep.conic_count == len(distinct_five_point_conics(pts, big.p))
    small = _pts(6, 13, 9)
    assert beck_conic_count(small).conic_count == len(distinct_five_point_conics(list(small), 13))
