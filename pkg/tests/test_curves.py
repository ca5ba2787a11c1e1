import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from fpincidence.curves import (CircleSpec, Conic, ConicType, HyperbolaSpec, Mobius, ParabolaSpec, Sphere,
                                all_conics, all_mobius, classify, conic_through_five_points, conic_to_mobius,
                                enumerate_points, mobius_to_conic, projective_points, to_conic)
from fpincidence.errors import DegenerateInputError, UsageError
from fpincidence.field import PrimeField
from fpincidence.projective import ProjPoint2

from oracles import conic_is_nondegenerate, conic_value, projective_triples


def test_classify_examples():
    F5, F7 = PrimeField(5), PrimeField(7)
    par = classify(Conic(F5, 1, 0, 0, 0, -1, 0))
    assert par.tag is ConicType.PARABOLA and par.infinity_points == 1 and par.matrix_rank == 3
    assert Conic(F5, 1, 0, 0, 0, -1, 0).points_at_infinity() == [ProjPoint2(F5, 0, 1, 0)]
    hyp = Conic(F5, 0, 1, 0, 0, 0, -1)
    assert classify(hyp).tag is ConicType.HYPERBOLA
    assert hyp.points_at_infinity() == [ProjPoint2(F5, 0, 1, 0), ProjPoint2(F5, 1, 0, 0)]
    pair = Conic(F7, 1, 0, 1, 0, 0, 0)
    cl = classify(pair)
    assert cl.tag is ConicType.DEGENERATE and cl.matrix_rank == 2
    assert pair.affine_points() == [(0, 0)]


def test_enumerate_examples():
    F5, F7 = PrimeField(5), PrimeField(7)
    assert len(enumerate_points(Conic(F5, 1, 0, 0, 0, -1, 0))) == 5
    assert len(enumerate_points(Conic(F5, 0, 1, 0, 0, 0, -1))) == 4
    circle = Conic(F7, 1, 0, 1, 0, 0, -1)
    pts = enumerate_points(circle)
    assert len(pts) == 8 and pts == sorted(pts)
    assert pts == sorted((x, y) for x in range(7) for y in range(7) if (x * x + y * y - 1) % 7 == 0)


def test_to_conic_examples():
    F7 = PrimeField(7)
    c = to_conic(CircleSpec(F7, (0, 0), 1))
    assert c == Conic(F7, 1, 0, 1, 0, 0, -1)
    assert classify(c).tag is ConicType.ELLIPSE
    assert to_conic(HyperbolaSpec(F7, 0, 0, 1)) == Conic(F7, 0, 1, 0, 0, 0, -1)
    assert to_conic(ParabolaSpec(F7, 1, 0, 0)) == Conic(F7, 1, 0, 0, 0, -1, 0)


@pytest.mark.parametrize("p", [5, 7])
def test_to_conic_same_points_and_nondegenerate(p):
    F = PrimeField(p)
    specs = ([CircleSpec(F, (a, b), r) for a, b, r in product(range(p), range(p), range(1, p))]
             + [ParabolaSpec(F, a, b, c) for a, b, c in product(range(1, p), range(p), range(p))]
             + [HyperbolaSpec(F, a, b, c) for a, b, c in product(range(p), range(p), range(1, p))])
    plane = list(product(range(p), repeat=2))
    for s in specs:
        c = to_conic(s)
        assert c.is_nondegenerate
        assert sorted(q for q in plane if s.contains(q)) == enumerate_points(c)


@pytest.mark.parametrize("p", [7, 11])
def test_circles_nondegenerate_when_p_3_mod_4(p):
    F = PrimeField(p)
    for a, b, r in product(range(p), range(p), range(1, p)):
        assert classify(to_conic(CircleSpec(F, (a, b), r))).nondegenerate


def test_spec_invariants_rejected():
    F = PrimeField(7)
    with pytest.raises(DegenerateInputError):
        CircleSpec(F, (1, 1), 0)
    with pytest.raises(DegenerateInputError):
        ParabolaSpec(F, 0, 1, 1)
    with pytest.raises(DegenerateInputError):
        HyperbolaSpec(F, 1, 1, 7)
    with pytest.raises(DegenerateInputError):
        Mobius(F, 1, 2, 2, 4)
    with pytest.raises(UsageError):
        Sphere(F, (1,), 1)


@pytest.mark.parametrize("p", [3, 5])
def test_point_count_against_bruteforce(p):
    F = PrimeField(p)
    triples = list(projective_triples(p))
    for c in all_conics(F):
        n = sum(1 for x, y, z in triples if conic_value(c.coeffs, x, y, z, p) == 0)
        assert len(c.projective_points()) == n
        assert c.is_nondegenerate == conic_is_nondegenerate(c.coeffs, p)
        if c.is_nondegenerate:
            assert n == p + 1
            affine = {ConicType.ELLIPSE: p + 1, ConicType.PARABOLA: p, ConicType.HYPERBOLA: p - 1}
            assert len(c.affine_points()) == affine[classify(c).tag]


def test_mobius_examples():
    F = PrimeField(5)
    inv = Mobius(F, 0, 1, 1, 0)
    c = mobius_to_conic(inv)
    assert c == Conic(F, 0, 1, 0, 0, 0, -1)
    assert conic_to_mobius(c) == inv
    assert conic_to_mobius(Conic(F, 1, 0, 0, 0, -1, 0)) is None
    assert conic_to_mobius(Conic(F, 0, 1, 0, 0, 0, 0)) is None  # line pair xy = 0
    with pytest.raises(DegenerateInputError):
        mobius_to_conic(Mobius(F, 2, 1, 0, 1))


def test_mobius_set_p3_against_bruteforce():
    p = 3
    F = PrimeField(p)
    through = set()
    for v in product(range(p), repeat=6):
        if not any(v):
            continue
        if conic_value(v, 0, 1, 0, p) == 0 and conic_value(v, 1, 0, 0, p) == 0 and conic_is_nondegenerate(v, p):
            through.add(Conic(F, *v))
    graphs = {mobius_to_conic(m) for m in all_mobius(F) if not m.is_affine}
    assert through == graphs and len(graphs) == 18


@pytest.mark.parametrize("p", [3, 5, 7])
def test_mobius_round_trip(p):
    F = PrimeField(p)
    for m in all_mobius(F):
        if m.is_affine:
            continue
        c = mobius_to_conic(m)
        assert conic_to_mobius(c) == m
        assert sorted(m.affine_points()) == enumerate_points(c)


def test_five_point_examples():
    F = PrimeField(7)
    pts = [(0, 0), (1, 1), (2, 4), (3, 2), (4, 2)]
    assert conic_through_five_points(F, pts) == Conic(F, 1, 0, 0, 0, -1, 0)
    assert conic_through_five_points(F, [(0, 0), (1, 1), (2, 2), (3, 2), (4, 2)]) is None
    with pytest.raises(UsageError):
        conic_through_five_points(F, [(0, 0)] * 5)


@settings(max_examples=200)
@given(st.integers(0, 2 ** 32))
def test_five_point_fit_contains_points_and_is_unique(seed):
    p = 101
    F = PrimeField(p)
    rng = random.Random(seed)
    pts = rng.sample([(x, y) for x in range(p) for y in range(p)], 5)
    c = conic_through_five_points(F, pts)
    if c is None:
        return
    assert all(c.contains(q) for q in pts)
    assert c.is_nondegenerate
    # the fit does not depend on the order of the points
    other = conic_through_five_points(F, list(reversed(pts)))
    assert other == c


def test_projective_points_dispatch():
    F = PrimeField(7)
    assert len(projective_points(Mobius(F, 1, 2, 1, 3))) == 8
    assert len(projective_points(ParabolaSpec(F, 1, 0, 0))) == 8
    with pytest.raises(UsageError):
        projective_points(Sphere(F, (0, 0, 0), 1))


def test_sphere_points():
    F = PrimeField(5)
    s = Sphere(F, (1, 2, 3), 2)
    brute = [v for v in product(range(5), repeat=3) if sum((a - b) ** 2 for a, b in zip(v, (1, 2, 3))) % 5 == 2]
    assert enumerate_points(s) == brute
