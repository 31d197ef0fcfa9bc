import random
from fractions import Fraction

import pytest

from evalpres.cstar import UNIT_INDEX, VectorName, poly_norm
from evalpres.errors import EvalPresError, SearchBudgetExhausted
from evalpres.evalmap import (
    ComputableMap,
    ProductName,
    evaluate,
    piecewise_linear,
    point_functional,
    vector_as_map,
    vector_name_from_map,
)
from evalpres.exactnum import Approximation, GaussianRational, two_pow
from evalpres.fixtures import dyadic_name, unit_map
from evalpres.space import PointName, dyadic_point, segment_point
from evalpres.starpoly import StarPoly, index_of, parse_poly, poly_from_index

x1 = StarPoly.var(1)


def const(p):
    return VectorName.constant(index_of(p))


def value_at(p, x, centres):
    """p over the distance generators to ``centres``, evaluated exactly at x."""
    vals = {0: Fraction(1)}
    vals.update({n + 1: abs(x - c) for n, c in enumerate(centres)})
    total = GaussianRational(0)
    for coef, mono in p.terms:
        term = coef
        for j, _ in mono:
            term = term * GaussianRational(vals[j])
        total = total + term
    return total


@pytest.mark.parametrize("k", [0, 3, 8])
def test_evaluate_examples(unit_algebra, k):
    half = dyadic_name(Fraction(1, 2))
    one = evaluate(unit_algebra, ProductName(VectorName.constant(UNIT_INDEX), half), k)
    assert abs(one.value.re - 1) <= two_pow(k)
    f1 = evaluate(unit_algebra, ProductName(const(x1), half), k)
    assert abs(f1.value.re - Fraction(1, 2)) <= two_pow(k)
    p = parse_poly("1/1*x1*x1 - 1/1*x0")
    a = evaluate(unit_algebra, ProductName(const(p), half), k)
    assert abs(a.value.re + Fraction(3, 4)) <= two_pow(k)
    assert a.radius == two_pow(k)


def test_evaluate_random_points(unit_algebra, segments_algebra):
    rng = random.Random(11)
    centres = [dyadic_point(n) for n in range(64)]
    seg_centres = [segment_point(n) for n in range(64)]
    for _ in range(25):
        p = poly_from_index(rng.randrange(1, 30_000))
        if max(p.variables(), default=0) > 60:
            continue
        t = Fraction(rng.randint(0, 97), 97)
        for k in (2, 6, 10):
            a = evaluate(unit_algebra, ProductName(const(p), dyadic_name(t)), k)
            assert (a.value - value_at(p, t, centres)).norm2() <= two_pow(k) ** 2
        n = rng.randrange(200)
        s = segment_point(n)
        a = evaluate(segments_algebra, ProductName(const(p), PointName.constant(n)), 6)
        assert (a.value - value_at(p, s, seg_centres)).norm2() <= two_pow(6) ** 2


def test_evaluate_needs_induced(unit_algebra):
    from evalpres.fixtures import permuted_copy, swap_permutation
    A = permuted_copy(unit_algebra, swap_permutation([(1, 2)]))
    with pytest.raises(EvalPresError):
        evaluate(A, ProductName(const(x1), PointName.constant(0)), 2)


def test_point_functional(unit_algebra):
    zero = point_functional(unit_algebra, PointName.constant(0))
    assert abs(zero(VectorName.constant(UNIT_INDEX), 6).value.re - 1) <= two_pow(6)
    assert abs(zero(const(x1), 6).value.re) <= two_pow(6)
    for m in range(10):
        pm = point_functional(unit_algebra, PointName.constant(m))
        for n in range(10):
            dn = const(StarPoly.var(n + 1))
            assert abs(pm(dn, 7).value.re - abs(dyadic_point(n) - dyadic_point(m))) <= two_pow(7)


@pytest.mark.parametrize("text,extra", [("1/1*x0", 1), ("1/1*x1", 1), ("1/1*x1*x1", 2)])
def test_vector_as_map_modulus(unit_algebra, text, extra):
    p = parse_poly(text)
    g = vector_as_map(unit_algebra, const(p))
    for k in range(6):
        assert g.modulus(k) <= k + extra
    # sampled quotients on a 2^-10 grid never break the modulus
    grid = [Fraction(i, 1024) for i in range(0, 1025, 8)]
    for k in range(6):
        step = two_pow(g.modulus(k))
        for x in grid:
            y = min(x + step, Fraction(1))
            assert abs(value_at(p, x, [0]).re - value_at(p, y, [0]).re) <= two_pow(k)


def test_piecewise_linear(unit_algebra):
    knots = [0, 2, 1]  # the points 0, 1/2, 1
    values = [Fraction(0), Fraction(1, 4), Fraction(1)]
    p = piecewise_linear(unit_algebra, knots, values)
    centres = [dyadic_point(n) for n in range(200)]
    for x, v in [(0, 0), (1, 1), (Fraction(1, 2), Fraction(1, 4)), (Fraction(3, 4), Fraction(5, 8))]:
        assert value_at(p, Fraction(x), centres) == GaussianRational(v)


def test_name_from_map_simple(unit_algebra):
    unit = vector_name_from_map(unit_algebra, vector_as_map(unit_algebra, VectorName.constant(UNIT_INDEX)), 6)
    f1 = vector_name_from_map(unit_algebra, vector_as_map(unit_algebra, const(x1)), 6)
    for k in range(7):
        assert poly_norm(unit_algebra, unit.poly(k) - StarPoly.var(0), k + 2) <= two_pow(k)
        assert poly_norm(unit_algebra, f1.poly(k) - x1, k + 2) <= two_pow(k)
    assert unit.certified == 6 and f1.certified == 6
    assert unit(0) == UNIT_INDEX


def test_name_from_map_round_trip(unit_algebra):
    rng = random.Random(5)
    for _ in range(5):
        v = VectorName.constant(rng.randrange(1, 5000))
        w = vector_name_from_map(unit_algebra, vector_as_map(unit_algebra, v), 5)
        for k in range(6):
            assert poly_norm(unit_algebra, w.poly(k) - v.poly(k), k + 2) <= two_pow(k) + two_pow(k + 2)


def test_name_from_computable_map(unit_algebra):
    # x -> (1 - x)^2 as a computable map, not given by a vector name
    psi = unit_map("reflect")

    def transform(pt):
        y = psi.transform(pt)
        return lambda k: Approximation(dyadic_point(y(k + 2)) ** 2, two_pow(k))

    g = ComputableMap(transform, lambda k: k + 2, source=unit_algebra.base)
    name = vector_name_from_map(unit_algebra, g, 5)
    target = parse_poly("1/1*x2*x2")  # x2 is the distance to 1
    for k in range(6):
        assert poly_norm(unit_algebra, name.poly(k) - target, k + 2) <= two_pow(k) + two_pow(k + 2)


def test_name_search_budget(unit_algebra):
    g = vector_as_map(unit_algebra, const(parse_poly("1/1*x1*x1*x1")))
    name = vector_name_from_map(unit_algebra, g, 8, budget=3, proposals=False)
    with pytest.raises(SearchBudgetExhausted) as err:
        name(2)
    assert err.value.certified == -1
