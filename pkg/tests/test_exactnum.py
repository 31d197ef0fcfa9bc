from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from conftest import gaussians, small_fractions
from evalpres.errors import OracleContractViolation
from evalpres.exactnum import (
    Approximation,
    GaussianRational,
    approx_arith,
    ceil_log2,
    format_gaussian,
    format_rational,
    lg_ceil,
    parse_gaussian,
    parse_rational,
    precision_of,
    sqrt_bounds,
    tighten,
    two_pow,
)

radii = st.fractions(min_value=0, max_value=1, max_denominator=64)


def test_add_bounds_add():
    a = Approximation(1, two_pow(3))
    out = approx_arith("add", a, a)
    assert out.value == GaussianRational(2) and out.radius == two_pow(2)


def test_zero_centered_product():
    a = Approximation(0, two_pow(5))
    out = approx_arith("mul", a, a)
    assert out.value == GaussianRational(0) and out.radius == two_pow(10)


def test_abs_of_real_disk():
    out = approx_arith("abs", Approximation(Fraction(3, 4), two_pow(4)))
    assert out.value == GaussianRational(Fraction(3, 4)) and out.radius == two_pow(4)


def test_unknown_op():
    with pytest.raises(ValueError):
        approx_arith("div", Approximation(1), Approximation(1))


@st.composite
def disk_and_member(draw):
    """A disk together with a point that lies inside it."""
    centre = draw(gaussians)
    radius = draw(radii)
    # a point on a rational direction scaled into the disk
    dx, dy = draw(small_fractions), draw(small_fractions)
    scale = max(abs(dx), abs(dy), Fraction(1))
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=16))
    z = centre + GaussianRational(dx / scale * radius * t / 2, dy / scale * radius * t / 2)
    return Approximation(centre, radius), z


@given(disk_and_member(), disk_and_member(), st.sampled_from(["add", "sub", "mul"]))
def test_binary_ops_are_sound(d1, d2, op):
    (a, x), (b, y) = d1, d2
    assert a.contains(x) and b.contains(y)
    exact = {"add": x + y, "sub": x - y, "mul": x * y}[op]
    assert approx_arith(op, a, b).contains(exact)


@given(disk_and_member())
def test_unary_ops_are_sound(d):
    a, x = d
    assert approx_arith("conj", a).contains(x.conj())
    out = approx_arith("abs", a)
    assert out.value.im == 0
    lo, hi = out.value.re - out.radius, out.value.re + out.radius
    # |x| in [lo, hi], compared through squares to stay exact
    assert hi >= 0 and (lo <= 0 or lo * lo <= x.norm2()) and x.norm2() <= hi * hi


@given(gaussians, gaussians, radii, radii, radii)
def test_mul_monotone_in_input_bound(x, y, ra, rb, extra):
    narrow = Approximation(x, ra) * Approximation(y, rb)
    wide = Approximation(x, ra + extra) * Approximation(y, rb)
    assert wide.radius >= narrow.radius


@given(st.fractions(min_value=Fraction(1, 10**6), max_value=10**6))
def test_ceil_log2(q):
    e = ceil_log2(q)
    assert two_pow(-e) >= q > two_pow(-(e - 1))


def test_lg_ceil_and_precision_of():
    assert lg_ceil(Fraction(1, 2)) == 0
    assert lg_ceil(5) == 3
    assert precision_of(two_pow(7)) == 7
    assert precision_of(Fraction(3, 1024)) == 8
    assert precision_of(Fraction(0)) is None


@given(st.fractions(min_value=0, max_value=100, max_denominator=1000), st.integers(1, 40))
def test_sqrt_bounds(s, bits):
    lo, hi = sqrt_bounds(s, bits)
    assert lo * lo <= s <= hi * hi
    assert hi - lo <= two_pow(bits)


@given(st.fractions(max_denominator=10**6))
def test_rational_round_trip(q):
    text = format_rational(q)
    assert "/" in text and parse_rational(text) == q


@given(gaussians)
def test_gaussian_round_trip(z):
    assert parse_gaussian(format_gaussian(z)) == z


@pytest.mark.parametrize("text", ["", "1/0", "0.5", "x"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_tighten_third():
    third = Fraction(1, 3)

    def refine(m):
        return Approximation(Fraction(round(third * 2**m), 2**m), two_pow(m))

    q = tighten(refine(1), 2, refine)
    assert abs(q.re - third) <= Fraction(1, 4)


def test_tighten_exact_stream():
    v = GaussianRational(Fraction(5, 7), 1)
    assert tighten(Approximation.exact(v), 9, lambda m: Approximation.exact(v)) == v


def test_tighten_detects_bad_stream():
    def refine(m):
        # alternates between two disjoint disks that never shrink
        return Approximation((-1) ** m, Fraction(1, 4))

    with pytest.raises(OracleContractViolation):
        tighten(Approximation(0, 1), 5, refine, cap=10)


def test_tighten_detects_stalled_stream():
    with pytest.raises(OracleContractViolation):
        tighten(Approximation(0, 1), 5, lambda m: Approximation(0, 1), cap=8)
