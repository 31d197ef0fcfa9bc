import random
from fractions import Fraction

import pytest

from evalpres.cstar import (
    UNIT_INDEX,
    VectorName,
    algebra_diagram_emit,
    consecutive_gap_ok,
    manifest_for,
    name_arith,
    norm,
    opaque_from_manifest,
    poly_norm,
    rational_vector_name,
    substitute,
    unit_name,
)
from evalpres.errors import ManifestError, MissingUnitName, PrecisionLimit
from evalpres.exactnum import two_pow
from evalpres.fixtures import permuted_copy, swap_permutation
from evalpres.starpoly import StarPoly, index_of, poly_from_index

x0 = StarPoly.var(0)
x1 = StarPoly.var(1)


def name_of(p):
    return VectorName.constant(index_of(p))


def distance(A, u, v, k):
    """||u - v|| to within 2^-k through their approximants at k + 2."""
    return poly_norm(A, u.poly(k + 2) - v.poly(k + 2), k + 2)


def test_generator_bounds(unit_algebra, segments_algebra):
    assert unit_algebra.gb.sup_bound == 1 and unit_algebra.gb.unit_is_x0
    assert segments_algebra.gb.sup_bound == Fraction(5, 4)


def test_unit_name(unit_algebra):
    assert unit_name(unit_algebra).to_list(8) == [UNIT_INDEX] * 9
    assert UNIT_INDEX == index_of(x0)


@pytest.mark.parametrize("k", [0, 4, 10])
def test_norm_examples(unit_algebra, segments_algebra, k):
    assert abs(norm(unit_algebra, UNIT_INDEX, k) - 1) <= two_pow(k)
    assert abs(poly_norm(unit_algebra, x1, k) - 1) <= two_pow(k)
    assert abs(poly_norm(segments_algebra, x1, k) - Fraction(5, 4)) <= two_pow(k)


def test_segment_generators_bounded(segments_algebra):
    for n in range(1, 8):
        assert poly_norm(segments_algebra, StarPoly.var(n), 6) <= Fraction(5, 4) + two_pow(6)


def test_norm_is_deterministic(unit_algebra):
    a = [norm(unit_algebra, j, 7) for j in range(60)]
    b = [norm(unit_algebra, j, 7) for j in reversed(range(60))][::-1]
    assert a == b


def test_c_star_identity(unit_algebra):
    rng = random.Random(3)
    for _ in range(50):
        p = poly_from_index(rng.randrange(1, 20_000))
        k = 6
        u = norm(unit_algebra, index_of(p), k + 4)
        uu = poly_norm(unit_algebra, p.adjoint() * p, k)
        # |u^2 - ||u||^2| <= 2^-(k+4) (2 ||u|| + 1)
        tol = two_pow(k) + two_pow(k + 4) * (2 * u + 1)
        assert abs(uu - u * u) <= tol


def test_diagram(unit_algebra):
    entries = list(algebra_diagram_emit(unit_algebra, 3000))
    found = {(e.r, e.j, e.r2) for e in entries}
    assert (Fraction(1, 2), UNIT_INDEX, Fraction(2)) in found
    assert (Fraction(1, 2), index_of(x1), Fraction(2)) in found
    assert (Fraction(1, 4), index_of(x1), Fraction(3, 2)) in found
    for e in entries:
        assert e.r < e.r2
        q = norm(unit_algebra, e.j, 12)
        assert e.r < q + two_pow(12) and q - two_pow(12) < e.r2


def test_name_arith_laws(unit_algebra):
    A = unit_algebra
    u = name_of(x1 * x1 - StarPoly.var(2))
    zero = name_arith(A, "add", u, name_arith(A, "scale", u, -1))
    unit_times = name_arith(A, "mul", unit_name(A), u)
    adj = name_arith(A, "adjoint", name_of(x1))
    for k in range(8):
        assert poly_norm(A, zero.poly(k), k + 2) <= two_pow(k)
        assert distance(A, unit_times, u, k) <= two_pow(k)
        assert distance(A, adj, name_of(x1), k) <= two_pow(k)


def test_rational_vector_name(unit_algebra):
    v = rational_vector_name(unit_algebra, 41)
    assert v(0) == v(7) == 41
    w = name_arith(unit_algebra, "add", v, v)
    assert poly_from_index(w(3)) == 2 * StarPoly.var(2)


def test_name_arith_consecutive_gaps(unit_algebra):
    A = unit_algebra
    # a genuinely convergent name: truncated binary expansion of 1/3 times x1
    third = VectorName(lambda k: index_of(x1 * Fraction(round(Fraction(2 ** (k + 1), 3)), 2 ** (k + 1))))
    prod = name_arith(A, "mul", third, name_of(StarPoly.var(2)))
    total = name_arith(A, "add", third, prod)
    for k in range(6):
        assert consecutive_gap_ok(A, third, k)
        assert consecutive_gap_ok(A, prod, k)
        assert consecutive_gap_ok(A, total, k)


def test_substitute_matches_direct(unit_algebra):
    A = unit_algebra
    p = StarPoly.from_terms([(Fraction(3, 2), [(1, False), (2, True)]), (-1, [(0, False)])])
    v = substitute(A, p, A.generator_names)
    for k in range(6):
        assert distance(A, v, name_of(p), k) <= two_pow(k)


# -- opaque presentations -----------------------------------------------------------------

def test_permuted_copy_norms(unit_algebra):
    perm = swap_permutation([(0, 2), (1, 3)])
    Aop = permuted_copy(unit_algebra, perm)
    # x1 of the copy is x3 of the original, the distance to 1/2
    assert abs(norm(Aop, index_of(x1), 8) - Fraction(1, 2)) <= two_pow(8)
    assert Aop.generator_names(0)(5) == index_of(StarPoly.var(2))


def test_manifest_round_trip(unit_algebra):
    data = manifest_for(unit_algebra, range(20), 8, 4, generators=3)
    A = opaque_from_manifest(data)
    assert A.unit_name.to_list(4) == [UNIT_INDEX] * 5
    for j in range(20):
        assert norm(A, j, 8) == norm(unit_algebra, j, 8)
    with pytest.raises(PrecisionLimit):
        norm(A, 3, 9)
    with pytest.raises(ManifestError):
        norm(A, 500, 4)
    with pytest.raises(PrecisionLimit):
        A.unit_name(5)
    with pytest.raises(ManifestError):
        A.generator_names(3)


def test_manifest_without_unit(unit_algebra):
    data = manifest_for(unit_algebra, range(5), 4, 2)
    del data["unit_name"]
    with pytest.raises(MissingUnitName):
        opaque_from_manifest(data)
    A = opaque_from_manifest(data, require_unit=False)
    with pytest.raises(MissingUnitName):
        unit_name(A)


@pytest.mark.parametrize("data", [{}, {"precision": 3}, {"precision": "x", "norms": {}},
                                  {"precision": 3, "norms": {"1": "1/0"}}])
def test_malformed_manifest(data):
    with pytest.raises(ManifestError):
        opaque_from_manifest(data)


@pytest.mark.slow
def test_diagram_reaches_late_entry(unit_algebra):
    # the code of this entry is about 1.4 million, so fair dovetailing needs stage 21
    target = (Fraction(3, 4), index_of(x1), Fraction(5, 4))
    for e in algebra_diagram_emit(unit_algebra, 400_000):
        if (e.r, e.j, e.r2) == target:
            break
    else:
        pytest.fail("entry not emitted within 400000 entries")
