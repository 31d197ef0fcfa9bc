import json
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from evalpres.cantor import (
    CantorHomeomorphism,
    CylinderAssignment,
    build_homeomorphism,
    check_assignment,
    dumps_levels,
    initial_cover,
    prefix_code,
    refine,
)
from evalpres.errors import PrecisionLimit, SearchBudgetExhausted
from evalpres.exactnum import two_pow
from evalpres.space import (
    PointName,
    RationalBall,
    cantor_index,
    cantor_standard,
    cantor_variant,
    separated,
)


@given(st.integers(1, 300))
def test_prefix_code_is_a_partition(count):
    codes = prefix_code(count)
    assert len(codes) == max(count, 1)
    assert sum(Fraction(1, 2 ** len(c)) for c in codes) == 1
    for a in codes:
        for b in codes:
            assert a == b or not (a.startswith(b) or b.startswith(a))
    d = (count - 1).bit_length() if count > 1 else 0
    # with count >= 2^d every string has length at least d
    assert min(len(c) for c in codes) >= max(d - 1, 0)


def test_prefix_code_powers_of_two():
    assert prefix_code(4) == ["00", "01", "10", "11"]
    assert prefix_code(3) == ["00", "01", "1"]


@pytest.fixture(scope="module")
def variant_levels():
    phi = build_homeomorphism(cantor_variant(), depth=4)
    return phi


def test_variant_initial_cover():
    h = initial_cover(cantor_variant(), 0)
    assert [e.sigma for e in h.entries] == ["0", "1"]
    assert check_assignment(cantor_variant(), h) == []


def test_variant_levels_satisfy_invariants(variant_levels):
    X = cantor_variant()
    levels = variant_levels.levels
    assert len(levels) == 5
    for s, h in enumerate(levels):
        assert h.level == s
        assert check_assignment(X, h, levels[s - 1] if s else None) == []
        assert all(2 * b.radius <= two_pow(s) for b in h.balls())


def test_variant_children_counts(variant_levels):
    h1, h2 = variant_levels.levels[1], variant_levels.levels[2]
    counts = [sum(e.sigma.startswith(p.sigma) for e in h2.entries) for p in h1.entries]
    assert all(c >= 1 for c in counts) and sum(counts) == len(h2.entries)


def test_refine_from_json_round_trip(variant_levels):
    h = variant_levels.levels[2]
    again = CylinderAssignment.from_json(json.loads(json.dumps(h.to_json())))
    assert again == h
    assert refine(cantor_variant(), again) == variant_levels.levels[3]


def test_standard_space_has_no_strictly_separated_cover():
    # the balls of cantor_standard that isolate a cylinder are never formally disjoint
    C = cantor_standard()
    assert not separated(C, RationalBall(0, Fraction(1)), RationalBall(1, Fraction(1)), 30)
    assert not separated(C, RationalBall(0, Fraction(1, 2)), RationalBall(1, Fraction(1, 2)), 30)
    with pytest.raises(SearchBudgetExhausted):
        initial_cover(C, 0, budget=500)


def test_homeomorphism_separates(variant_levels):
    X = cantor_variant()
    phi = variant_levels
    for s in range(1, 5):
        n = phi.modulus(s)
        b0 = phi.level(s).entry_for("0" * n).ball
        b1 = phi.level(s).entry_for("1" + "0" * (n - 1)).ball
        assert separated(X, b0, b1, 30)


def test_homeomorphism_injective_on_cylinders(variant_levels):
    X = cantor_variant()
    h = variant_levels.level(3)
    balls = h.balls()
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            assert separated(X, balls[i], balls[j], 30)


def test_transform_is_a_name(variant_levels):
    X = cantor_variant()
    phi = variant_levels
    x = PointName.constant(cantor_index("0110"))
    y = phi.transform(x)
    for k in range(5):
        for j in range(k, 5):
            # consecutive centres of the same nested chain
            assert X.metric(y(k), y(j), 30) <= two_pow(k) + two_pow(j)


def test_modulus_and_lazy_levels():
    phi = CantorHomeomorphism(cantor_variant(), depth=2, max_depth=3)
    assert phi.modulus(2) >= 2
    assert len(phi.levels) == 3
    phi.level(3)
    assert len(phi.levels) == 4
    with pytest.raises(PrecisionLimit):
        phi.level(4)


def test_dumps_levels(variant_levels):
    text = dumps_levels(variant_levels.levels[:2])
    rows = [json.loads(line) for line in text.splitlines()]
    assert [r["level"] for r in rows] == [0, 1]
    assert set(rows[0]["entries"][0]) == {"sigma", "center", "radius"}
