from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import given

from evalpres.coding import (
    decode_rational,
    decode_seq,
    encode_rational,
    encode_seq,
    pair,
    unpair,
)


@given(st.integers(0, 10**12), st.integers(0, 10**12))
def test_pair_round_trip(a, b):
    assert unpair(pair(a, b)) == (a, b)


def test_pair_is_onto_prefix():
    assert sorted(pair(*unpair(n)) for n in range(2000)) == list(range(2000))


@given(st.lists(st.integers(0, 10**6), max_size=8))
def test_seq_round_trip(seq):
    assert decode_seq(encode_seq(seq)) == seq


def test_seq_bijective_prefix():
    assert [encode_seq(decode_seq(n)) for n in range(5000)] == list(range(5000))


@given(st.fractions(max_denominator=10**6))
def test_rational_round_trip(q):
    assert decode_rational(encode_rational(q)) == q


def test_rational_codes_prefix():
    seen = {decode_rational(n) for n in range(3000)}
    assert len(seen) == 3000
    assert {Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2)} <= seen
