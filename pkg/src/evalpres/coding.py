"""Computable bijections between N and the finite objects we enumerate.

Sequences go through bijective base-3 numerals: a numeral over {0, 1, 2}
is split on the digit 2 into binary strings, and each binary string names
a natural number.  Code sizes therefore stay linear in the bit size of the
data, which keeps indices of large polynomials usable.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

import gmpy2


def pair(a: int, b: int) -> int:
    """Cantor pairing N x N -> N."""
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def _nat_to_bits(n: int) -> str:
    return bin(n + 1)[3:]


def _bits_to_nat(s: str) -> int:
    return int("1" + s, 2) - 1


def _ternary_to_nat(s: str) -> int:
    """Bijective base-3: the empty string is 0, digit d counts as d + 1."""
    if not s:
        return 0
    offset = (gmpy2.mpz(3) ** len(s) - 1) // 2
    return int(offset + gmpy2.mpz(s, 3))


def _nat_to_ternary(n: int) -> str:
    if n == 0:
        return ""
    n = gmpy2.mpz(n)
    # length L satisfies (3^L - 1)/2 <= n < (3^(L+1) - 1)/2
    length = max(int(gmpy2.floor(gmpy2.log(2 * n + 1) / gmpy2.log(3))) - 1, 0)
    while (gmpy2.mpz(3) ** (length + 1) - 1) // 2 <= n:
        length += 1
    while (gmpy2.mpz(3) ** length - 1) // 2 > n:
        length -= 1
    rem = n - (gmpy2.mpz(3) ** length - 1) // 2
    digits = rem.digits(3) if rem else ""
    return digits.rjust(length, "0")


def encode_nonempty_seq(seq) -> int:
    if not seq:
        raise ValueError("sequence must be non-empty")
    return _ternary_to_nat("2".join(_nat_to_bits(x) for x in seq))


def decode_nonempty_seq(n: int) -> list[int]:
    return [_bits_to_nat(part) for part in _nat_to_ternary(n).split("2")]


def encode_seq(seq) -> int:
    """All finite sequences, the empty one at 0."""
    return 0 if not seq else encode_nonempty_seq(seq) + 1


def decode_seq(n: int) -> list[int]:
    return [] if n == 0 else decode_nonempty_seq(n - 1)


def continued_fraction(q: Fraction) -> list[int]:
    terms = []
    n, d = q.numerator, q.denominator
    while d:
        a, r = divmod(n, d)
        terms.append(a)
        n, d = d, r
    return terms


def encode_positive_rational(q: Fraction) -> int:
    """Positive rationals via their canonical continued fraction."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("positive rational expected")
    cf = continued_fraction(q)
    if len(cf) == 1:
        return encode_nonempty_seq([cf[0] - 1])
    body = [cf[0]] + [a - 1 for a in cf[1:-1]] + [cf[-1] - 2]
    return encode_nonempty_seq(body)


def decode_positive_rational(n: int) -> Fraction:
    seq = decode_nonempty_seq(n)
    if len(seq) == 1:
        return Fraction(seq[0] + 1)
    cf = [seq[0]] + [b + 1 for b in seq[1:-1]] + [seq[-1] + 2]
    q = Fraction(cf[-1])
    for a in reversed(cf[:-1]):
        q = a + 1 / q
    return q


def encode_rational(q) -> int:
    q = Fraction(q)
    if q == 0:
        return 0
    c = encode_positive_rational(abs(q))
    return 2 * c + 1 if q > 0 else 2 * c + 2


def decode_rational(n: int) -> Fraction:
    if n == 0:
        return Fraction(0)
    c, neg = divmod(n - 1, 2)
    q = decode_positive_rational(c)
    return -q if neg else q
