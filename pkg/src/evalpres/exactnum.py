"""Exact Gaussian-rational arithmetic with worst-case error disks.

Nothing in this module touches floating point.  An :class:`Approximation`
is a Gaussian rational centre plus a rational radius; it stands for every
complex number inside the closed disk.  Operations propagate radii
worst-case, so a disk that contains its target still does after any chain
of operations.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Callable, Optional

from .errors import OracleContractViolation

Precision = int  # k stands for the absolute error bound 2^-k

DEFAULT_TIGHTEN_CAP = 64


@lru_cache(maxsize=4096)
def two_pow(k: int) -> Fraction:
    """Exact 2^-k for any integer k."""
    return Fraction(1, 1 << k) if k >= 0 else Fraction(1 << -k)


def ceil_log2(q) -> int:
    """Smallest integer e with 2^e >= q, for rational q > 0."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    n, d = q.numerator, q.denominator
    # q lies strictly between 2^(e-1) and 2^(e+1)
    e = n.bit_length() - d.bit_length()
    fits = n <= (d << e) if e >= 0 else (n << -e) <= d
    return e if fits else e + 1


def lg_ceil(x) -> int:
    """ceil(log2(max(1, x))), the usual precision surcharge for a factor x."""
    x = Fraction(x)
    return 0 if x <= 1 else ceil_log2(x)


def precision_of(radius: Fraction) -> Optional[int]:
    """Largest k with 2^-k >= radius; None for an exact (zero) radius."""
    if radius == 0:
        return None
    return -ceil_log2(radius)


class GaussianRational:
    """A complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return parse_gaussian(x)
        return cls(x, 0)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        if not self.im and not other.im:
            return GaussianRational(self.re * other.re, 0)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        den = other.norm2()
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conj()
        return GaussianRational(num.re / den, num.im / den)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im) if self.im else self

    def norm2(self) -> Fraction:
        """|z|^2, exact."""
        return self.re * self.re + self.im * self.im

    def abs_bounds(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Rational (lower, upper) bounds on |z| that differ by at most 2^-bits."""
        if not self.im:
            a = abs(self.re)
            return a, a
        if not self.re:
            a = abs(self.im)
            return a, a
        return sqrt_bounds(self.norm2(), bits)

    def abs_upper(self) -> Fraction:
        if not self.im:
            return abs(self.re)
        if not self.re:
            return abs(self.im)
        # any upper bound is sound here; 32 fractional bits keep it tight
        return sqrt_bounds(self.norm2(), 32)[1]

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({format_gaussian(self)!r})"

    def __str__(self):
        return format_gaussian(self)


def sqrt_bounds(s: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Bounds lo <= sqrt(s) <= hi with hi - lo <= 2^-bits."""
    if s < 0:
        raise ValueError("sqrt of negative rational")
    scale = 1 << (2 * bits)
    n = (s.numerator * scale) // s.denominator
    r = isqrt(n)
    lo = Fraction(r, 1 << bits)
    if r * r * s.denominator == s.numerator * scale:
        return lo, lo
    return lo, Fraction(r + 1, 1 << bits)


# -- serialisation -----------------------------------------------------------

def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


_RAT = r"[+-]?\d+(?:/\d+)?"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(_RAT, text):
        raise ValueError(f"not a rational literal: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_gaussian(z: GaussianRational) -> str:
    sign = "-" if z.im < 0 else "+"
    return f"{format_rational(z.re)}{sign}{format_rational(abs(z.im))}i"


_GAUSS = re.compile(rf"^({_RAT})(?:([+-])(\d+(?:/\d+)?)i)?$")
_PURE_IM = re.compile(rf"^({_RAT})i$")


def parse_gaussian(text: str) -> GaussianRational:
    text = text.strip().replace(" ", "")
    m = _GAUSS.match(text)
    if m:
        re_part = parse_rational(m.group(1))
        if m.group(2) is None:
            return GaussianRational(re_part, 0)
        im_part = parse_rational(m.group(3))
        return GaussianRational(re_part, -im_part if m.group(2) == "-" else im_part)
    m = _PURE_IM.match(text)
    if m:
        return GaussianRational(0, parse_rational(m.group(1)))
    raise ValueError(f"not a Gaussian rational literal: {text!r}")


# -- approximations ------------------------------------------------------------

class Approximation:
    """A disk ``{z : |z - value| <= radius}``.

    ``bound`` is the Precision view of the radius: the largest k with
    ``radius <= 2^-k``.  The radius itself is kept exactly so that sums of
    bounds do not get rounded up twice.
    """

    __slots__ = ("value", "radius")

    def __init__(self, value, radius=0):
        self.value = GaussianRational.coerce(value)
        self.radius = radius if type(radius) is Fraction else Fraction(radius)
        if self.radius < 0:
            raise ValueError("negative radius")

    @classmethod
    def at_precision(cls, value, k: int) -> "Approximation":
        return cls(value, two_pow(k))

    @classmethod
    def exact(cls, value) -> "Approximation":
        return cls(value, Fraction(0))

    @property
    def bound(self) -> Optional[int]:
        return precision_of(self.radius)

    def contains(self, z) -> bool:
        z = GaussianRational.coerce(z)
        return (z - self.value).norm2() <= self.radius * self.radius

    def within(self, k: int) -> bool:
        return self.radius <= two_pow(k)

    def widen(self, extra) -> "Approximation":
        return Approximation(self.value, self.radius + Fraction(extra))

    def real_interval(self) -> "Interval":
        return Interval(self.value.re - self.radius, self.value.re + self.radius)

    def __add__(self, other):
        return Approximation(self.value + other.value, self.radius + other.radius)

    def __sub__(self, other):
        return Approximation(self.value - other.value, self.radius + other.radius)

    def __neg__(self):
        return Approximation(-self.value, self.radius)

    def __mul__(self, other):
        if isinstance(other, Approximation):
            a, b = self.value, other.value
            ra, rb = self.radius, other.radius
            radius = ra * rb
            if rb:
                radius += a.abs_upper() * rb
            if ra:
                radius += b.abs_upper() * ra
            return Approximation(a * b, radius)
        c = GaussianRational.coerce(other)
        return Approximation(self.value * c, self.radius * c.abs_upper())

    __rmul__ = __mul__

    def conj(self):
        return Approximation(self.value.conj(), self.radius)

    def __abs__(self):
        z = self.value
        if not z.im or not z.re:
            return Approximation(abs(z.re) if not z.im else abs(z.im), self.radius)
        if self.radius:
            bits = max(precision_of(self.radius) + 4, 8)
        else:
            bits = DEFAULT_TIGHTEN_CAP
        lo, hi = sqrt_bounds(z.norm2(), bits)
        return Approximation(lo, self.radius + (hi - lo))

    def __repr__(self):
        return f"Approximation({format_gaussian(self.value)} ± {format_rational(self.radius)})"


class Interval:
    """Closed rational interval ``[lo, hi]``."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo, self.hi = lo, hi

    @classmethod
    def around(cls, centre, k: int) -> "Interval":
        e = two_pow(k)
        return cls(centre - e, centre + e)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __eq__(self, other):
        return isinstance(other, Interval) and (self.lo, self.hi) == (other.lo, other.hi)

    def __repr__(self):
        return f"Interval({format_rational(self.lo)}, {format_rational(self.hi)})"


def approx_arith(op: str, a: Approximation, b: Optional[Approximation] = None) -> Approximation:
    """Apply ``op`` (add, sub, mul, conj, abs) with worst-case error propagation."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "conj":
        return a.conj()
    if op == "abs":
        return abs(a)
    raise ValueError(f"unknown operation {op!r}")


def disks_meet(a: Approximation, b: Approximation) -> bool:
    s = a.radius + b.radius
    return (a.value - b.value).norm2() <= s * s


def tighten(
    a: Approximation,
    k: int,
    refine: Callable[[int], Approximation],
    cap: int = DEFAULT_TIGHTEN_CAP,
) -> GaussianRational:
    """Return a Gaussian rational within 2^-k of the target of ``a``.

    ``refine(m)`` must return approximations of the same target whose radii
    go to zero as m grows.  Queries run m = k, k+1, ..., k+cap; a stream
    that never gets tight enough, or whose disks stop overlapping, is
    reported as an oracle-contract violation.
    """
    if a.within(k):
        return a.value
    prev = a
    for m in range(k, k + cap + 1):
        cur = refine(m)
        if not disks_meet(prev, cur):
            raise OracleContractViolation(
                f"refinement at {m} is inconsistent with the previous approximation"
            )
        if cur.within(k):
            return cur.value
        prev = cur
    raise OracleContractViolation(
        f"refinement did not reach 2^-{k} within {cap} steps"
    )
