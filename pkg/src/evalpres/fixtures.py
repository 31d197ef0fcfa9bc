"""Built-in maps and functions used by the CLI, the tests and the demos.

* self-maps of the unit interval: identity, reflect (1 - x), square (x^2);
* on the segments space, s_n(t) = t^n and s_n * Ind_m, where Ind_m is
  the indicator of {0} u J_0 u ... u J_m (continuous on this space);
* an opaque copy of an induced presentation whose generators have been
  re-indexed by a permutation.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from .cstar import PresentedCStar, VectorName, induce, norm, opaque
from .evalmap import ComputableMap
from .exactnum import Approximation, GaussianRational, lg_ceil, two_pow
from .space import (
    PointName,
    dyadic_index,
    dyadic_point,
    segment_bounds,
    segment_point,
    segments,
    unit_interval,
)
from .starpoly import GeneratorBounds, StarPoly, index_of, poly_from_index


# -- self-maps of [0, 1] ------------------------------------------------------------

def _unit_map(label, fn: Callable[[Fraction], Fraction], extra: int) -> ComputableMap:
    """A map [0,1] -> [0,1] that sends dyadics to dyadics and is 2^extra-Lipschitz."""

    def transform(pt):
        return PointName(lambda k: dyadic_index(fn(dyadic_point(pt(k + extra)))))

    X = unit_interval()
    return ComputableMap(transform, lambda k: k + extra, source=X, target=X, label=label)


UNIT_MAPS: Mapping[str, Callable[[], ComputableMap]] = {
    "identity": lambda: _unit_map("identity", lambda x: x, 0),
    "reflect": lambda: _unit_map("reflect", lambda x: 1 - x, 0),
    "square": lambda: _unit_map("square", lambda x: x * x, 1),
}

EXACT_UNIT_MAPS: Mapping[str, Callable[[Fraction], Fraction]] = {
    "identity": lambda x: x,
    "reflect": lambda x: 1 - x,
    "square": lambda x: x * x,
}


def unit_map(label: str) -> ComputableMap:
    try:
        return UNIT_MAPS[label]()
    except KeyError:
        raise ValueError(f"unknown built-in map {label!r}; choose from {sorted(UNIT_MAPS)}") from None


def dyadic_name(x: Fraction) -> PointName:
    """Point name of a rational x in [0, 1] through dyadic truncations."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("point must lie in [0, 1]")

    def fn(k):
        scale = 1 << (k + 1)
        return dyadic_index(Fraction(round(x * scale), scale))

    return PointName(fn)


# -- functions on the segments space --------------------------------------------------

def _component(t: Fraction):
    """m with t in J_m, or None for t = 0."""
    if t == 0:
        return None
    m = 0
    while segment_bounds(m)[0] > t:
        m += 1
    return m


def power_map(n: int, indicator: int | None = None) -> ComputableMap:
    """s_n(t) = t^n on the segments space, optionally times Ind_indicator."""
    X = segments()
    # |t^n - u^n| <= n (5/4)^(n-1) |t - u|
    extra = lg_ceil(n * Fraction(5, 4) ** max(n - 1, 0)) if n else 0
    gap = 0 if indicator is None else indicator + 4

    def modulus(k):
        return max(k + extra, gap)

    def transform(pt):
        def at(k):
            t = segment_point(pt(modulus(k)))
            val = t ** n
            if indicator is not None:
                m = _component(t)
                if m is not None and m > indicator:
                    val = Fraction(0)
            return Approximation(GaussianRational(val), two_pow(k))
        return at

    label = f"s{n}" if indicator is None else f"s{n}*Ind{indicator}"
    return ComputableMap(transform, modulus, source=X, label=label)


def exact_power(n: int, t: Fraction, indicator: int | None = None) -> Fraction:
    if indicator is not None:
        m = _component(t)
        if m is not None and m > indicator:
            return Fraction(0)
    return Fraction(t) ** n


# -- re-indexed opaque copies -----------------------------------------------------------

def rename(p: StarPoly, perm: Callable[[int], int]) -> StarPoly:
    return StarPoly({tuple((perm(j), s) for j, s in m): c for c, m in p.terms})


def swap_permutation(pairs) -> Callable[[int], int]:
    table = {}
    for a, b in pairs:
        table[a], table[b] = b, a
    return lambda j: table.get(j, j)


def permuted_copy(A_plus: PresentedCStar, perm: Callable[[int], int],
                  inverse: Callable[[int], int] | None = None,
                  label: str = "permuted") -> PresentedCStar:
    """Opaque copy of A_plus whose generator x_n is A_plus's x_perm(n).

    The norm oracle only ever sees polynomial indices; unit and generator
    names are the constant names of the re-indexed variables.
    """
    inverse = inverse or perm

    def norm_oracle(j, k):
        return norm(A_plus, index_of(rename(poly_from_index(j), perm)), k)

    def generator_name(n):
        return VectorName.constant(index_of(StarPoly.var(inverse(n))))

    gb = GeneratorBounds(A_plus.gb.sup_bound, A_plus.gb.lip_bound, False)
    return opaque(norm_oracle, generator_name(0), generator_name, gb, label=label)


def standard_fixtures():
    """Induced presentations of the built-in line spaces."""
    return {"unit_interval": induce(unit_interval()), "segments": induce(segments())}
