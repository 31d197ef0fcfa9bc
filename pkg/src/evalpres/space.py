"""Presented compact metric spaces.

A :class:`PresentedSpace` is known only through a metric oracle on the
indices of its distinguished points, optionally a total boundedness
function (TBF) and, for subsets of the real line, the exact coordinates
of its points.  Built-in presentations: the unit interval, two
presentations of Cantor space and the space of segments
X = {0} u J_0 u J_1 u ... with J_n = [2^-n - 2^-(n+2), 2^-n + 2^-(n+2)].
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

from . import coding
from .config import default_budgets
from .errors import MissingTBF, SearchBudgetExhausted
from .exactnum import Interval, format_rational, parse_rational, two_pow

MetricOracle = Callable[[int, int, int], Fraction]
TotalBoundednessFunction = Callable[[int], Sequence[int]]


@dataclass(frozen=True)
class PresentedSpace:
    label: str
    metric: MetricOracle
    diam_bound: Fraction
    tbf: Optional[TotalBoundednessFunction] = None
    # exact real coordinate of each distinguished point, for spaces that
    # sit isometrically inside the real line
    coordinate: Optional[Callable[[int], Fraction]] = field(default=None, compare=False)
    # the metric oracle returns exact distances whatever the precision asked
    exact_metric: bool = field(default=False, compare=False)

    def metric_interval(self, i: int, j: int, k: int) -> Interval:
        """Interval of width <= 2^-k*2 around d(p_i, p_j); exact for i == j."""
        if i == j:
            return Interval(0, 0)
        q = self.metric(i, j, k)
        e = two_pow(k)
        return Interval(max(q - e, Fraction(0)), q + e)

    def net(self, j: int) -> Sequence[int]:
        if self.tbf is None:
            raise MissingTBF(f"space {self.label!r} has no total boundedness function")
        return self.tbf(j)

    def with_tbf(self, tbf: TotalBoundednessFunction) -> "PresentedSpace":
        return PresentedSpace(self.label, self.metric, self.diam_bound, tbf, self.coordinate,
                              self.exact_metric)


@dataclass(frozen=True)
class RationalBall:
    center: int
    radius: Fraction

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    def to_json(self) -> dict:
        return {"center": self.center, "radius": format_rational(self.radius)}

    @classmethod
    def from_json(cls, d) -> "RationalBall":
        return cls(int(d["center"]), parse_rational(d["radius"]))


@dataclass(frozen=True)
class MetricDiagramEntry:
    r: Fraction
    j: int
    k: int
    r2: Fraction

    def to_json(self) -> str:
        return json.dumps({"r": format_rational(self.r), "j": self.j,
                           "k": self.k, "r2": format_rational(self.r2)})


class PointName:
    """A fast-Cauchy name k -> index of a distinguished point within 2^-k."""

    def __init__(self, fn: Callable[[int], int], limit: Optional[int] = None):
        self._fn = fn
        self._cache: dict[int, int] = {}
        self.limit = limit

    @classmethod
    def constant(cls, n: int) -> "PointName":
        return cls(lambda k: n)

    @classmethod
    def from_list(cls, indices: Sequence[int]) -> "PointName":
        indices = list(indices)
        if not indices:
            raise ValueError("empty point name")

        def fn(k):
            if k >= len(indices):
                from .errors import PrecisionLimit
                raise PrecisionLimit(f"point name only defined up to precision {len(indices) - 1}")
            return indices[k]

        return cls(fn, limit=len(indices) - 1)

    def __call__(self, k: int) -> int:
        if k < 0:
            k = 0
        n = self._cache.get(k)
        if n is None:
            n = self._cache[k] = self._fn(k)
        return n

    def to_list(self, upto: int) -> list[int]:
        return [self(k) for k in range(upto + 1)]


# -- certificates on balls -------------------------------------------------------

def formal_inclusion(s: PresentedSpace, b: RationalBall, b2: RationalBall, k: int) -> bool:
    """True ("yes") when d(c, c') + r < r' is certified at precision k; False means unknown."""
    return s.metric_interval(b.center, b2.center, k).hi + b.radius < b2.radius


def formally_disjoint(s: PresentedSpace, b: RationalBall, b2: RationalBall, k: int) -> bool:
    """True ("yes") when d(c, c') - r - r' > 0 is certified at precision k."""
    return s.metric_interval(b.center, b2.center, k).lo - b.radius - b2.radius > 0


def _precisions(s: PresentedSpace, max_k: int):
    return (max_k,) if s.exact_metric else range(max_k + 1)


def formally_included(s, b, b2, max_k: Optional[int] = None) -> bool:
    """Formal inclusion at some precision up to ``max_k``."""
    max_k = default_budgets().precision_cap if max_k is None else max_k
    # with an exact metric the enclosures only shrink, so the last one decides
    for k in _precisions(s, max_k):
        iv = s.metric_interval(b.center, b2.center, k)
        if iv.hi + b.radius < b2.radius:
            return True
        if iv.lo + b.radius >= b2.radius:
            return False
    return False


def separated(s, b, b2, max_k: Optional[int] = None) -> bool:
    """Formal disjointness at some precision up to ``max_k``."""
    max_k = default_budgets().precision_cap if max_k is None else max_k
    for k in _precisions(s, max_k):
        iv = s.metric_interval(b.center, b2.center, k)
        if iv.lo - b.radius - b2.radius > 0:
            return True
        if iv.hi - b.radius - b2.radius <= 0:
            return False
    return False


def verify_cover(s: PresentedSpace, balls: Sequence[RationalBall],
                 depth: Optional[int] = None, max_k: Optional[int] = None) -> bool:
    """True if some TBF net, each of whose 2^-j balls is formally inside a listed ball, exists.

    Sound but incomplete: False means no certificate was found up to net
    level ``depth``.
    """
    budgets = default_budgets()
    depth = budgets.net_level_cap if depth is None else depth
    balls = list(balls)
    if not balls:
        return False
    for j in range(depth + 1):
        r = two_pow(j)
        ok = True
        last = 0
        for m in s.net(j):
            small = RationalBall(m, r)
            # the ball that worked last time is the likeliest to work again
            if formally_included(s, small, balls[last], max_k):
                continue
            for i, b in enumerate(balls):
                if formally_included(s, small, b, max_k):
                    last = i
                    break
            else:
                ok = False
                break
        if ok:
            return True
    return False


# -- diagrams --------------------------------------------------------------------

def _decode_metric_code(c: int):
    a, rest = coding.unpair(c)
    j, rest = coding.unpair(rest)
    k, b = coding.unpair(rest)
    return (coding.decode_positive_rational(a), j, k, coding.decode_positive_rational(b))


def diagram_emit(s: PresentedSpace, budget: int, precision_cap: Optional[int] = None) -> Iterator[MetricDiagramEntry]:
    """Enumerate ``budget`` certified entries r < d(p_j, p_k) < r' of the diagram.

    Stage t revisits every code below 2^t at precision t // 2, so every
    true entry is eventually certified; codes shown false are dropped.
    """
    if budget <= 0:
        return
    cap = default_budgets().precision_cap if precision_cap is None else precision_cap
    emitted, dead = set(), set()
    count, t = 0, 0
    while True:
        prec = min(t // 2, cap)
        for c in range(1 << t):
            if c in emitted or c in dead:
                continue
            r, j, k, r2 = _decode_metric_code(c)
            if r >= r2 or (j == k):
                dead.add(c)
                continue
            iv = s.metric_interval(j, k, prec)
            if r < iv.lo and iv.hi < r2:
                emitted.add(c)
                yield MetricDiagramEntry(r, j, k, r2)
                count += 1
                if count >= budget:
                    return
            elif iv.hi <= r or iv.lo >= r2:
                dead.add(c)
        t += 1


# -- analysis on the space -----------------------------------------------------------

def max_over_space(s: PresentedSpace, g: Callable[[int, int], Fraction],
                   modulus: Callable[[int], int], k: int) -> Fraction:
    """Maximum of a real-valued computable map to within 2^-k.

    ``g(n, t)`` approximates the value at p_n to within 2^-t and
    ``modulus`` is a modulus of continuity of g.
    """
    level = max(modulus(k + 1), 0)
    best = None
    for n in s.net(level):
        v = g(n, k + 1)
        if best is None or v > best:
            best = v
    return best


def point_name_from_distances(s: PresentedSpace, dist: Callable[[int, int], Fraction],
                              budget: Optional[int] = None) -> PointName:
    """Name of the point x whose distances d(x, p_n) ``dist`` approximates.

    For each k the first index n with d(x, p_n) <= 2^-k certified at
    precision k + 2 is returned; candidates are rejected early once a
    coarser query already shows d(x, p_n) > 2^-k.
    """
    budget = default_budgets().point_search if budget is None else budget
    memo: dict = {}

    def d(n, j):
        key = (n, j)
        if key not in memo:
            memo[key] = dist(n, j)
        return memo[key]

    def find(k):
        target = two_pow(k)
        for n in range(budget):
            for j in range(k + 3):
                q = d(n, j)
                e = two_pow(j)
                if q + e <= target:
                    return n
                if q - e > target:
                    break
        raise SearchBudgetExhausted(
            f"no distinguished point within 2^-{k} among the first {budget}", certified=k - 1)

    return PointName(find)


# -- built-in presentations ------------------------------------------------------

def dyadic_point(n: int) -> Fraction:
    """p_0 = 0, p_1 = 1, then the odd multiples of 2^-l for l = 1, 2, ..."""
    if n < 2:
        return Fraction(n)
    l = (n - 1).bit_length()  # n in [2^(l-1)+1, 2^l]
    a = 2 * (n - (1 << (l - 1)) - 1) + 1
    return Fraction(a, 1 << l)


def dyadic_index(q) -> int:
    q = Fraction(q)
    if q == 0:
        return 0
    if q == 1:
        return 1
    d = q.denominator
    if not 0 < q < 1 or d & (d - 1):
        raise ValueError(f"{q} is not a dyadic point of [0, 1]")
    l = d.bit_length() - 1
    return (1 << (l - 1)) + (q.numerator - 1) // 2 + 1


@lru_cache(maxsize=None)
def _grid_indices(j: int) -> tuple[int, ...]:
    return tuple(dyadic_index(Fraction(i, 1 << j)) for i in range((1 << j) + 1))


def _line_metric(coord):
    coord = lru_cache(maxsize=1 << 20)(coord)

    def metric(i, j, k):
        return abs(coord(i) - coord(j))
    return metric


@lru_cache(maxsize=None)
def unit_interval() -> PresentedSpace:
    return PresentedSpace("unit_interval", _line_metric(dyadic_point), Fraction(1),
                          _grid_indices, dyadic_point, exact_metric=True)


def segment_bounds(n: int) -> tuple[Fraction, Fraction]:
    c, w = Fraction(1, 1 << n), Fraction(1, 1 << (n + 2))
    return c - w, c + w


def segment_point(n: int) -> Fraction:
    """p_0 = 0; p_(1 + pair(m, i)) is the i-th dyadic point of J_m rescaled."""
    if n == 0:
        return Fraction(0)
    m, i = coding.unpair(n - 1)
    a, _ = segment_bounds(m)
    return a + Fraction(1, 1 << (m + 1)) * dyadic_point(i)


def segment_index(m: int, u) -> int:
    """Index of a + |J_m| * u for a dyadic u in [0, 1]."""
    return 1 + coding.pair(m, dyadic_index(u))


@lru_cache(maxsize=None)
def _segments_tbf(j: int) -> tuple[int, ...]:
    # J_n sits inside B(0; 2^-j) once n >= j + 1
    out = [0]
    for n in range(j + 1):
        steps = max(0, j - n - 1)
        out.extend(segment_index(n, Fraction(i, 1 << steps)) for i in range((1 << steps) + 1))
    return tuple(out)


@lru_cache(maxsize=None)
def segments() -> PresentedSpace:
    return PresentedSpace("segments", _line_metric(segment_point), Fraction(5, 4),
                          _segments_tbf, segment_point, exact_metric=True)


def cantor_bits(n: int, length: int) -> str:
    """First ``length`` coordinates of the standard point p_n."""
    return "".join(str((n >> i) & 1) for i in range(length))


def cantor_index(bits: str) -> int:
    """Standard index of the eventually-zero sequence starting with ``bits``."""
    return sum(1 << i for i, b in enumerate(bits) if b == "1")


def _first_difference(a: int, b: int) -> int:
    x = a ^ b
    return (x & -x).bit_length() - 1


def gray(v: int) -> int:
    return v ^ (v >> 1)


def gray_inverse(s: int) -> int:
    v, shift = s, 1
    while s >> shift:
        v ^= s >> shift
        shift += 1
    return v


@lru_cache(maxsize=None)
def _power_fraction(base: int, e: int) -> Fraction:
    return Fraction(1, base ** e)


def _cantor_standard_metric(i, j, k):
    if i == j:
        return Fraction(0)
    return _power_fraction(2, _first_difference(i, j))


def _cantor_standard_tbf(j):
    # B(p; 2^-j) is the cylinder of the first j + 1 coordinates of p
    return range(1 << (j + 1))


@lru_cache(maxsize=None)
def cantor_standard() -> PresentedSpace:
    return PresentedSpace("cantor_standard", _cantor_standard_metric, Fraction(1),
                          _cantor_standard_tbf, exact_metric=True)


def _variant_metric(i, j, k):
    if i == j:
        return Fraction(0)
    return _power_fraction(3, _first_difference(gray(i), gray(j)))


@lru_cache(maxsize=None)
def _variant_tbf(j: int) -> tuple[int, ...]:
    c = 0
    while 3 ** c <= 1 << j:
        c += 1
    return tuple(gray_inverse(s) for s in range(1 << c))


@lru_cache(maxsize=None)
def cantor_variant() -> PresentedSpace:
    """Same points, index v naming standard point gray(v), metric 3^-(first difference)."""
    return PresentedSpace("cantor_variant", _variant_metric, Fraction(1), _variant_tbf,
                          exact_metric=True)


BUILTINS = {
    "unit_interval": unit_interval,
    "cantor_standard": cantor_standard,
    "cantor_variant": cantor_variant,
    "segments": segments,
}


def builtin(label: str) -> PresentedSpace:
    try:
        return BUILTINS[label]()
    except KeyError:
        raise ValueError(f"unknown built-in space {label!r}; choose from {sorted(BUILTINS)}") from None
