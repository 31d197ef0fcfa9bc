"""The evaluation map C*(X) x X -> C and names of functions.

``vector_as_map`` turns a vector name into a computable map on the
space; ``vector_name_from_map`` goes the other way by searching for
polynomials uniformly close to a computable map.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .config import default_budgets
from .cstar import PresentedCStar, VectorName, eval_at_point
from .errors import EvalPresError, SearchBudgetExhausted
from .exactnum import Approximation, GaussianRational, lg_ceil, two_pow
from .space import PointName, PresentedSpace, max_over_space
from .starpoly import StarPoly, bounds_of, index_of, poly_from_index


@dataclass(frozen=True)
class ProductName:
    vec: VectorName
    pt: PointName


@dataclass(frozen=True, eq=False)
class ComputableMap:
    """transform(point name) is a function k -> Approximation within 2^-k.

    ``modulus`` is a modulus of uniform continuity: points within
    2^-modulus(k) have images within 2^-k.  Maps into a presented space
    return point names instead of approximations.
    """

    transform: Callable[[PointName], Callable[[int], object]]
    modulus: Callable[[int], int]
    source: Optional[PresentedSpace] = None
    target: Optional[PresentedSpace] = None
    label: str = ""

    def at_index(self, n: int, k: int):
        return self.transform(PointName.constant(n))(k)


def _require_induced(A: PresentedCStar):
    if not A.is_induced:
        raise EvalPresError("evaluation is only defined for induced presentations")


def evaluate(A: PresentedCStar, pn: ProductName, k: int) -> Approximation:
    """f(x) to within 2^-k from a name of f and a name of x."""
    _require_induced(A)
    p = poly_from_index(pn.vec(k + 1))
    if p.is_zero():
        return Approximation(GaussianRational(0), two_pow(k))
    _, L = bounds_of(p, A.gb)
    # |p(x) - p(p_n)| <= L d(x, p_n) <= 2^-(k+2)
    n = pn.pt(k + 2 + lg_ceil(L))
    a = eval_at_point(A, p, n, k + 2)
    return Approximation(a.value, two_pow(k))


def point_functional(A: PresentedCStar, pt: PointName) -> Callable[[VectorName, int], Approximation]:
    """The character f -> f(x) attached to a point name."""
    return lambda v, k: evaluate(A, ProductName(v, pt), k)


def vector_as_map(A: PresentedCStar, v: VectorName) -> ComputableMap:
    """The function named by v as a computable map X -> C."""
    _require_induced(A)
    state = {}

    def modulus(k):
        if k not in state:
            _, L = bounds_of(poly_from_index(v(k + 2)), A.gb)
            # |f(x) - f(y)| <= 2 * 2^-(k+2) + L d(x, y)
            state[k] = k + 1 + lg_ceil(L)
        return state[k]

    def transform(pt):
        return lambda k: evaluate(A, ProductName(v, pt), k)

    return ComputableMap(transform, modulus, source=A.base, label="vector")


# -- search for names of functions ------------------------------------------------

class _MapSampler:
    """Memoised values g(p_n) at given precisions."""

    def __init__(self, g: ComputableMap):
        self.g = g
        self.memo: dict = {}

    def __call__(self, n: int, t: int) -> Approximation:
        key = (n, t)
        a = self.memo.get(key)
        if a is None:
            a = self.memo[key] = self.g.at_index(n, t)
            if not isinstance(a, Approximation):
                a = self.memo[key] = Approximation(GaussianRational.coerce(a), two_pow(t))
        return a


def _deviation(A, p, sample, n, t):
    """|p(p_n) - g(p_n)| as an approximation of radius at most 2^-t."""
    a = eval_at_point(A, p, n, t + 2)
    b = sample(n, t + 2)
    return abs(a - b)


def certify_close(A: PresentedCStar, p: StarPoly, g: ComputableMap, sample, k: int,
                  quick_levels: int = 3) -> bool:
    """Certify sup |p - g| <= 2^-k (True) or give up (False)."""
    X = A.base
    target = two_pow(k)
    t = k + 2
    for level in range(min(quick_levels, max(g.modulus(t + 1), 0)) + 1):
        for n in X.net(level):
            d = _deviation(A, p, sample, n, t)
            if d.value.re - d.radius > target:
                return False
    _, L = bounds_of(p, A.gb)
    lip = lg_ceil(L)

    def sigma(n, s):
        return _deviation(A, p, sample, n, s + 1).value.re

    q = max_over_space(X, sigma, lambda s: max(s + 1 + lip, g.modulus(s + 1)), t)
    return q + two_pow(t) < target


def piecewise_linear(A: PresentedCStar, knots, values) -> StarPoly:
    """Interpolant through (coordinate(p_n), value) as a polynomial in the generators.

    ``knots`` must be listed in increasing order of coordinate.

    With D_i = d(p_(knot i), .) and t0 the leftmost knot, (x - t_i)_+ is
    (D_i + D_0 - (t_i - t0)) / 2, which is a polynomial in x0, x_(n+1).
    """
    coord = A.base.coordinate
    ts = [coord(n) for n in knots]
    ys = [GaussianRational.coerce(y) for y in values]
    x0 = (0, False)

    def var(i):
        return ((knots[i] + 1, False),)

    acc: dict = {(x0,): ys[0]}
    if len(knots) > 1:
        slopes = [(ys[i + 1] - ys[i]) * GaussianRational(1 / (ts[i + 1] - ts[i]))
                  for i in range(len(knots) - 1)]
        zero = GaussianRational(0)
        acc[var(0)] = slopes[0]
        for i in range(1, len(knots) - 1):
            c = (slopes[i] - slopes[i - 1]) * GaussianRational(Fraction(1, 2))
            if not c:
                continue
            acc[var(i)] = acc.get(var(i), zero) + c
            acc[var(0)] = acc[var(0)] + c
            acc[(x0,)] = acc[(x0,)] - c * GaussianRational(ts[i] - ts[0])
    return StarPoly(acc)


def _pl_proposals(A: PresentedCStar, g: ComputableMap, sample, k: int) -> Iterator[int]:
    """Adaptive, then uniform, interpolants of g on a fine net of a line space."""
    X = A.base
    if X.coordinate is None:
        return
    cap = default_budgets().net_level_cap + 4
    level = min(max(g.modulus(k + 2), 0), cap)
    fine = sorted(set(X.net(level)), key=X.coordinate)
    t = k + 3
    tol = two_pow(k + 3)

    def y(i):
        return sample(fine[i], t).value

    def lerp_ok(a, b, i):
        ta, tb, ti = (X.coordinate(fine[m]) for m in (a, b, i))
        w = (ti - ta) / (tb - ta)
        guess = y(a) + (y(b) - y(a)) * GaussianRational(w)
        return (guess - y(i)).norm2() <= tol * tol

    knots = {0, len(fine) - 1}
    stack = [(0, len(fine) - 1)]
    while stack:
        a, b = stack.pop()
        if b - a <= 1:
            continue
        probes = {(3 * a + b) // 4, (a + b) // 2, (a + 3 * b) // 4} - {a, b}
        if all(lerp_ok(a, b, i) for i in probes):
            continue
        mid = (a + b) // 2
        knots.add(mid)
        stack += [(a, mid), (mid, b)]
    chosen = sorted(knots)
    yield index_of(piecewise_linear(A, [fine[i] for i in chosen], [y(i) for i in chosen]))
    if len(chosen) < len(fine):
        yield index_of(piecewise_linear(A, fine, [y(i) for i in range(len(fine))]))


def _dovetail(*streams) -> Iterator[int]:
    streams = [iter(s) for s in streams]
    while streams:
        alive = []
        for s in streams:
            try:
                yield next(s)
                alive.append(s)
            except StopIteration:
                pass
        streams = alive


def vector_name_from_map(A: PresentedCStar, g: ComputableMap, k_limit: int,
                         budget: Optional[int] = None, proposals: bool = True) -> VectorName:
    """A name of the function g, certified at every precision up to k_limit.

    At precision k the candidates are the polynomial indices 0, 1, 2, ...
    interleaved with interpolants built from samples of g; the first one
    certified within 2^-k wins.  ``budget`` caps the number of candidates
    tried per precision.
    """
    _require_induced(A)
    budget = default_budgets().composition if budget is None else budget
    sample = _MapSampler(g)
    name = VectorName(lambda k: None, limit=k_limit)

    def find(k):
        tried = set()
        fair = iter(range(budget))
        streams = [_pl_proposals(A, g, sample, k), fair] if proposals else [fair]
        for count, m in enumerate(_dovetail(*streams)):
            if count >= budget:
                break
            if m in tried:
                continue
            tried.add(m)
            if certify_close(A, poly_from_index(m), g, sample, k):
                name.certified = max(name.certified, k)
                return m
        raise SearchBudgetExhausted(
            f"no polynomial within 2^-{k} among {budget} candidates", certified=name.certified)

    name._fn = find
    name.certified = -1
    return name


def certify_name(name: VectorName, k: int) -> int:
    """Force a lazily searched name through precision k; returns the deepest certified k."""
    for j in range(k + 1):
        name(j)
    return k
