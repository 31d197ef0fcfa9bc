"""Presented C*-algebras C*(X).

Two kinds of presentation are supported.  An *induced* presentation is
built from a presented compact space: generator x0 is the unit and
x_(n+1) is the distance function d(p_n, .).  Its norm oracle maximises
|p| over a net of the space.  An *opaque* presentation is nothing but a
norm oracle on polynomial indices together with explicitly supplied
names of the unit and, optionally, of the generators of the induced
presentation it is meant to agree with.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

from gmpy2 import mpq

from . import coding
from .config import default_budgets
from .errors import (
    EvalPresError,
    ManifestError,
    MissingTBF,
    MissingUnitName,
    OracleContractViolation,
    PrecisionLimit,
)
from .exactnum import (
    Approximation,
    GaussianRational,
    format_rational,
    lg_ceil,
    parse_rational,
    two_pow,
)
from .space import PresentedSpace, max_over_space
from .starpoly import (
    GeneratorBounds,
    StarPoly,
    bounds_of,
    eval_poly,
    eval_poly_real_args,
    index_of,
    poly_from_index,
)

UNIT_INDEX = index_of(StarPoly.var(0))


class VectorName:
    """A name k -> PolyIndex j with ||p_j[A] - v|| <= 2^-k."""

    def __init__(self, fn: Callable[[int], int], limit: Optional[int] = None):
        self._fn = fn
        self._cache: dict[int, int] = {}
        self.limit = limit

    @classmethod
    def constant(cls, j: int) -> "VectorName":
        name = cls(lambda k: j)
        name.index = j
        return name

    @classmethod
    def from_list(cls, indices: Sequence[int]) -> "VectorName":
        indices = [int(i) for i in indices]
        if not indices:
            raise ValueError("empty vector name")

        def fn(k):
            if k >= len(indices):
                raise PrecisionLimit(f"vector name only defined up to precision {len(indices) - 1}")
            return indices[k]

        return cls(fn, limit=len(indices) - 1)

    def __call__(self, k: int) -> int:
        k = max(k, 0)
        if self.limit is not None and k > self.limit:
            raise PrecisionLimit(f"name certified only up to precision {self.limit}")
        j = self._cache.get(k)
        if j is None:
            j = self._cache[k] = self._fn(k)
        return j

    def poly(self, k: int) -> StarPoly:
        return poly_from_index(self(k))

    def to_list(self, upto: int) -> list[int]:
        return [self(k) for k in range(upto + 1)]


@dataclass(frozen=True, eq=False)
class PresentedCStar:
    kind: str
    gb: GeneratorBounds
    base: Optional[PresentedSpace] = None
    norm_oracle: Optional[Callable[[int, int], Fraction]] = None
    unit_name: Optional[VectorName] = None
    # n -> name (in this presentation) of the n-th induced generator
    generator_names: Optional[Callable[[int], VectorName]] = None
    label: str = ""

    @property
    def is_induced(self) -> bool:
        return self.kind == "induced"


@dataclass(frozen=True)
class AlgebraDiagramEntry:
    r: Fraction
    j: int
    r2: Fraction

    def to_json(self) -> str:
        return json.dumps({"r": format_rational(self.r), "j": self.j,
                           "r2": format_rational(self.r2)})


def induce(X: PresentedSpace) -> PresentedCStar:
    """The presentation generated by the unit and the distance functions d(p_n, .)."""
    if X.tbf is None:
        raise MissingTBF(f"space {X.label!r} is not presented as computably compact")
    gb = GeneratorBounds(max(Fraction(1), X.diam_bound), Fraction(1), True)
    return PresentedCStar("induced", gb, base=X,
                          unit_name=VectorName.constant(UNIT_INDEX),
                          generator_names=lambda n: VectorName.constant(index_of(StarPoly.var(n))),
                          label=f"C*({X.label})")


def opaque(norm_oracle, unit_name: Optional[VectorName], generator_names=None,
           gb: Optional[GeneratorBounds] = None, label: str = "opaque") -> PresentedCStar:
    gb = gb or GeneratorBounds(Fraction(1), Fraction(1), False)
    return PresentedCStar("opaque", gb, norm_oracle=norm_oracle, unit_name=unit_name,
                          generator_names=generator_names, label=label)


def unit_name(A: PresentedCStar) -> VectorName:
    if A.unit_name is None:
        raise MissingUnitName(f"presentation {A.label!r} has no name of the unit")
    return A.unit_name


# -- evaluation at distinguished points (induced only) ------------------------------

def generator_values(A: PresentedCStar, variables, n: int, t: int) -> dict:
    """Approximations to 2^-t of the generators x_j at the point p_n."""
    X = A.base
    e = two_pow(t)
    out = {}
    for j in variables:
        if j == 0:
            out[0] = Approximation(GaussianRational(1), Fraction(0))
        elif j - 1 == n:
            out[j] = Approximation(GaussianRational(0), Fraction(0))
        else:
            out[j] = Approximation(X.metric(j - 1, n, t), e)
    return out


@lru_cache(maxsize=64)
def _mpq_coordinate(coord):
    return lru_cache(maxsize=1 << 20)(lambda n: mpq(coord(n)))


def _exact_generator_values(X: PresentedSpace, variables, n: int) -> dict:
    out = {}
    if X.coordinate is not None:
        c = _mpq_coordinate(X.coordinate)
        cn = c(n)
        for j in variables:
            out[j] = mpq(1) if j == 0 else abs(c(j - 1) - cn)
    else:
        for j in variables:
            out[j] = mpq(1) if j == 0 else mpq(X.metric(j - 1, n, 0)) if j - 1 != n else mpq(0)
    return out


def eval_at_point(A: PresentedCStar, p: StarPoly, n: int, k: int) -> Approximation:
    """p[generators](p_n) to within 2^-k, for an induced presentation."""
    if not A.is_induced:
        raise EvalPresError("pointwise evaluation needs an induced presentation")
    if p.is_zero():
        return Approximation(GaussianRational(0), Fraction(0))
    variables = p.variables()
    if A.base.exact_metric:
        return Approximation(eval_poly_real_args(p, _exact_generator_values(A.base, variables, n)),
                             Fraction(0))
    _, L = bounds_of(p, A.gb)
    target = two_pow(k)
    cap = default_budgets().tighten_cap
    t = k + lg_ceil(L) + 1
    for _ in range(cap):
        a = eval_poly(p, generator_values(A, variables, n, t))
        if a.radius <= target:
            return a
        t += 1
    raise OracleContractViolation(f"could not evaluate {p} at p_{n} to 2^-{k}")


# -- norms ---------------------------------------------------------------------------

@lru_cache(maxsize=1 << 18)
def _induced_norm(A: PresentedCStar, j: int, k: int) -> Fraction:
    p = poly_from_index(j)
    if p.is_zero():
        return Fraction(0)
    _, L = bounds_of(p, A.gb)
    lip = lg_ceil(L)

    def g(n, t):
        return abs(eval_at_point(A, p, n, t + 1)).value.re

    return max_over_space(A.base, g, lambda t: t + lip, k)


def norm(A: PresentedCStar, j: int, k: int) -> Fraction:
    """Rational within 2^-k of ||p_j[A]||."""
    if A.is_induced:
        return _induced_norm(A, j, k)
    if A.norm_oracle is None:
        raise EvalPresError(f"presentation {A.label!r} has no norm oracle")
    return Fraction(A.norm_oracle(j, k))


def norm_upper(A: PresentedCStar, v: VectorName) -> Fraction:
    """A rational upper bound on the norm of the vector named by v."""
    return norm(A, v(0), 0) + 2


def poly_norm(A: PresentedCStar, p: StarPoly, k: int) -> Fraction:
    return norm(A, index_of(p), k)


# -- diagram ---------------------------------------------------------------------------

def _decode_algebra_code(c: int):
    j, rest = coding.unpair(c)
    a, b = coding.unpair(rest)
    return coding.decode_positive_rational(a), j, coding.decode_positive_rational(b)


def algebra_diagram_emit(A: PresentedCStar, budget: int,
                         precision_cap: Optional[int] = None) -> Iterator[AlgebraDiagramEntry]:
    """Enumerate ``budget`` certified entries r < ||p_j[A]|| < r'.

    Same dovetailing as the metric diagram: stage t revisits every code
    below 2^t at precision t // 2.
    """
    if budget <= 0:
        return
    cap = default_budgets().precision_cap if precision_cap is None else precision_cap
    emitted, dead = set(), set()
    count, t = 0, 0
    while True:
        prec = min(t // 2, cap)
        e = two_pow(prec)
        for c in range(1 << t):
            if c in emitted or c in dead:
                continue
            r, j, r2 = _decode_algebra_code(c)
            if r >= r2:
                dead.add(c)
                continue
            q = norm(A, j, prec)
            lo, hi = q - e, q + e
            if r < lo and hi < r2:
                emitted.add(c)
                yield AlgebraDiagramEntry(r, j, r2)
                count += 1
                if count >= budget:
                    return
            elif hi <= r or lo >= r2:
                dead.add(c)
        t += 1


# -- arithmetic on names ------------------------------------------------------------

def name_arith(A: PresentedCStar, op: str, u: VectorName, v=None) -> VectorName:
    """Name of u + v, c * u, u * v or u^* from names of the operands."""
    if op == "add":
        return VectorName(lambda k: index_of(u.poly(k + 1) + v.poly(k + 1)))
    if op == "scale":
        c = GaussianRational.coerce(v)
        extra = lg_ceil(c.abs_upper())
        return VectorName(lambda k: index_of(u.poly(k + extra) * c))
    if op == "adjoint":
        return VectorName(lambda k: index_of(u.poly(k).adjoint()))
    if op == "mul":
        state = {}

        def fn(k):
            if "extra" not in state:
                state["extra"] = 1 + lg_ceil(1 + norm_upper(A, u) + norm_upper(A, v))
            kk = k + state["extra"]
            return index_of(u.poly(kk) * v.poly(kk))

        return VectorName(fn)
    raise ValueError(f"unknown name operation {op!r}")


def rational_vector_name(A: PresentedCStar, j: int) -> VectorName:
    return VectorName.constant(j)


def substitute(A: PresentedCStar, p: StarPoly, names: Callable[[int], VectorName]) -> VectorName:
    """Name of p with x_n replaced by the vector named ``names(n)``.

    Built from name_arith: products and sums are folded pairwise so the
    precision surcharge grows with log of the term count.
    """
    if p.is_zero():
        return VectorName.constant(0)
    cache: dict = {}

    def literal(j, starred):
        key = (j, starred)
        if key not in cache:
            base = names(j)
            cache[key] = name_arith(A, "adjoint", base) if starred else base
        return cache[key]

    def fold(op, items):
        while len(items) > 1:
            nxt = [name_arith(A, op, items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
            if len(items) % 2:
                nxt.append(items[-1])
            items = nxt
        return items[0]

    terms = []
    for coef, mono in p.terms:
        prod = fold("mul", [literal(j, s) for j, s in mono])
        terms.append(name_arith(A, "scale", prod, coef) if coef != 1 else prod)
    return fold("add", terms)


def consecutive_gap_ok(A: PresentedCStar, name: VectorName, k: int, slack: int = 4) -> bool:
    """Check ||p_name(k) - p_name(k+1)|| <= 2^-k + 2^-(k+1) against the norm oracle."""
    diff = name.poly(k) - name.poly(k + 1)
    q = poly_norm(A, diff, k + slack)
    return q - two_pow(k + slack) <= two_pow(k) + two_pow(k + 1)


# -- opaque presentations from manifests -------------------------------------------------

def opaque_from_manifest(data: dict, require_unit: bool = True) -> PresentedCStar:
    """Opaque presentation from a manifest dictionary.

    Keys: ``label``, ``precision`` (table accuracy), ``norms`` (index ->
    rational string), ``unit_name`` (list of indices), optional
    ``generator_names`` (list of lists) and ``sup_bound``.
    """
    try:
        table_prec = int(data["precision"])
        table = {int(j): parse_rational(q) for j, q in data["norms"].items()}
    except (KeyError, ValueError, TypeError) as exc:
        raise ManifestError(f"malformed norm table: {exc}") from None
    raw_unit = data.get("unit_name")
    if raw_unit is None and require_unit:
        raise MissingUnitName(
            "opaque presentation has no unit name; pass one explicitly, it cannot be computed uniformly")
    label = data.get("label", "opaque")

    def norm_oracle(j, k):
        if k > table_prec:
            raise PrecisionLimit(f"manifest norms are accurate only to 2^-{table_prec}")
        if j not in table:
            raise ManifestError(f"norm of polynomial {j} is not in the manifest table")
        return table[j]

    gens = data.get("generator_names")
    gen_names = None if gens is None else [VectorName.from_list(g) for g in gens]

    def gen_fn(n):
        if n >= len(gen_names):
            raise ManifestError(f"manifest lists only {len(gen_names)} generator names")
        return gen_names[n]

    sup = parse_rational(data.get("sup_bound", "1/1"))
    return opaque(norm_oracle,
                  VectorName.from_list(raw_unit) if raw_unit is not None else None,
                  gen_fn if gen_names is not None else None,
                  GeneratorBounds(sup, Fraction(1), False), label)


def manifest_for(A: PresentedCStar, indices, precision: int, name_precision: int,
                 generators: int = 0) -> dict:
    """Freeze a finite prefix of a presentation's norm oracle and names into a manifest."""
    data = {
        "label": A.label,
        "precision": precision,
        "norms": {str(j): format_rational(norm(A, j, precision)) for j in sorted(set(indices))},
    }
    if A.unit_name is not None:
        data["unit_name"] = A.unit_name.to_list(name_precision)
    if generators and A.generator_names is not None:
        data["generator_names"] = [A.generator_names(n).to_list(name_precision)
                                   for n in range(generators)]
    return data
