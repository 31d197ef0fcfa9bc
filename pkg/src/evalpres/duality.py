"""Effective Banach-Stone duality.

An isometric isomorphism T: C*(X0) -> C*(X1) is consumed as an oracle on
vector names.  Its spatial realization psi: X1 -> X0 is recovered from
the identity p^ o T = psi(p)^: the distance from psi(p) to p_(0,n) is the
value at p of T applied to the n-th distance generator.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .config import default_budgets
from .cstar import (
    PresentedCStar,
    VectorName,
    name_arith,
    norm,
    rational_vector_name,
    substitute,
)
from .errors import EvalPresError, OracleContractViolation, SearchBudgetExhausted
from .evalmap import ComputableMap, ProductName, evaluate, vector_as_map, vector_name_from_map
from .exactnum import two_pow
from .space import PointName, PresentedSpace, point_name_from_distances
from .starpoly import StarPoly, index_of, poly_from_index


@dataclass(eq=False)
class IsoOracle:
    apply: Callable[[VectorName, int], int]
    label: str = "T"
    _names: dict = field(default_factory=dict, repr=False)

    def as_name(self, v: VectorName) -> VectorName:
        """The name k -> apply(v, k) of T(v), memoised per input name."""
        key = id(v)
        if key not in self._names:
            self._names[key] = (v, VectorName(lambda k: self.apply(v, k)))
        return self._names[key][1]


def identity_oracle() -> IsoOracle:
    return IsoOracle(lambda v, k: v(k), label="identity")


def composition_operator(psi: ComputableMap, A0: PresentedCStar, A1: PresentedCStar,
                         f: VectorName, k_limit: int, budget: Optional[int] = None,
                         proposals: bool = True) -> VectorName:
    """Name of f o psi in A1, where psi maps X1 into X0 and f lives in A0."""
    f_map = vector_as_map(A0, f)

    def transform(pt):
        image = psi.transform(pt)
        return lambda k: evaluate(A0, ProductName(f, image), k)

    g = ComputableMap(transform, lambda k: psi.modulus(f_map.modulus(k)),
                      source=A1.base, label=f"f o {psi.label}")
    return vector_name_from_map(A1, g, k_limit, budget, proposals)


def composition_oracle(psi: ComputableMap, A0: PresentedCStar, A1: PresentedCStar,
                       k_limit: int, budget: Optional[int] = None) -> IsoOracle:
    """T(f) = f o psi as an isometry oracle; one search per input name."""
    cache: dict = {}

    def apply(v, k):
        entry = cache.get(id(v))
        if entry is None:
            entry = cache[id(v)] = (v, composition_operator(psi, A0, A1, v, k_limit, budget))
        return entry[1](k)

    return IsoOracle(apply, label=f"compose({psi.label})")


def spatial_realization(T: IsoOracle, A0: PresentedCStar, A1: PresentedCStar,
                        lam: PointName, budget: Optional[int] = None) -> PointName:
    """Name of psi(p) in X0, given a name lam of p in X1."""
    generators: dict = {}

    def delta(n, j):
        if n not in generators:
            g_n = rational_vector_name(A0, index_of(StarPoly.var(n + 1)))
            generators[n] = T.as_name(g_n)
        return evaluate(A1, ProductName(generators[n], lam), j).value.re

    return point_name_from_distances(A0.base, delta, budget)


def translate_name(A_opaque: PresentedCStar, A_plus: PresentedCStar, v: VectorName,
                   k_limit: int, budget: Optional[int] = None) -> VectorName:
    """Name in A_plus of the vector v of A_opaque, under the identity map.

    Candidates m are tried in enumeration order; p_m with the opaque
    generator names substituted is compared to v through the opaque norm
    oracle at increasing precision.
    """
    if A_opaque.generator_names is None:
        raise EvalPresError("translation needs the opaque presentation's generator names")
    budget = default_budgets().composition if budget is None else budget
    neg_v = name_arith(A_opaque, "scale", v, -1)
    result = VectorName(lambda k: None, limit=k_limit)
    result.certified = -1
    verdicts: dict = {}

    def distance_verdict(m, k):
        """True when ||p_m - v|| < 2^-k is certified, False when refuted or unresolved."""
        w = substitute(A_opaque, poly_from_index(m), A_opaque.generator_names)
        diff = name_arith(A_opaque, "add", w, neg_v)
        target = two_pow(k)
        for t in range(k + 4):
            q = norm(A_opaque, diff(t), t)
            e = 2 * two_pow(t)
            if q + e < target:
                return True
            if q - e >= target:
                return False
        return False

    def find(k):
        for m in range(budget):
            key = (m, k)
            if key not in verdicts:
                verdicts[key] = distance_verdict(m, k)
            if verdicts[key]:
                result.certified = max(result.certified, k)
                return m
        raise SearchBudgetExhausted(
            f"no translation within 2^-{k} among {budget} candidates", certified=result.certified)

    result._fn = find
    return result


def transport_tbf(phi: ComputableMap, X_plus: PresentedSpace, X_sharp: PresentedSpace):
    """TBF for X_sharp from one of X_plus and a computable surjection phi."""
    if X_plus.tbf is None:
        raise OracleContractViolation(f"space {X_plus.label!r} has no total boundedness function")

    @lru_cache(maxsize=None)
    def tbf(j):
        level = max(phi.modulus(j + 2), 0)
        out = {}
        for c in X_plus.net(level):
            out[phi.transform(PointName.constant(c))(j + 2)] = None
        return tuple(out)

    return tbf
