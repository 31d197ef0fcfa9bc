"""The acceptance suite: nine end-to-end properties with independent oracles.

Every check compares library output against something computed here
without the library's evaluation, norm or search code: exact symbolic
values, brute-force grids with an explicit Lipschitz correction, or
exhaustive enumeration of Cantor cylinders.  Each ``criterion_*``
function returns a :class:`CriterionResult`.
"""
from __future__ import annotations

import contextlib
import io
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .cantor import build_homeomorphism, check_assignment
from .cstar import VectorName, algebra_diagram_emit, induce, norm, substitute
from .duality import composition_operator, composition_oracle, spatial_realization, transport_tbf, translate_name
from .errors import EvalPresError
from .evalmap import ProductName, evaluate, vector_name_from_map
from .exactnum import GaussianRational, two_pow
from .fixtures import (
    EXACT_UNIT_MAPS,
    dyadic_name,
    permuted_copy,
    power_map,
    rename,
    swap_permutation,
    unit_map,
)
from .space import (
    PointName,
    RationalBall,
    builtin,
    cantor_standard,
    cantor_variant,
    diagram_emit,
    dyadic_point,
    gray,
    segment_bounds,
    segment_index,
    segment_point,
    segments,
    unit_interval,
    verify_cover,
)
from .starpoly import StarPoly, index_of, poly_from_index

SEED = 20240607


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.title}"

    def to_json(self, timing: bool = True) -> str:
        row = {"criterion": self.number, "title": self.title, "passed": self.passed,
               "detail": self.detail}
        if timing:
            row["seconds"] = round(self.seconds, 2)
        return json.dumps(row, sort_keys=True)


# -- independent oracles ------------------------------------------------------------------

def _exact_value(p: StarPoly, gens: dict) -> tuple[Fraction, Fraction]:
    """(re, im) of p at real generator values, by direct expansion."""
    re = im = Fraction(0)
    for c, mono in p.terms:
        prod = Fraction(1)
        for j, _ in mono:
            prod *= gens[j]
        re += c.re * prod
        im += c.im * prod
    return re, im


def _line_gens(p: StarPoly, t: Fraction, coord: Callable[[int], Fraction]) -> dict:
    return {j: Fraction(1) if j == 0 else abs(t - coord(j - 1)) for j in p.variables()}


def _lipschitz_on_line(p: StarPoly, sup: Fraction) -> Fraction:
    """Lipschitz bound of p on a line space whose distance generators are bounded by sup."""
    total = Fraction(0)
    for c, mono in p.terms:
        moving = sum(1 for j, _ in mono if j != 0)
        if moving:
            mag = abs(c.re) + abs(c.im)
            total += mag * moving * sup ** (moving - 1)
    return total


def _grid_sup_sq(p: StarPoly, coord, lo: Fraction, hi: Fraction, step_bits: int) -> Fraction:
    """max |p|^2 over the grid lo + i 2^-step_bits inside [lo, hi]."""
    best = Fraction(0)
    h = two_pow(step_bits)
    t = lo
    while t <= hi:
        re, im = _exact_value(p, _line_gens(p, t, coord))
        best = max(best, re * re + im * im)
        t += h
    return best


def _sqrt_floor(q: Fraction, bits: int = 40) -> Fraction:
    from math import isqrt
    scale = 1 << bits
    return Fraction(isqrt(q.numerator * scale * scale // q.denominator), scale)


def _norm_bracket(p: StarPoly, step_bits: int = 12) -> tuple[Fraction, Fraction]:
    """[lo, hi] containing sup over [0, 1] of |p|, from a grid plus Lipschitz correction."""
    sq = _grid_sup_sq(p, dyadic_point, Fraction(0), Fraction(1), step_bits)
    g = _sqrt_floor(sq)
    lo = g
    hi = g + two_pow(40) + _lipschitz_on_line(p, Fraction(1)) * two_pow(step_bits + 1)
    return lo, hi


def _random_poly(rng: random.Random, max_var: int, max_terms: int = 3, max_deg: int = 3,
                 complex_coefs: bool = False, starred: bool = False) -> StarPoly:
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(1, max_deg)
        mono = tuple((rng.randint(0, max_var), starred and rng.random() < 0.3) for _ in range(deg))
        re = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        im = Fraction(rng.randint(-3, 3), rng.randint(1, 4)) if complex_coefs else 0
        terms.append((GaussianRational(re, im), mono))
    p = StarPoly.from_terms(terms)
    return p if not p.is_zero() else StarPoly.var(0)


def _segment_name(t: Fraction) -> PointName:
    """Name of a rational point of the segments space (t = 0 or t in some J_m)."""
    if t == 0:
        return PointName.constant(0)
    m = 0
    while segment_bounds(m)[0] > t:
        m += 1
    a, b = segment_bounds(m)
    if not a <= t <= b:
        raise ValueError(f"{t} is not in the segments space")
    u = (t - a) * (1 << (m + 1))

    def fn(k):
        scale = 1 << (k + 1)
        return segment_index(m, Fraction(round(u * scale), scale))

    return PointName(fn)


def _within(value: GaussianRational, re: Fraction, im: Fraction, k: int) -> bool:
    dr, di = value.re - re, value.im - im
    return dr * dr + di * di <= two_pow(2 * k)


# -- criteria ------------------------------------------------------------------------

def criterion_1(pairs: int = 100, k_max: int = 10) -> CriterionResult:
    rng = random.Random(SEED + 1)
    bad, checked = [], 0
    spaces = [("unit_interval", induce(unit_interval()), dyadic_point),
              ("segments", induce(segments()), segment_point)]
    for i in range(pairs):
        label, A, coord = spaces[i % 2]
        p = _random_poly(rng, 4, complex_coefs=rng.random() < 0.3)
        if label == "unit_interval":
            t = Fraction(rng.randint(0, 60), 60)
            pt = dyadic_name(t)
        else:
            m = rng.randint(0, 3)
            a, b = segment_bounds(m)
            t = a + (b - a) * Fraction(rng.randint(0, 12), 12) if rng.random() < 0.9 else Fraction(0)
            pt = _segment_name(t)
        re, im = _exact_value(p, _line_gens(p, t, coord))
        v = VectorName.constant(index_of(p))
        for k in range(k_max + 1):
            checked += 1
            got = evaluate(A, ProductName(v, pt), k)
            if not _within(got.value, re, im, k):
                bad.append({"space": label, "poly": str(p), "t": str(t), "k": k})
    return CriterionResult(1, "evaluation soundness", not bad,
                           {"pairs": pairs, "checks": checked, "violations": bad[:5]})


def criterion_2(count: int = 200, k: int = 8) -> CriterionResult:
    A = induce(unit_interval())
    bad = []
    for j in range(count):
        p = poly_from_index(j)
        q = norm(A, j, k)
        lo, hi = _norm_bracket(p)
        if not (lo - two_pow(k) <= q <= hi + two_pow(k)):
            bad.append({"index": j, "poly": str(p), "norm": str(q), "oracle": [str(lo), str(hi)]})
    unit = norm(A, index_of(StarPoly.var(0)), 10)
    unit_ok = abs(unit - 1) <= two_pow(10)
    S = induce(segments())
    name = vector_name_from_map(S, power_map(1), k + 1)
    s1 = norm(S, name(k + 1), k + 1)
    s1_ok = abs(s1 - Fraction(5, 4)) <= two_pow(k)
    return CriterionResult(2, "norm soundness", not bad and unit_ok and s1_ok,
                           {"polynomials": count, "violations": bad[:5], "unit_norm": str(unit),
                            "s1_norm": str(s1)})


def _exact_metric(label: str, i: int, j: int) -> Fraction:
    if label == "unit_interval":
        return abs(dyadic_point(i) - dyadic_point(j))
    if label == "segments":
        return abs(segment_point(i) - segment_point(j))
    if label == "cantor_variant":
        i, j = gray(i), gray(j)
    if i == j:
        return Fraction(0)
    pos = 0
    while (i >> pos) & 1 == (j >> pos) & 1:
        pos += 1
    return Fraction(1, (2 if label == "cantor_standard" else 3) ** pos)


def criterion_3(count: int = 500) -> CriterionResult:
    violations, ambiguous = [], 0
    A = induce(unit_interval())
    for e in algebra_diagram_emit(A, count):
        p = poly_from_index(e.j)
        lo, hi = _norm_bracket(p)
        if hi <= e.r or lo >= e.r2:
            violations.append({"algebra": True, "r": str(e.r), "j": e.j, "r2": str(e.r2)})
        elif not (e.r < lo and hi < e.r2):
            lo, hi = _norm_bracket(p, 16)
            if hi <= e.r or lo >= e.r2:
                violations.append({"algebra": True, "r": str(e.r), "j": e.j, "r2": str(e.r2)})
            elif not (e.r < lo and hi < e.r2):
                ambiguous += 1
    metric_counts = {}
    for label in ("unit_interval", "segments", "cantor_standard", "cantor_variant"):
        n = 0
        for e in diagram_emit(builtin(label), count):
            n += 1
            d = _exact_metric(label, e.j, e.k)
            if not e.r < d < e.r2:
                violations.append({"space": label, "r": str(e.r), "j": e.j, "k": e.k, "r2": str(e.r2)})
        metric_counts[label] = n
    return CriterionResult(3, "diagram soundness", not violations,
                           {"algebra_entries": count, "metric_entries": metric_counts,
                            "violations": violations[:5], "unresolved_by_grid": ambiguous})


def criterion_4(k_limit: int = 5, vectors: int = 40) -> CriterionResult:
    A = induce(unit_interval())
    perm = swap_permutation([(0, 2), (1, 3)])
    Aop = permuted_copy(A, perm)
    names = [("unit", Aop.unit_name)]
    names += [(f"generator {n}", Aop.generator_names(n)) for n in range(4)]
    for m in range(1, vectors):
        names.append((f"p_{m}", substitute(Aop, poly_from_index(m), Aop.generator_names)))
    bad, certified = [], []
    for label, v in names:
        w = translate_name(Aop, A, v, k_limit)
        for k in range(k_limit + 1):
            try:
                m = w(k)
            except EvalPresError as exc:
                bad.append({"vector": label, "k": k, "error": exc.kind})
                break
            # v is approximated in A_plus by renaming the variables of its own approximants
            t = k + 4
            target = rename(poly_from_index(v(t)), perm)
            q = norm(A, index_of(poly_from_index(m) - target), t)
            if q + 2 * two_pow(t) > two_pow(k):
                bad.append({"vector": label, "k": k, "index": m, "gap": str(q)})
        certified.append(getattr(w, "certified", -1))
    return CriterionResult(4, "evaluative round trip", not bad,
                           {"vectors": len(names), "k_limit": k_limit, "violations": bad[:5],
                            "min_certified": min(certified)})


SAMPLE_POINTS = [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4),
                 Fraction(1, 8), Fraction(5, 8), Fraction(1, 3), Fraction(2, 3), Fraction(1, 5)]


def criterion_5(j: int = 6, k_cert: int = 3) -> CriterionResult:
    A = induce(unit_interval())
    bad, reach = [], {}
    for label in ("reflect", "square"):
        psi = unit_map(label)
        exact = EXACT_UNIT_MAPS[label]
        T = composition_oracle(psi, A, A, k_limit=j + 6)
        for x in SAMPLE_POINTS:
            y = dyadic_point(spatial_realization(T, A, A, dyadic_name(x))(j))
            if abs(y - exact(x)) > two_pow(j):
                bad.append({"psi": label, "x": str(x), "got": str(y)})
        # f = d(0, .) composed with psi, certified directly and checked on a fine grid
        f = VectorName.constant(index_of(StarPoly.var(1)))
        g = composition_operator(psi, A, A, f, k_cert)
        deepest = -1
        for k in range(k_cert + 1):
            p = poly_from_index(g(k))
            lo, hi = _norm_bracket_against(p, exact)
            if hi >= two_pow(k):
                bad.append({"psi": label, "composition_k": k, "grid_gap": str(hi)})
                break
            deepest = k
        reach[label] = deepest
    return CriterionResult(5, "effective Banach-Stone", not bad and min(reach.values()) >= k_cert,
                           {"samples": len(SAMPLE_POINTS), "precision": j, "violations": bad[:5],
                            "composition_certified": reach})


def _norm_bracket_against(p: StarPoly, exact: Callable[[Fraction], Fraction], step_bits: int = 12):
    """Grid bracket for sup |p(t) - exact(t)| over [0, 1]; exact must be 2-Lipschitz."""
    h = two_pow(step_bits)
    best = Fraction(0)
    t = Fraction(0)
    while t <= 1:
        re, im = _exact_value(p, _line_gens(p, t, dyadic_point))
        re -= exact(t)
        best = max(best, re * re + im * im)
        t += h
    g = _sqrt_floor(best)
    return g, g + two_pow(40) + (_lipschitz_on_line(p, Fraction(1)) + 2) * two_pow(step_bits + 1)


def _variant_cover_brute(balls, depth: int = 12) -> bool:
    """Every point of 2^omega lies in one of the balls (metric 3^-first difference).

    A ball B(c; r) of the variant metric is the cylinder of depth D with
    3^-D < r <= 3^-(D-1), so checking all 2^depth prefixes is complete
    once every ball has D <= depth.
    """
    specs = []
    for b in balls:
        D = 0
        while Fraction(1, 3 ** D) >= b.radius:
            D += 1
        if D > depth:
            return False
        specs.append((gray(b.center) & ((1 << D) - 1), (1 << D) - 1))
    return all(any(x & mask == c for c, mask in specs) for x in range(1 << depth))


def _variant_disjoint_exact(b1: RationalBall, b2: RationalBall) -> bool:
    return _exact_metric("cantor_variant", b1.center, b2.center) > b1.radius + b2.radius


def criterion_6(depth: int = 4) -> CriterionResult:
    X = cantor_variant()
    phi = build_homeomorphism(X, depth)
    problems = []
    for s in range(depth + 1):
        lv = phi.levels[s]
        problems += [f"level {s}: {p}" for p in check_assignment(X, lv, phi.levels[s - 1] if s else None)]
        # independent re-check with exact distances and exhaustive cylinders
        if not _variant_cover_brute(lv.balls()):
            problems.append(f"level {s}: brute-force cover check failed")
        ents = lv.entries
        for a in range(len(ents)):
            if 2 * ents[a].ball.radius > two_pow(s):
                problems.append(f"level {s}: diameter too large")
            for b in range(a + 1, len(ents)):
                if not _variant_disjoint_exact(ents[a].ball, ents[b].ball):
                    problems.append(f"level {s}: balls {a}, {b} overlap")
    top = phi.levels[depth]
    cyl = [format(i, f"0{depth}b") for i in range(1 << depth)]
    images = {t: [e.ball for e in top.entries if e.sigma.startswith(t) or t.startswith(e.sigma)]
              for t in cyl}
    for a in range(len(cyl)):
        for b in range(a + 1, len(cyl)):
            for x in images[cyl[a]]:
                for y in images[cyl[b]]:
                    if x == y or not _variant_disjoint_exact(x, y):
                        problems.append(f"cylinders {cyl[a]} and {cyl[b]} share image balls")
    return CriterionResult(6, "Cantor homeomorphism", not problems,
                           {"depth": depth, "balls_per_level": [len(l.entries) for l in phi.levels],
                            "problems": problems[:5]})


def _interval_cover_exact(centers, r: Fraction) -> bool:
    """Union of open intervals (c - r, c + r) contains [0, 1]."""
    reach = Fraction(0)
    first = True
    for c in sorted(centers):
        if first:
            if c - r >= 0:
                return False
            first = False
        elif c - r >= reach:
            return False
        reach = max(reach, c + r)
    return reach > 1


def criterion_7(j_max: int = 6, depth: int = 4) -> CriterionResult:
    failures = []
    X = cantor_variant()
    phi = build_homeomorphism(X, depth)
    tbf = transport_tbf(phi.as_map(), cantor_standard(), X)
    U = unit_interval()
    tbf_r = transport_tbf(unit_map("reflect"), U, U)
    sizes = {"cantor": [], "reflect": []}
    for j in range(j_max + 1):
        r = two_pow(j)
        net = tbf(j)
        sizes["cantor"].append(len(net))
        balls = [RationalBall(n, r) for n in net]
        if not verify_cover(X, balls) or not _variant_cover_brute(balls):
            failures.append({"map": "cantor", "j": j})
        net = tbf_r(j)
        sizes["reflect"].append(len(net))
        if not verify_cover(U, [RationalBall(n, r) for n in net]) or \
                not _interval_cover_exact([dyadic_point(n) for n in net], r):
            failures.append({"map": "reflect", "j": j})
    return CriterionResult(7, "compactness transport", not failures,
                           {"j_max": j_max, "net_sizes": sizes, "failures": failures,
                            "cantor_levels_built": len(phi.levels)})


def criterion_8(samples: int = 50, k: int = 5) -> CriterionResult:
    rng = random.Random(SEED + 8)
    A = induce(unit_interval())
    bad = []
    for _ in range(samples):
        u = _random_poly(rng, 3, max_terms=3, max_deg=2, complex_coefs=True, starred=True)
        q1 = norm(A, index_of(u.adjoint() * u), k)
        q2 = norm(A, index_of(u), k)
        lower = max(q2 - two_pow(k), Fraction(0))
        if abs(q1 - q2 * q2) > 2 * two_pow(k) * (lower + 1):
            bad.append({"u": str(u), "norm_uu": str(q1), "norm_u": str(q2)})
    return CriterionResult(8, "C*-identity", not bad, {"samples": samples, "violations": bad[:5]})


def criterion_9() -> CriterionResult:
    import os
    import tempfile

    from .cli import main

    manifest = {"label": "no-unit", "precision": 4, "norms": {"1": "1/1", "5": "1/1"}}
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "opaque.json")
        with open(path, "w") as fh:
            json.dump(manifest, fh)
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(["algebra", "norm", "--manifest", path, "--index", "5", "--prec", "2"])
    try:
        payload = json.loads(err.getvalue().strip().splitlines()[-1])
    except (ValueError, IndexError):
        payload = {}
    ok = code != 0 and payload.get("error") == "missing-unit-name" and not out.getvalue()
    return CriterionResult(9, "unit-name honesty", ok, {"exit_code": code, "error": payload})


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 10)}

# wall-clock ceilings in seconds; a criterion that overruns fails
RUNTIME_LIMITS = {1: 60, 2: 300, 4: 300, 5: 600, 6: 300}


def run(numbers: Optional[list[int]] = None, emit: Optional[Callable[[CriterionResult], None]] = None):
    results = []
    for i in numbers or sorted(CRITERIA):
        t0 = time.perf_counter()
        try:
            res = CRITERIA[i]()
        except EvalPresError as exc:
            res = CriterionResult(i, CRITERIA[i].__name__, False, exc.to_dict())
        res.seconds = time.perf_counter() - t0
        limit = RUNTIME_LIMITS.get(i)
        if limit is not None and res.seconds > limit:
            res.passed = False
            res.detail["runtime_limit_exceeded"] = {"limit": limit, "seconds": round(res.seconds, 1)}
        results.append(res)
        if emit:
            emit(res)
    return results
