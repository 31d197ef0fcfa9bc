"""Homeomorphisms from the standard Cantor space onto presented copies.

Level s of the construction is a finite family of rational balls that are
pairwise formally disjoint, cover the space and have formal diameter
(twice the radius) at most 2^-s, each tagged with a binary string sigma.
The strings are pairwise incomparable and their cylinders exhaust 2^omega.
Level s + 1 splits every ball into formally included sub-balls and every
cylinder [sigma] into as many sub-cylinders.  A sequence f then maps to
the intersection of the balls whose strings are prefixes of f.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .config import Budgets, default_budgets
from .errors import PrecisionLimit, SearchBudgetExhausted
from .evalmap import ComputableMap
from .exactnum import format_rational, parse_rational, two_pow
from .space import (
    PointName,
    PresentedSpace,
    RationalBall,
    cantor_bits,
    formal_inclusion,
    formally_disjoint,
    formally_included,
    separated,
    verify_cover,
)


@dataclass(frozen=True)
class CylinderEntry:
    sigma: str
    ball: RationalBall

    def to_json(self) -> dict:
        return {"sigma": self.sigma, "center": self.ball.center,
                "radius": format_rational(self.ball.radius)}


@dataclass(frozen=True)
class CylinderAssignment:
    level: int
    entries: tuple[CylinderEntry, ...]

    def balls(self) -> list[RationalBall]:
        return [e.ball for e in self.entries]

    def max_sigma_length(self) -> int:
        return max(len(e.sigma) for e in self.entries)

    def entry_for(self, bits: str) -> CylinderEntry:
        for e in self.entries:
            if bits.startswith(e.sigma):
                return e
        raise KeyError(f"no cylinder of level {self.level} contains {bits!r}")

    def to_json(self) -> dict:
        return {"level": self.level, "entries": [e.to_json() for e in self.entries]}

    @classmethod
    def from_json(cls, data) -> "CylinderAssignment":
        return cls(int(data["level"]), tuple(
            CylinderEntry(e["sigma"], RationalBall(int(e["center"]), parse_rational(e["radius"])))
            for e in data["entries"]))


def prefix_code(count: int) -> list[str]:
    """``count`` pairwise incomparable strings whose cylinders exhaust 2^omega.

    The first shortest leaf is split until there are enough leaves, so
    with count >= 2^d every string has length at least d.
    """
    leaves = [""]
    while len(leaves) < count:
        i = min(range(len(leaves)), key=lambda m: len(leaves[m]))
        leaves[i:i + 1] = [leaves[i] + "0", leaves[i] + "1"]
    return sorted(leaves)


# -- searching for disjoint covers -------------------------------------------------------

class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def tick(self, what: str, n: int = 1):
        self.used += n
        if self.used > self.budget:
            raise SearchBudgetExhausted(f"{what}: candidate budget of {self.budget} balls exhausted")


class _Regions:
    """Net points sorted by the parent ball their net ball formally sits in.

    With no parents the whole space is one region.  Net points whose net
    ball is certified inside no parent are kept aside: a cover check at
    that level must then prove them disjoint from the region in question.
    """

    def __init__(self, Xc: PresentedSpace, parents: Sequence[Optional[RationalBall]], prec: int):
        self.Xc = Xc
        self.parents = list(parents)
        self.prec = prec
        self._levels: dict = {}

    def level(self, m: int):
        if m not in self._levels:
            e = two_pow(m)
            buckets = [[] for _ in self.parents]
            loose = []
            for n in self.Xc.net(m):
                nb = RationalBall(n, e)
                for i, p in enumerate(self.parents):
                    if p is None or formal_inclusion(self.Xc, nb, p, self.prec):
                        buckets[i].append(n)
                        break
                else:
                    loose.append(n)
            self._levels[m] = (buckets, loose)
        return self._levels[m]

    def covered(self, i: int, balls, m: int) -> Optional[bool]:
        buckets, loose = self.level(m)
        e = two_pow(m)
        parent = self.parents[i]
        for n in loose:
            if parent is None or not formally_disjoint(self.Xc, RationalBall(n, e), parent, self.prec):
                return None
        for n in buckets[i]:
            nb = RationalBall(n, e)
            if not any(formal_inclusion(self.Xc, nb, b, self.prec) for b in balls):
                return False
        return True


def _level_for(radius: Fraction, cap: int) -> int:
    m = 0
    while two_pow(m) >= radius and m < cap:
        m += 1
    return m


def _attempt(regions: _Regions, i: int, radius: Fraction, min_count: int,
             counter: _Counter, budgets: Budgets, what: str) -> Optional[list[RationalBall]]:
    """Greedy cover of region i by pairwise formally disjoint balls of one radius."""
    Xc, parent, cap, prec = regions.Xc, regions.parents[i], budgets.precision_cap, regions.prec
    chosen: list[RationalBall] = []
    seen = set()
    top = min(_level_for(radius, cap) + 4, cap)
    for level in range(top + 1):
        fresh = [n for n in regions.level(level)[0][i] if n not in seen]
        counter.tick(what, len(fresh))
        for n in fresh:
            seen.add(n)
            b = RationalBall(n, radius)
            if parent is not None and not formal_inclusion(Xc, b, parent, prec):
                continue
            if all(formally_disjoint(Xc, b, c, prec) for c in chosen):
                chosen.append(b)
        if not chosen:
            continue
        for check in range(level, top + 1):
            covered = regions.covered(i, chosen, check)
            if covered is not None:
                break
        if covered and len(chosen) >= min_count:
            return sorted(chosen, key=lambda b: b.center)
    return None


def _critical_radii(regions: _Regions, max_radius: Fraction, level: int) -> list[Fraction]:
    """Values where some formal check of a same-radius cover can change outcome.

    With d ranging over distances between net points of one region and R
    over parent radii, the checks compare r with d, d / 2 and R - d.
    """
    Xc = regions.Xc
    buckets, _ = regions.level(level)
    crit = {max_radius}
    for i, pts in enumerate(buckets):
        R = regions.parents[i].radius if regions.parents[i] is not None else None
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                d = Xc.metric(pts[a], pts[b], level + 4)
                crit.update((d, d / 2))
                if R is not None:
                    crit.add(R - d)
    return sorted((c for c in crit if 0 < c <= max_radius), reverse=True)


def _level_cover(Xc: PresentedSpace, parents: Sequence[Optional[RationalBall]], needs: Sequence[int],
                 max_radius: Fraction, resolution: int, counter: _Counter, budgets: Budgets,
                 what: str) -> list[list[RationalBall]]:
    """Covers of every parent region using one common radius.

    Candidate radii are max_radius itself, then, for each gap between
    consecutive critical values (largest first), the largest multiple of
    2^-resolution strictly inside the gap.  The first radius for which
    every region has a disjoint cover wins.
    """
    regions = _Regions(Xc, parents, _check_precision(resolution))

    def attempt(r):
        out = []
        for i in range(len(parents)):
            got = _attempt(regions, i, r, needs[i], counter, budgets, what)
            if got is None:
                return None
            out.append(got)
        return out

    best = attempt(max_radius)
    if best is not None:
        return best
    level = min(_level_for(max_radius, budgets.precision_cap) + 4, budgets.precision_cap)
    crit = _critical_radii(regions, max_radius, level) + [Fraction(0)]
    scale = 1 << resolution
    for hi, lo in zip(crit, crit[1:]):
        # two grid steps below hi, so checks at _check_precision can tell
        a = -(-hi.numerator * scale // hi.denominator) - 2
        r = Fraction(a, scale)
        if r <= lo or r <= 0:
            continue
        best = attempt(r)
        if best is not None:
            return best
    raise SearchBudgetExhausted(f"{what}: no cover by pairwise formally disjoint balls found")


def _resolution(s: int) -> int:
    """Radii at level s are multiples of 2^-_resolution(s)."""
    return 2 * s + 12


def _check_precision(resolution: int) -> int:
    return resolution + 4


def initial_cover(Xc: PresentedSpace, s: int = 0, budget: Optional[int] = None) -> CylinderAssignment:
    budgets = default_budgets()
    counter = _Counter(budgets.cantor if budget is None else budget)
    (balls,) = _level_cover(Xc, [None], [1 << s], two_pow(s + 1), _resolution(s), counter, budgets,
                            f"initial cover of {Xc.label} at level {s}")
    codes = prefix_code(len(balls))
    return CylinderAssignment(s, tuple(CylinderEntry(c, b) for c, b in zip(codes, balls)))


def refine(Xc: PresentedSpace, h: CylinderAssignment, budget: Optional[int] = None) -> CylinderAssignment:
    """Level s + 1 from level s: split every ball and its cylinder."""
    budgets = default_budgets()
    counter = _Counter(budgets.cantor if budget is None else budget)
    s = h.level + 1
    parents = [e.ball for e in h.entries]
    needs = [1 << max(0, s - len(e.sigma)) for e in h.entries]
    max_radius = min([two_pow(s + 1)] + [b.radius for b in parents])
    covers = _level_cover(Xc, parents, needs, max_radius, _resolution(s), counter, budgets,
                          f"refining level {h.level} of {Xc.label}")
    out = []
    for e, balls in zip(h.entries, covers):
        codes = prefix_code(len(balls))
        out.extend(CylinderEntry(e.sigma + c, b) for c, b in zip(codes, balls))
    return CylinderAssignment(s, tuple(out))


def _comparable(a: str, b: str) -> bool:
    return a.startswith(b) or b.startswith(a)


def check_assignment(Xc: PresentedSpace, h: CylinderAssignment,
                     parent: Optional[CylinderAssignment] = None) -> list[str]:
    """Machine check of the level invariants; returns the list of violations."""
    problems = []
    prec = _check_precision(_resolution(h.level))
    depth = default_budgets().precision_cap
    sigmas = [e.sigma for e in h.entries]
    balls = h.balls()
    for i in range(len(sigmas)):
        for j in range(i + 1, len(sigmas)):
            if _comparable(sigmas[i], sigmas[j]):
                problems.append(f"c1: strings {sigmas[i]!r} and {sigmas[j]!r} are comparable")
            if not separated(Xc, balls[i], balls[j], prec):
                problems.append(f"c1: balls {i} and {j} not formally disjoint")
    if sum(Fraction(1, 1 << len(s)) for s in sigmas) != 1:
        problems.append("c1: cylinders do not exhaust 2^omega")
    for e in h.entries:
        if len(e.sigma) < h.level:
            problems.append(f"c1: string {e.sigma!r} shorter than the level")
        if 2 * e.ball.radius > two_pow(h.level):
            problems.append(f"c1: ball around {e.ball.center} has formal diameter above 2^-{h.level}")
    if not verify_cover(Xc, balls, depth, prec):
        problems.append("c3: balls do not cover the space")
    if parent is not None:
        for p in parent.entries:
            kids = [e for e in h.entries if e.sigma.startswith(p.sigma)]
            mass = sum(Fraction(1, 1 << (len(e.sigma) - len(p.sigma))) for e in kids)
            if mass != 1:
                problems.append(f"c2: children of {p.sigma!r} do not exhaust its cylinder")
            for e in kids:
                if not formally_included(Xc, e.ball, p.ball, prec):
                    problems.append(f"c4: ball of {e.sigma!r} not formally inside that of {p.sigma!r}")
        for e in h.entries:
            if not any(e.sigma.startswith(p.sigma) for p in parent.entries):
                problems.append(f"c2: string {e.sigma!r} extends no parent string")
    return problems


@dataclass(eq=False)
class CantorHomeomorphism:
    """The map 2^omega -> Xc; levels beyond ``depth`` are built on demand."""

    space: PresentedSpace
    depth: int
    max_depth: int = 16
    budget: Optional[int] = None
    levels: list = field(default_factory=list)
    check: bool = True

    def level(self, s: int) -> CylinderAssignment:
        if s > self.max_depth:
            raise PrecisionLimit(f"cylinder levels are capped at {self.max_depth}")
        while len(self.levels) <= s:
            if not self.levels:
                nxt = initial_cover(self.space, 0, self.budget)
                prev = None
            else:
                prev = self.levels[-1]
                nxt = refine(self.space, prev, self.budget)
            if self.check:
                problems = check_assignment(self.space, nxt, prev)
                if problems:
                    raise SearchBudgetExhausted(
                        f"level {nxt.level} failed its checks: {problems[0]}", certified=len(self.levels) - 1)
            self.levels.append(nxt)
        return self.levels[s]

    def modulus(self, k: int) -> int:
        return self.level(max(k, 0)).max_sigma_length()

    def image(self, bits: str, k: int) -> int:
        """Index of a center within 2^-k of the image of any sequence starting with ``bits``."""
        return self.level(max(k, 0)).entry_for(bits).ball.center

    def transform(self, pt: PointName) -> PointName:
        def fn(k):
            m = self.modulus(k)
            return self.image(cantor_bits(pt(m), m), k)
        return PointName(fn)

    def as_map(self) -> ComputableMap:
        from .space import cantor_standard
        return ComputableMap(self.transform, self.modulus, source=cantor_standard(),
                             target=self.space, label=f"cantor->{self.space.label}")

    def to_json(self) -> list[dict]:
        return [lv.to_json() for lv in self.levels]


def build_homeomorphism(Xc: PresentedSpace, depth: int = 4, budget: Optional[int] = None,
                        max_depth: int = 16) -> CantorHomeomorphism:
    """Build and check levels 0..depth eagerly; deeper levels are added lazily when queried."""
    phi = CantorHomeomorphism(Xc, depth, max_depth, budget)
    phi.level(depth)
    return phi


def dumps_levels(levels: Sequence[CylinderAssignment]) -> str:
    return "\n".join(json.dumps(lv.to_json()) for lv in levels)
