"""Rational *-polynomials in commuting indeterminates x0, x1, ...

A polynomial is kept in normal form: literals inside a monomial are
sorted by (variable, starred), every monomial occurs at most once, and
zero coefficients are dropped.  Monomials are non-empty, so the unit of
an algebra enters only through a variable (x0 for induced presentations).

``poly_from_index`` and ``index_of`` are mutually inverse bijections
between N and normal-form polynomials.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from gmpy2 import mpq

from . import coding
from .errors import MissingVariable
from .exactnum import (
    Approximation,
    GaussianRational,
    format_gaussian,
    format_rational,
    parse_gaussian,
    parse_rational,
)

Literal = tuple[int, bool]
Monomial = tuple[Literal, ...]


def _term_order(item):
    mono = item[0]
    return (-len(mono), mono)


class StarPoly:
    """Immutable normal-form *-polynomial; ``terms`` is a tuple of (coef, monomial)."""

    __slots__ = ("terms", "_hash")

    def __init__(self, mapping: Mapping[Monomial, GaussianRational] = ()):
        items = dict(mapping)
        cleaned = {}
        for mono, coef in items.items():
            coef = GaussianRational.coerce(coef)
            if coef:
                cleaned[tuple(sorted(mono))] = coef
        ordered = sorted(cleaned.items(), key=_term_order)
        self.terms = tuple((c, m) for m, c in ordered)
        self._hash = None

    @classmethod
    def from_terms(cls, terms) -> "StarPoly":
        acc: dict = {}
        for coef, mono in terms:
            mono = tuple(sorted((int(j), bool(s)) for j, s in mono))
            acc[mono] = acc.get(mono, GaussianRational(0)) + GaussianRational.coerce(coef)
        return cls(acc)

    @classmethod
    def var(cls, j: int, starred: bool = False, coef=1) -> "StarPoly":
        return cls({((j, starred),): coef})

    @classmethod
    def constant_unit(cls, coef=1) -> "StarPoly":
        """``coef * x0``, the unit slot of an induced presentation."""
        return cls.var(0, False, coef)

    def as_dict(self) -> dict:
        return {m: c for c, m in self.terms}

    def variables(self) -> set[int]:
        return {j for _, m in self.terms for j, _ in m}

    def degree(self) -> int:
        return max((len(m) for _, m in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        return poly_combine("add", self, other)

    def __sub__(self, other):
        return poly_combine("add", self, poly_combine("scale", other, -1))

    def __mul__(self, other):
        if isinstance(other, StarPoly):
            return poly_combine("mul", self, other)
        return poly_combine("scale", self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return poly_combine("scale", self, -1)

    def adjoint(self):
        return poly_combine("adjoint", self)

    def __eq__(self, other):
        return isinstance(other, StarPoly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __repr__(self):
        return f"StarPoly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


# -- algebra -------------------------------------------------------------------

def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def poly_combine(op: str, p: StarPoly, q: Union[StarPoly, GaussianRational, int, Fraction, None] = None) -> StarPoly:
    """Symbolic add / mul / scale / adjoint, returned in normal form."""
    if op == "add":
        acc = p.as_dict()
        for c, m in q.terms:
            acc[m] = acc.get(m, GaussianRational(0)) + c
        return StarPoly(acc)
    if op == "mul":
        acc: dict = {}
        for c1, m1 in p.terms:
            for c2, m2 in q.terms:
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, GaussianRational(0)) + c1 * c2
        return StarPoly(acc)
    if op == "scale":
        c = GaussianRational.coerce(q)
        return StarPoly({m: c * coef for coef, m in p.terms})
    if op == "adjoint":
        return StarPoly(
            {tuple((j, not s) for j, s in m): coef.conj() for coef, m in p.terms}
        )
    raise ValueError(f"unknown polynomial operation {op!r}")


# -- enumeration ---------------------------------------------------------------

def _literal_code(lit: Literal) -> int:
    return 2 * lit[0] + int(lit[1])


def _monomial_code(mono: Monomial) -> int:
    codes = [_literal_code(l) for l in mono]
    gaps = [codes[0]] + [b - a for a, b in zip(codes, codes[1:])]
    return coding.encode_nonempty_seq(gaps)


def _monomial_from_code(n: int) -> Monomial:
    gaps = coding.decode_nonempty_seq(n)
    lits, acc = [], 0
    for g in gaps:
        acc += g
        lits.append((acc // 2, bool(acc % 2)))
    return tuple(lits)


def _coef_code(c: GaussianRational) -> int:
    return coding.pair(coding.encode_rational(c.re), coding.encode_rational(c.im)) - 1


def _coef_from_code(n: int) -> GaussianRational:
    a, b = coding.unpair(n + 1)
    return GaussianRational(coding.decode_rational(a), coding.decode_rational(b))


def index_of(p: StarPoly) -> int:
    """Inverse of :func:`poly_from_index`."""
    coded = sorted((_monomial_code(m), c) for c, m in p.terms)
    term_codes, prev = [], -1
    for mcode, c in coded:
        term_codes.append(coding.pair(mcode - prev - 1, _coef_code(c)))
        prev = mcode
    return coding.encode_seq(term_codes)


@lru_cache(maxsize=1 << 16)
def poly_from_index(n: int) -> StarPoly:
    """The n-th normal-form polynomial; total and onto."""
    acc, prev = {}, -1
    for t in coding.decode_seq(n):
        gap, ccode = coding.unpair(t)
        mcode = prev + 1 + gap
        acc[_monomial_from_code(mcode)] = _coef_from_code(ccode)
        prev = mcode
    return StarPoly(acc)


# -- evaluation and bounds -------------------------------------------------------

def eval_poly(p: StarPoly, args: Mapping[int, Approximation]) -> Approximation:
    """Interval-sound substitution; a starred literal is the conjugate."""
    cache: dict = {}
    total = Approximation(GaussianRational(0), Fraction(0))
    for coef, mono in p.terms:
        term = None
        for lit in mono:
            v = cache.get(lit)
            if v is None:
                try:
                    base = args[lit[0]]
                except KeyError:
                    raise MissingVariable(f"no value supplied for x{lit[0]}") from None
                v = base.conj() if lit[1] else base
                cache[lit] = v
            term = v if term is None else term * v
        total = total + term * coef
    return total


@lru_cache(maxsize=1 << 14)
def _real_form(p: StarPoly):
    return tuple((mpq(c.re), mpq(c.im), tuple(j for j, _ in m)) for c, m in p.terms)


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def eval_poly_real_args(p: StarPoly, values: Mapping[int, object]) -> GaussianRational:
    """Exact value of p when every generator value is a known real number.

    Values may be Fractions or gmpy2 rationals; the arithmetic runs in gmpy2.
    """
    re = mpq(0)
    im = mpq(0)
    for cre, cim, js in _real_form(p):
        prod = mpq(1)
        for j in js:
            prod *= values[j]
        if cre:
            re += cre * prod
        if cim:
            im += cim * prod
    return GaussianRational(_to_fraction(re), _to_fraction(im))


@dataclass(frozen=True)
class GeneratorBounds:
    sup_bound: Fraction
    lip_bound: Fraction = Fraction(1)
    unit_is_x0: bool = True

    def __post_init__(self):
        if self.sup_bound < 0:
            raise ValueError("sup_bound must be non-negative")


def bounds_of(p: StarPoly, gb: GeneratorBounds) -> tuple[Fraction, Fraction]:
    """(B, L): sup bound and Lipschitz bound of p evaluated at the generators.

    The same L bounds how far p moves when every generator value is
    perturbed by at most 1, which is how evaluation uses it.
    """
    B = Fraction(0)
    L = Fraction(0)
    for coef, mono in p.terms:
        mb, ml = Fraction(1), Fraction(0)
        for j, _ in mono:
            if gb.unit_is_x0 and j == 0:
                gbj, glj = Fraction(1), Fraction(0)
            else:
                gbj, glj = Fraction(gb.sup_bound), Fraction(gb.lip_bound)
            mb, ml = mb * gbj, mb * glj + gbj * ml
        a = coef.abs_upper()
        B += a * mb
        L += a * ml
    return B, L


@lru_cache(maxsize=1 << 16)
def bounds_of_index(n: int, gb: GeneratorBounds) -> tuple[Fraction, Fraction]:
    return bounds_of(poly_from_index(n), gb)


# -- text format ---------------------------------------------------------------

def _format_mono(mono: Monomial) -> str:
    return "*".join(f"x{j}{'*' if s else ''}" for j, s in mono)


def format_poly(p: StarPoly) -> str:
    if not p.terms:
        return "0"
    out = []
    for i, (c, m) in enumerate(p.terms):
        if c.im:
            body = f"({format_gaussian(c)})*{_format_mono(m)}"
            out.append(body if i == 0 else f" + {body}")
            continue
        mag = f"{format_rational(abs(c.re))}*{_format_mono(m)}"
        if i == 0:
            out.append(mag if c.re > 0 else f"-{mag}")
        else:
            out.append(f" + {mag}" if c.re > 0 else f" - {mag}")
    return "".join(out)


_TERM = re.compile(
    r"\s*([+-])?\s*(\([^)]*\)|\d+(?:/\d+)?)((?:\*x\d+(?:\*(?!x))?)+)"
)
_VAR = re.compile(r"\*x(\d+)(\*(?!x))?")


def parse_poly(text: str) -> StarPoly:
    s = text.strip()
    if s == "0":
        return StarPoly()
    pos, terms = 0, []
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, coef_txt, vars_txt = m.groups()
        if coef_txt.startswith("("):
            coef = parse_gaussian(coef_txt[1:-1])
        else:
            coef = GaussianRational(parse_rational(coef_txt))
        if sign == "-":
            coef = -coef
        mono = tuple((int(j), bool(st)) for j, st in _VAR.findall(vars_txt))
        terms.append((coef, mono))
        pos = m.end()
        if pos < len(s) and s[pos] not in " +-":
            raise ValueError(f"unexpected character {s[pos]!r} in polynomial")
    return StarPoly.from_terms(terms)
