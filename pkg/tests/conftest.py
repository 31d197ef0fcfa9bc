from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import settings

from evalpres.exactnum import GaussianRational
from evalpres.starpoly import StarPoly

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-8, max_value=8, max_denominator=64)
unit_fractions = st.fractions(min_value=0, max_value=1, max_denominator=256)
gaussians = st.builds(GaussianRational, small_fractions, small_fractions)


@st.composite
def star_polys(draw, max_var=4, max_terms=4, max_degree=3, real=False):
    terms = []
    for _ in range(draw(st.integers(0, max_terms))):
        coef = draw(small_fractions) if real else draw(gaussians)
        mono = draw(st.lists(st.tuples(st.integers(0, max_var), st.booleans()),
                             min_size=1, max_size=max_degree))
        terms.append((coef, mono))
    return StarPoly.from_terms(terms)


@pytest.fixture(scope="session")
def unit_algebra():
    from evalpres.cstar import induce
    from evalpres.space import unit_interval
    return induce(unit_interval())


@pytest.fixture(scope="session")
def segments_algebra():
    from evalpres.cstar import induce
    from evalpres.space import segments
    return induce(segments())


def frac(text):
    return Fraction(text)
