from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from newton_lct.monomial import MonomialIdeal
from newton_lct.valuation import MonomialValuation

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def exponents(dim, max_exp=6):
    return st.tuples(*[st.integers(0, max_exp)] * dim)


@st.composite
def ideals(draw, dim=None, max_gens=5, max_exp=6, proper=True):
    n = dim or draw(st.integers(1, 3))
    gens = draw(st.lists(exponents(n, max_exp), min_size=1, max_size=max_gens))
    a = MonomialIdeal(n, tuple(gens))
    if proper and a.is_unit:
        a = MonomialIdeal(n, ((1,) + (0,) * (n - 1),))
    return a


@st.composite
def ideal_pairs(draw, **kw):
    n = draw(st.integers(1, 3))
    return draw(ideals(dim=n, **kw)), draw(ideals(dim=n, **kw))


rationals = st.builds(Fraction, st.integers(0, 24), st.integers(1, 6))
positive_rationals = st.builds(Fraction, st.integers(1, 24), st.integers(1, 6))


@st.composite
def weights(draw, dim, positive=False):
    elem = positive_rationals if positive else rationals
    w = draw(st.tuples(*[elem] * dim))
    if not any(w):
        w = (Fraction(1),) + w[1:]
    return w


@st.composite
def valuations(draw, dim, positive=False):
    return MonomialValuation(draw(weights(dim, positive)))


@pytest.fixture
def x2y3():
    return MonomialIdeal.of((2, 0), (0, 3))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
