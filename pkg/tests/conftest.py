import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from fischerdecomp.ratpoly import Polynomial, monomials_of_multidegree

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polynomials(draw, k=None, m=None, max_degree=4, max_terms=5):
    k = k if k is not None else draw(st.integers(1, 2))
    m = m if m is not None else draw(st.integers(1, 3))
    n = k * m
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        deg = draw(st.integers(0, max_degree))
        e = [0] * n
        for _ in range(deg):
            e[draw(st.integers(0, n - 1))] += 1
        terms[tuple(e)] = draw(coefficients)
    return Polynomial(k, m, terms)


@st.composite
def polynomial_triples(draw, max_degree=3):
    k = draw(st.integers(1, 2))
    m = draw(st.integers(1, 3))
    return tuple(draw(polynomials(k, m, max_degree)) for _ in range(3))


def random_homogeneous(rng: random.Random, k, m, d, terms=4):
    """Random polynomial of multidegree d with small rational coefficients."""
    monos = monomials_of_multidegree(k, m, d)
    out = {}
    for e in rng.sample(monos, min(terms, len(monos))):
        out[e] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    return Polynomial(k, m, out)


@pytest.fixture
def rng():
    return random.Random(20261019)
