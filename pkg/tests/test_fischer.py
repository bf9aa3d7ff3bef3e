import itertools
import random
from fractions import Fraction
from math import factorial, prod

import pytest
import sympy
from hypothesis import given, strategies as st

from fischerdecomp.errors import AmbientMismatch, ResourceCapExceeded
from fischerdecomp.fischer import (
    ExponentMatrix,
    directness_record,
    directness_report,
    exponent_matrices_within,
    fischer_decompose,
    fischer_ip,
    harmonic_split,
    is_unique_decomposition,
    pairs,
    reassemble,
)
from fischerdecomp.harmonics import harmonic_basis, laplacians
from fischerdecomp.ratpoly import Polynomial, compositions, monomials_of_multidegree, parse
from fischerdecomp.weyl import apply, laplacian, rsquared, rsquared_polynomial

from .conftest import polynomials, random_homogeneous
from .oracles import fischer_by_differentiation, sympy_laplacian, symbols, to_sympy


def is_harmonic(p):
    return all(not apply(op, p) for op in laplacians(p.k, p.m))


def projection_oracle(p, d):
    """Fischer projection onto harmonics of multidegree d, computed with sympy matrices."""
    k, m = p.k, p.m
    monos = monomials_of_multidegree(k, m, d)
    xs = symbols(k, m)
    mono_exprs = [prod(x ** a for x, a in zip(xs, e)) for e in monos]
    rows = []
    targets = {}
    for (i, j) in pairs(k):
        for col, me in enumerate(mono_exprs):
            img = sympy.Poly(sympy_laplacian(me, k, m, i, j), *xs) if sympy_laplacian(me, k, m, i, j) != 0 else None
            if img is None:
                continue
            for e, c in img.terms():
                targets.setdefault((i, j, e), {})[col] = c
    A = sympy.zeros(max(len(targets), 1), len(monos))
    for r, entries in enumerate(targets.values()):
        for c, v in entries.items():
            A[r, c] = v
    B = A.nullspace()
    if not B:
        return Polynomial.zero(k, m)
    B = sympy.Matrix.hstack(*B)
    W = sympy.diag(*[prod(factorial(a) for a in e) for e in monos])
    vec = sympy.Matrix([sympy.Rational(p.coefficient(e).numerator, p.coefficient(e).denominator) for e in monos])
    c = (B.T * W * B).solve(B.T * W * vec)
    h = B * c
    return Polynomial(k, m, {e: Fraction(int(h[n].p), int(h[n].q)) for n, e in enumerate(monos)})


# -- inner product ------------------------------------------------------------


def test_fischer_ip_examples():
    one = parse("1", 1, 1)
    assert fischer_ip(one, one) == 1
    x2 = parse("x1_1^2", 1, 1)
    assert fischer_ip(x2, x2) == 2
    assert fischer_ip(parse("x1_1", 1, 2), parse("x1_2", 1, 2)) == 0
    with pytest.raises(AmbientMismatch):
        fischer_ip(one, parse("1", 1, 2))


def test_fischer_pairing_is_diagonal_with_factorials():
    rng = random.Random(3)
    k, m = 2, 2
    monos = [e for t in range(7) for e in compositions(t, k * m)]
    for _ in range(200):
        a, b = rng.choice(monos), rng.choice(monos)
        val = fischer_ip(Polynomial.monomial(k, m, a), Polynomial.monomial(k, m, b))
        assert val == (prod(factorial(x) for x in a) if a == b else 0)


@given(polynomials(k=2, m=2, max_degree=3), polynomials(k=2, m=2, max_degree=3))
def test_fischer_ip_matches_literal_differentiation(p, q):
    assert fischer_ip(p, q) == fischer_by_differentiation(p, q)


@given(polynomials(k=2, m=2, max_degree=4), polynomials(k=2, m=2, max_degree=4))
def test_fischer_ip_symmetric_and_positive(p, q):
    assert fischer_ip(p, q) == fischer_ip(q, p)
    if p:
        assert fischer_ip(p, p) > 0


def test_adjointness_random(rng):
    k, m = 2, 3
    for _ in range(40):
        i, j = rng.choice(pairs(k))
        d = (rng.randint(0, 2), rng.randint(0, 2))
        up = list(d)
        up[i - 1] += 1
        up[j - 1] += 1
        p = random_homogeneous(rng, k, m, d)
        q = random_homogeneous(rng, k, m, tuple(up))
        lhs = fischer_ip(apply(rsquared(k, m, i, j), p), q)
        assert lhs == fischer_ip(p, apply(laplacian(k, m, i, j), q))


# -- harmonic split -----------------------------------------------------------


def test_split_of_harmonic_is_trivial():
    h = parse("x1_1*x2_2 + x1_2*x2_1 - x1_1*x2_1 + x1_2*x2_2", 2, 2)
    assert is_harmonic(h)
    H, Q = harmonic_split(h)
    assert H == h
    assert all(not q for q in Q.values())


def test_split_one_variable_square():
    k, m = 1, 2
    H, Q = harmonic_split(parse("x1_1^2", k, m))
    assert H == parse("x1_1^2 - 1/2*(x1_1^2 + x1_2^2)", k, m)
    assert Q == {(1, 1): parse("1/2", k, m)}
    assert not apply(laplacian(k, m, 1, 1), H)


def test_split_mixed_product_in_one_dimension():
    k, m = 2, 1
    H, Q = harmonic_split(parse("x1_1*x2_1", k, m))
    assert H.is_zero()
    assert Q[(1, 2)] == parse("1", k, m)
    assert Q[(1, 1)].is_zero() and Q[(2, 2)].is_zero()


def test_split_rejects_inhomogeneous():
    with pytest.raises(ValueError, match="homogeneous"):
        harmonic_split(parse("x1_1 + 1", 1, 2))


def test_split_chooses_least_norm_cofactors():
    # x^2 y^2 = r11 r22 = r12^2 when m = 1; the least-norm choice mixes the two
    k, m = 2, 1
    p = parse("x1_1^2*x2_1^2", k, m)
    H, Q = harmonic_split(p)
    assert H.is_zero()
    assert Q == {(1, 1): parse("1/4*x2_1^2", k, m), (1, 2): parse("1/2*x1_1*x2_1", k, m),
                 (2, 2): parse("1/4*x1_1^2", k, m)}
    norm = sum(fischer_ip(q, q) for q in Q.values())
    alternatives = [
        {(1, 1): parse("x2_1^2", k, m)},
        {(1, 2): parse("x1_1*x2_1", k, m)},
        {(2, 2): parse("x1_1^2", k, m)},
    ]
    for alt in alternatives:
        assert sum(fischer_ip(q, q) for q in alt.values()) > norm


@pytest.mark.parametrize("k, m, d", [(1, 3, (3,)), (2, 2, (2, 1)), (2, 3, (2, 2)), (2, 1, (3, 2)), (3, 2, (1, 1, 2))])
def test_split_matches_projection_oracle(k, m, d, rng):
    for _ in range(3):
        p = random_homogeneous(rng, k, m, d, terms=6)
        H, Q = harmonic_split(p)
        assert H == projection_oracle(p, d)
        total = H
        for (i, j), q in Q.items():
            total = total + rsquared_polynomial(k, m, i, j) * q
        assert total == p


@given(polynomials(k=2, m=2, max_degree=4))
def test_projection_idempotent(p):
    for part in p.multidegree_split().values():
        H, _ = harmonic_split(part)
        H2, Q2 = harmonic_split(H) if H else (H, {})
        assert H2 == H
        assert all(not q for q in Q2.values())


def test_split_resource_cap():
    p = parse("x1_1^4*x2_1^4", 2, 4)
    with pytest.raises(ResourceCapExceeded):
        harmonic_split(p, cap=100)


# -- decomposition ------------------------------------------------------------


def test_decompose_harmonic():
    h = parse("x1_1^2 - x1_2^2", 1, 2)
    comps = fischer_decompose(h)
    assert len(comps) == 1
    assert comps[0].n == ExponentMatrix.zero(1) and comps[0].harmonic == h


def test_decompose_one_variable_square():
    k, m = 1, 2
    comps = fischer_decompose(parse("x1_1^2", k, m))
    assert [(c.n.entries, c.harmonic) for c in comps] == [
        ((0,), parse("1/2*x1_1^2 - 1/2*x1_2^2", k, m)),
        ((1,), parse("1/2", k, m)),
    ]


def test_decompose_collapse_case_gives_valid_representative():
    k, m = 2, 1
    p = parse("x1_1^2*x2_1^2", k, m)
    comps = fischer_decompose(p)
    assert reassemble(comps, k, m) == p
    assert {c.n.entries for c in comps} <= {(1, 0, 1), (0, 2, 0)}
    assert not is_unique_decomposition(p)
    # both monomials of the relation reproduce p on their own
    assert ExponentMatrix(k, (1, 0, 1)).polynomial(m) == p
    assert ExponentMatrix(k, (0, 2, 0)).polynomial(m) == p


def test_decompose_zero():
    assert fischer_decompose(Polynomial.zero(2, 3)) == []


@given(polynomials(k=2, m=3, max_degree=5, max_terms=6))
def test_decompose_reassembles_with_harmonic_parts(p):
    comps = fischer_decompose(p)
    assert reassemble(comps, 2, 3) == p
    for c in comps:
        assert c.harmonic and is_harmonic(c.harmonic)
    assert len({c.n for c in comps}) == len(comps)


@given(polynomials(k=1, m=3, max_degree=6))
def test_decompose_k1_unique_by_degree(p):
    comps = fischer_decompose(p)
    assert reassemble(comps, 1, 3) == p
    assert is_unique_decomposition(p)


@pytest.mark.parametrize("k, m", [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (2, 4)])
def test_reconstruction_sweep(k, m, rng):
    for _ in range(10):
        d = tuple(rng.randint(0, 3) for _ in range(k))
        p = random_homogeneous(rng, k, m, d, terms=5)
        assert reassemble(fischer_decompose(p), k, m) == p


# -- directness ---------------------------------------------------------------


def test_exponent_matrices_within():
    assert [n.entries for n in exponent_matrices_within(2, (2, 2))] == [
        (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 2, 0)]
    assert len(exponent_matrices_within(1, (5,))) == 3
    for n in exponent_matrices_within(3, (2, 3, 1)):
        assert all(a <= b for a, b in zip(n.degree_shift(), (2, 3, 1)))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_classical_case_is_direct(m):
    report = directness_report(1, m, 6)
    assert report.direct
    for r in report.records:
        assert r.rank == r.assembled_dim == r.ambient_dim


@pytest.mark.parametrize("m", [3, 4, 5])
def test_semistable_is_direct(m):
    report = directness_report(2, m, 4)
    assert report.direct
    for r in report.records:
        assert r.rank == r.assembled_dim == r.ambient_dim


@pytest.mark.parametrize("m", [1, 2])
def test_non_stable_collapses(m):
    report = directness_report(2, m, 4)
    assert not report.direct
    for r in report.collapses():
        assert r.rank == r.ambient_dim < r.assembled_dim
        assert len(r.witnesses) == r.assembled_dim - r.rank
        for w in r.witnesses:
            assert w[next(i for i, c in enumerate(w) if c)] == 1
            assert r.witness_polynomial(w).is_zero()


def test_m1_witness_at_2_2():
    rec = directness_report(2, 1, 4).record((2, 2))
    assert len(rec.witnesses) == 1
    labels = [f.n.entries for f in rec.family]
    w = dict(zip(labels, rec.witnesses[0]))
    assert w == {(1, 0, 1): 1, (0, 2, 0): -1}
    # the relation by hand: r11 r22 - r12^2 = x^2 y^2 - (x y)^2
    x, y = parse("x1_1", 2, 1), parse("x2_1", 2, 1)
    assert (x * x) * (y * y) - (x * y) ** 2 == 0


def test_directness_cap():
    with pytest.raises(ResourceCapExceeded):
        directness_record(2, 5, (4, 4), cap=1000)


def test_report_serialisation_is_exact():
    rep = directness_report(2, 1, 4).to_dict()
    rec = [r for r in rep["records"] if r["multidegree"] == [2, 2]][0]
    assert rec["witnesses"] == [["1", "-1"]]
    assert rep["direct"] is False
