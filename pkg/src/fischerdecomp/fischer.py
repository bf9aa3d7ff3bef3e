"""Fischer inner product and the decomposition of polynomials into harmonics.

Every polynomial ``P`` can be written as a finite sum ``sum_n r2^n * H_n`` with
``H_n`` harmonic and ``r2^n`` a product of the quadratic invariants
``r2_ij = sum_s x{i}_s x{j}_s`` (``i <= j``).  The harmonic part of a
homogeneous polynomial is its orthogonal projection onto the harmonics under
the Fischer product; the cofactors ``Q_ij`` are the minimum-norm solution of
``P - H = sum r2_ij Q_ij``.

Whether the resulting sum is direct is decided per multidegree by exact rank
computations in :func:`directness_report`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence

from . import linalg
from .errors import AmbientMismatch, ResourceCapExceeded
from .harmonics import harmonic_basis
from .parallel import ordered_map
from .ratpoly import (
    DEFAULT_CAP,
    Polynomial,
    format_rational,
    homogeneous_dimension,
    monomial_index,
    monomials_of_multidegree,
    multidegrees_up_to,
    render,
)
from .weyl import apply, laplacian, rsquared_polynomial


def pairs(k: int) -> list[tuple[int, int]]:
    """Index pairs ``(i, j)`` with ``1 <= i <= j <= k`` in lexicographic order."""
    return [(i, j) for i in range(1, k + 1) for j in range(i, k + 1)]


@dataclass(frozen=True)
class ExponentMatrix:
    """Exponents ``n_ij`` (``i <= j``) of the product ``prod r2_ij^n_ij``."""

    k: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.k * (self.k + 1) // 2:
            raise ValueError("wrong number of entries for an exponent matrix")
        if any(x < 0 for x in self.entries):
            raise ValueError("exponents must be non-negative")

    @classmethod
    def zero(cls, k: int) -> "ExponentMatrix":
        return cls(k, (0,) * (k * (k + 1) // 2))

    @classmethod
    def from_dict(cls, k: int, values: dict) -> "ExponentMatrix":
        return cls(k, tuple(values.get(p, 0) for p in pairs(k)))

    def get(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.entries[pairs(self.k).index((i, j))]

    def bump(self, i: int, j: int, by: int = 1) -> "ExponentMatrix":
        pos = pairs(self.k).index((min(i, j), max(i, j)))
        e = list(self.entries)
        e[pos] += by
        return ExponentMatrix(self.k, tuple(e))

    @property
    def total(self) -> int:
        return sum(self.entries)

    def degree_shift(self) -> tuple[int, ...]:
        """Multidegree of the product ``r2^n``."""
        d = [0] * self.k
        for (i, j), n in zip(pairs(self.k), self.entries):
            d[i - 1] += n
            d[j - 1] += n
        return tuple(d)

    def sort_key(self):
        return (self.total, tuple(-x for x in self.entries))

    def as_list(self) -> list[list[int]]:
        return [[i, j, n] for (i, j), n in zip(pairs(self.k), self.entries)]

    def label(self) -> str:
        parts = [f"r{i}{j}^{n}" if n > 1 else f"r{i}{j}" for (i, j), n in zip(pairs(self.k), self.entries) if n]
        return "*".join(parts) if parts else "1"

    def polynomial(self, m: int) -> Polynomial:
        return _rsquared_power(self.k, m, self.entries)


@lru_cache(maxsize=4096)
def _rsquared_power(k, m, entries):
    p = Polynomial.constant(k, m)
    for (i, j), n in zip(pairs(k), entries):
        if n:
            p = p * rsquared_polynomial(k, m, i, j) ** n
    return p


def exponent_matrices_within(k: int, d: Sequence[int]) -> list[ExponentMatrix]:
    """All exponent matrices whose product has multidegree at most ``d`` componentwise."""
    ps = pairs(k)
    out = []

    def rec(pos, left, acc):
        if pos == len(ps):
            out.append(ExponentMatrix(k, tuple(acc)))
            return
        i, j = ps[pos]
        left = list(left)
        n = 0
        while left[i - 1] >= 0 and left[j - 1] >= 0:
            rec(pos + 1, left, acc + [n])
            left[i - 1] -= 1
            left[j - 1] -= 1
            n += 1

    rec(0, tuple(d), [])
    return sorted(out, key=ExponentMatrix.sort_key)


@dataclass(frozen=True)
class FischerComponent:
    n: ExponentMatrix
    harmonic: Polynomial

    def term(self) -> Polynomial:
        return self.n.polynomial(self.harmonic.m) * self.harmonic

    def to_dict(self) -> dict:
        return {"n": self.n.as_list(), "harmonic": render(self.harmonic)}


# -- inner product -------------------------------------------------------------


def fischer_ip(p: Polynomial, q: Polynomial) -> Fraction:
    """``[P(d)Q](0)``: monomials are orthogonal and ``(x^a, x^a) = a!``."""
    if p.ambient != q.ambient:
        raise AmbientMismatch(f"ambient {p.ambient} != {q.ambient}")
    if len(p) > len(q):
        p, q = q, p
    total = Fraction(0)
    for e, c in p.items():
        v = q.coefficient(e)
        if v:
            total += c * v * prod(factorial(x) for x in e if x > 1)
    return total


# -- harmonic split ------------------------------------------------------------


@lru_cache(maxsize=None)
def _projection_data(k, m, d):
    basis = harmonic_basis(k, m, d, None).basis
    gram = [{b: fischer_ip(basis[a], basis[b]) for b in range(len(basis))} for a in range(len(basis))]
    return basis, gram


@lru_cache(maxsize=None)
def _normal_operator(k, m, d):
    # matrix of sum_{i<=j} r2_ij * D_ij on the space of multidegree d
    monos = monomials_of_multidegree(k, m, d, None)
    index = monomial_index(monos)
    ops = [(rsquared_polynomial(k, m, i, j), laplacian(k, m, i, j)) for i, j in pairs(k)]
    columns = []
    for e in monos:
        x = Polynomial.monomial(k, m, e)
        img = Polynomial.zero(k, m)
        for r, lap in ops:
            img = img + r * apply(lap, x)
        columns.append(img.to_vector(index))
    rows = [{} for _ in monos]
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows[i][j] = v
    return monos, index, rows


def _homogeneous_degree(p: Polynomial) -> tuple[int, ...]:
    degs = p.multidegrees()
    if len(degs) != 1:
        raise ValueError(f"polynomial is not homogeneous (multidegrees {sorted(degs)})")
    return degs.pop()


def harmonic_split(p: Polynomial, cap: int | None = DEFAULT_CAP):
    """Split a homogeneous ``P`` as ``H + sum_{i<=j} r2_ij * Q[(i, j)]``.

    ``H`` is the Fischer-orthogonal projection of ``P`` onto the harmonics, so it
    is unique.  The ``Q`` returned is the one of least total Fischer norm,
    namely ``Q[(i, j)] = D_ij Y`` where ``Y`` solves ``sum r2_ij D_ij Y = P - H``.
    """
    k, m = p.ambient
    zero = Polynomial.zero(k, m)
    if not p:
        return zero, {ij: zero for ij in pairs(k)}
    d = _homogeneous_degree(p)
    dim = homogeneous_dimension(m, d)
    if cap is not None and dim > cap:
        raise ResourceCapExceeded(dim, cap, f"space of multidegree {d}")

    basis, gram = _projection_data(k, m, d)
    h = zero
    if basis:
        rhs = [fischer_ip(b, p) for b in basis]
        coeffs = linalg.solve(gram, rhs, len(basis))
        for a, c in coeffs.items():
            h = h + basis[a].scale(c)
    rest = p - h
    q = {ij: zero for ij in pairs(k)}
    if rest:
        monos, index, rows = _normal_operator(k, m, d)
        target = rest.to_vector(index)
        y_vec = linalg.solve(rows, [target.get(i, 0) for i in range(len(monos))], len(monos))
        if y_vec is None:
            raise ArithmeticError("residual is not in the image of the r^2 multiplications")
        y = Polynomial(k, m, {monos[i]: c for i, c in y_vec.items()})
        for i, j in pairs(k):
            q[(i, j)] = apply(laplacian(k, m, i, j), y)
    return h, q


def fischer_decompose(p: Polynomial, cap: int | None = DEFAULT_CAP) -> list[FischerComponent]:
    """Write ``P`` as ``sum_n r2^n * H_n`` with every ``H_n`` harmonic.

    The split is applied repeatedly to the cofactors.  Since it is linear,
    cofactors reaching the same exponent matrix are merged before splitting
    again, so each exponent matrix is visited once.  Components are sorted by
    total exponent, then with larger ``n_11, n_12, ...`` first; zero harmonic
    parts are dropped.
    """
    k, m = p.ambient
    result: dict[ExponentMatrix, Polynomial] = {}
    level: dict[ExponentMatrix, Polynomial] = {ExponentMatrix.zero(k): p} if p else {}
    while level:
        nxt: dict[ExponentMatrix, Polynomial] = {}
        for n, poly in level.items():
            for part in poly.multidegree_split().values():
                h, q = harmonic_split(part, cap)
                if h:
                    result[n] = result.get(n, Polynomial.zero(k, m)) + h
                for (i, j), qi in q.items():
                    if qi:
                        key = n.bump(i, j)
                        nxt[key] = nxt.get(key, Polynomial.zero(k, m)) + qi
        level = {n: v for n, v in nxt.items() if v}
    comps = [FischerComponent(n, h) for n, h in result.items() if h]
    return sorted(comps, key=lambda c: c.n.sort_key())


def reassemble(components: Sequence[FischerComponent], k: int, m: int) -> Polynomial:
    total = Polynomial.zero(k, m)
    for c in components:
        total = total + c.term()
    return total


# -- directness ----------------------------------------------------------------


@dataclass(frozen=True)
class FamilyMember:
    n: ExponentMatrix
    index: int  # position in the harmonic basis of the complementary multidegree
    harmonic: Polynomial

    def polynomial(self) -> Polynomial:
        return self.n.polynomial(self.harmonic.m) * self.harmonic


@dataclass(frozen=True)
class MultidegreeRecord:
    multidegree: tuple[int, ...]
    assembled_dim: int
    ambient_dim: int
    rank: int
    family: tuple[FamilyMember, ...]
    witnesses: tuple[tuple[Fraction, ...], ...]

    @property
    def direct(self) -> bool:
        return not self.witnesses

    def witness_polynomial(self, w: Sequence[Fraction]) -> Polynomial:
        """``sum w[i] * family[i]``; zero for every collapse witness."""
        total = None
        for c, member in zip(w, self.family):
            t = member.polynomial().scale(c)
            total = t if total is None else total + t
        if total is None:
            raise ValueError("empty family")
        return total

    def to_dict(self) -> dict:
        return {
            "multidegree": list(self.multidegree),
            "assembled_dim": self.assembled_dim,
            "ambient_dim": self.ambient_dim,
            "rank": self.rank,
            "family": [
                {"n": f.n.as_list(), "harmonic": render(f.harmonic)} for f in self.family
            ],
            "witnesses": [[format_rational(c) for c in w] for w in self.witnesses],
        }


@dataclass(frozen=True)
class DirectnessReport:
    k: int
    m: int
    degree: int
    records: tuple[MultidegreeRecord, ...] = field(default=())

    @property
    def direct(self) -> bool:
        return all(r.direct for r in self.records)

    def collapses(self) -> list[MultidegreeRecord]:
        return [r for r in self.records if r.witnesses]

    def record(self, d: Sequence[int]) -> MultidegreeRecord:
        d = tuple(d)
        for r in self.records:
            if r.multidegree == d:
                return r
        raise KeyError(d)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "degree": self.degree,
            "direct": self.direct,
            "records": [r.to_dict() for r in self.records],
        }


def directness_record(k: int, m: int, d: Sequence[int], cap: int | None = DEFAULT_CAP) -> MultidegreeRecord:
    """Rank analysis of the family ``r2^n * h`` spanning the polynomials of multidegree ``d``.

    Multiplication by a nonzero polynomial is injective, so the sum of the
    subspaces ``r2^n * harmonics`` is direct at ``d`` exactly when this family
    is linearly independent.  Each witness is a canonical kernel vector with
    leading coefficient 1.
    """
    d = tuple(d)
    dim = homogeneous_dimension(m, d)
    if cap is not None and dim > cap:
        raise ResourceCapExceeded(dim, cap, f"space of multidegree {d}")
    monos = monomials_of_multidegree(k, m, d, None)
    index = monomial_index(monos)
    family = []
    for n in exponent_matrices_within(k, d):
        rest = tuple(a - b for a, b in zip(d, n.degree_shift()))
        for pos, h in enumerate(harmonic_basis(k, m, rest, None).basis):
            family.append(FamilyMember(n, pos, h))
    columns = [f.polynomial().to_vector(index) for f in family]
    rows = linalg.transpose(columns)
    r = linalg.rank(rows)
    witnesses = []
    if r < len(family):
        for v in linalg.nullspace(rows, len(family)):
            lead = v[min(v)]
            witnesses.append(tuple(v.get(i, Fraction(0)) / lead for i in range(len(family))))
    return MultidegreeRecord(d, len(family), dim, r, tuple(family), tuple(witnesses))


def _record_task(args):
    return directness_record(*args)


def directness_report(k: int, m: int, D: int, cap: int | None = DEFAULT_CAP, jobs: int = 1) -> DirectnessReport:
    """Directness analysis for every multidegree of total degree at most ``D``."""
    if k < 1 or m < 1 or D < 0:
        raise ValueError("need k, m >= 1 and D >= 0")
    tasks = [(k, m, d, cap) for d in multidegrees_up_to(k, D)]
    records = ordered_map(_record_task, tasks, jobs)
    return DirectnessReport(k, m, D, tuple(records))


def is_unique_decomposition(p: Polynomial, cap: int | None = DEFAULT_CAP) -> bool:
    """True when the decomposition of ``p`` is forced, i.e. the sum is direct at every multidegree of ``p``."""
    k, m = p.ambient
    return all(directness_record(k, m, d, cap).direct for d in p.multidegrees())
