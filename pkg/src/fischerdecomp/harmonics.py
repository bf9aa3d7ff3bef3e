"""Bases of spherical and simplicial harmonics as exact joint kernels.

A harmonic of multidegree ``d`` is a polynomial in the space of multidegree
``d`` killed by every mixed Laplacian ``D{i}{j}``.  Simplicial harmonics are
additionally killed by the Euler operators ``H{i}{j}`` with ``i < j``.  Both
are computed by exact elimination on the monomial coordinates, with columns in
canonical monomial order, so the returned bases are reduced and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import linalg, repcomb
from .errors import ResourceCapExceeded
from .ratpoly import (
    DEFAULT_CAP,
    Polynomial,
    compositions,
    homogeneous_dimension,
    monomials_of_multidegree,
    multidegrees_up_to,
)
from .parallel import ordered_map
from .weyl import WeylElement, apply, euler, laplacian


@dataclass(frozen=True)
class HarmonicBasis:
    multidegree: tuple[int, ...]
    basis: tuple[Polynomial, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class SimplicialBasis:
    partition: tuple[int, ...]
    basis: tuple[Polynomial, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class IsotypicRecord:
    multidegree: tuple[int, ...]
    lhs: int
    rhs: int
    # (partition, dim of simplicial space, Kostka number) for every contributing partition
    terms: tuple[tuple[tuple[int, ...], int, int], ...] = field(default=())

    @property
    def match(self) -> bool:
        return self.lhs == self.rhs


def laplacians(k: int, m: int) -> list[WeylElement]:
    return [laplacian(k, m, i, j) for i in range(1, k + 1) for j in range(i, k + 1)]


def raising_eulers(k: int, m: int) -> list[WeylElement]:
    return [euler(k, m, i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]


def lowering_eulers(k: int, m: int) -> list[WeylElement]:
    return [euler(k, m, i, j) for i in range(1, k + 1) for j in range(1, i)]


def joint_kernel(ops: Sequence[WeylElement], k: int, m: int, d: Sequence[int],
                 cap: int | None = DEFAULT_CAP) -> list[Polynomial]:
    """Basis of the common kernel of ``ops`` inside the space of multidegree ``d``."""
    monos = monomials_of_multidegree(k, m, tuple(d), cap)
    if not monos:
        return []
    target: dict = {}
    columns = []
    for e in monos:
        x = Polynomial.monomial(k, m, e)
        col = {}
        for n, op in enumerate(ops):
            for f, c in apply(op, x).items():
                col[target.setdefault((n, f), len(target))] = c
        columns.append(col)
    rows = linalg.transpose(columns)
    basis = []
    for v in linalg.nullspace(rows, len(monos)):
        basis.append(Polynomial(k, m, {monos[c]: x for c, x in v.items()}))
    return basis


def _check_cap(k, m, d, cap):
    # raise ResourceCapExceeded before touching the cache
    if cap is not None:
        dim = homogeneous_dimension(m, d)
        if dim > cap:
            raise ResourceCapExceeded(dim, cap, f"space of multidegree {tuple(d)}")


@lru_cache(maxsize=None)
def _harmonic(k, m, d):
    return tuple(joint_kernel(laplacians(k, m), k, m, d, None))


@lru_cache(maxsize=None)
def _simplicial(k, m, a):
    return tuple(joint_kernel(laplacians(k, m) + raising_eulers(k, m), k, m, a, None))


def harmonic_basis(k: int, m: int, d: Sequence[int], cap: int | None = DEFAULT_CAP) -> HarmonicBasis:
    d = tuple(d)
    if len(d) != k:
        raise ValueError(f"multidegree {d} has length {len(d)}, expected {k}")
    if any(x < 0 for x in d):
        raise ValueError(f"multidegree {d} has a negative entry")
    _check_cap(k, m, d, cap)
    return HarmonicBasis(d, _harmonic(k, m, d))


def simplicial_basis(k: int, m: int, a: Sequence[int], cap: int | None = DEFAULT_CAP) -> SimplicialBasis:
    """Basis of the harmonics of multidegree ``a`` killed by all ``H{i}{j}``, ``i < j``.

    Inadmissible labels are not rejected; their space simply comes out empty.
    """
    a = repcomb.pad(a, k)
    _check_cap(k, m, a, cap)
    return SimplicialBasis(repcomb.as_partition(a), _simplicial(k, m, a))


def isotypic_dimension_check(k: int, m: int, d: Sequence[int], cap: int | None = DEFAULT_CAP) -> IsotypicRecord:
    """Compare dim of harmonics of multidegree ``d`` with the sum over partitions
    ``a`` of dim(simplicial harmonics of ``a``) times the Kostka number K(a, d)."""
    d = tuple(d)
    lhs = harmonic_basis(k, m, d, cap).dimension
    rhs = 0
    terms = []
    for a in repcomb.partitions(sum(d), max_length=k):
        K = repcomb.kostka(a, d)
        if not K:
            continue
        s = simplicial_basis(k, m, a, cap).dimension
        rhs += s * K
        terms.append((a, s, K))
    return IsotypicRecord(d, lhs, rhs, tuple(terms))


def _isotypic_task(args):
    return isotypic_dimension_check(*args)


def isotypic_scan(k: int, m: int, D: int, cap: int | None = DEFAULT_CAP, jobs: int = 1) -> list[IsotypicRecord]:
    """Run :func:`isotypic_dimension_check` for every multidegree of total degree at most ``D``."""
    tasks = [(k, m, d, cap) for d in multidegrees_up_to(k, D)]
    return ordered_map(_isotypic_task, tasks, jobs)


def harmonic_dimension_table(k: int, m: int, total: int, cap: int | None = DEFAULT_CAP) -> dict:
    return {d: harmonic_basis(k, m, d, cap).dimension for d in compositions(total, k)}
