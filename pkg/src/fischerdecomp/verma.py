"""Irreducibility conditions for generalized Verma modules of sp(2k) and a
finite-depth comparison of those modules with their realization in polynomials.

For a weight ``lam = (lam_1, ..., lam_k)`` the sufficient conditions are

* ``lam_i + lam_j - 2k + i + j - 2`` is not a negative integer, ``i < j``;
* ``lam_i - k + i - 1`` is not a negative integer.

"Negative integer" means an element of {-1, -2, ...}; zero passes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from . import linalg, repcomb
from .errors import ResourceCapExceeded
from .fischer import ExponentMatrix, pairs
from .harmonics import lowering_eulers, simplicial_basis
from .ratpoly import DEFAULT_CAP, Polynomial, compositions, format_rational, homogeneous_dimension
from .weyl import apply


def is_negative_integer(x: Fraction) -> bool:
    x = Fraction(x)
    return x.denominator == 1 and x <= -1


@dataclass(frozen=True)
class Condition:
    kind: str  # "1" for pairs, "2" for single indices
    indices: tuple[int, ...]
    value: Fraction

    @property
    def violated(self) -> bool:
        return is_negative_integer(self.value)

    def to_dict(self) -> dict:
        return {
            "condition": self.kind,
            "indices": list(self.indices),
            "value": format_rational(self.value),
            "violated": self.violated,
        }


@dataclass(frozen=True)
class ConditionReport:
    weight: tuple[Fraction, ...]
    pair_conditions: tuple[Condition, ...]
    index_conditions: tuple[Condition, ...]

    @property
    def irreducible_sufficient(self) -> bool:
        return not self.violations()

    def violations(self) -> list[Condition]:
        return [c for c in self.pair_conditions + self.index_conditions if c.violated]

    def to_dict(self) -> dict:
        return {
            "weight": [format_rational(x) for x in self.weight],
            "conditions": [c.to_dict() for c in self.pair_conditions + self.index_conditions],
            "irreducible_sufficient": self.irreducible_sufficient,
        }


def check_weight(lam: Sequence, k: int) -> ConditionReport:
    lam = tuple(Fraction(x) for x in lam)
    if len(lam) != k:
        raise ValueError(f"weight has length {len(lam)}, expected {k}")
    first = []
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            first.append(Condition("1", (i, j), lam[i - 1] + lam[j - 1] - 2 * k + i + j - 2))
    second = [Condition("2", (i,), lam[i - 1] - k + i - 1) for i in range(1, k + 1)]
    return ConditionReport(lam, tuple(first), tuple(second))


def check_partition(a: Sequence[int], m: int, k: int) -> ConditionReport:
    return check_weight(repcomb.shift(a, m, k), k)


def semistable(m: int, k: int) -> bool:
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    return m >= 2 * k - 1


def verma_graded_dim(a: Sequence[int], k: int, g: int) -> int:
    """Dimension of the degree-``g`` layer ``sum_{|n| = g} r2^n F``."""
    n_symbols = k * (k + 1) // 2
    return repcomb.gl_dim(a, k) * comb(g + n_symbols - 1, g)


@dataclass(frozen=True)
class CollapseRecord:
    g: int
    free_dim: int
    realized_dim: int

    @property
    def collapsed(self) -> bool:
        return self.realized_dim < self.free_dim

    def to_dict(self) -> dict:
        return {"g": self.g, "free_dim": self.free_dim, "realized_dim": self.realized_dim,
                "collapsed": self.collapsed}


def gl_orbit(v: Polynomial, k: int, m: int) -> list[Polynomial]:
    """Weight basis of the gl(k)-module generated by a highest weight vector ``v``.

    Lowering operators ``H{i}{j}`` (``i > j``) are applied until no new
    direction appears; each basis vector is homogeneous.
    """
    lowering = lowering_eulers(k, m)
    spans: dict[tuple[int, ...], tuple[dict, linalg.Echelon]] = {}
    basis: list[Polynomial] = []
    queue = [v]
    while queue:
        w = queue.pop(0)
        if not w:
            continue
        (d,) = w.multidegrees()
        index, ech = spans.setdefault(d, ({}, linalg.Echelon()))
        for e in sorted(w.terms, reverse=True):
            index.setdefault(e, len(index))
        if not ech.insert(w.to_vector(index)):
            continue
        basis.append(w)
        queue.extend(apply(op, w) for op in lowering)
    return basis


def realized_dim(module_basis: Sequence[Polynomial], k: int, m: int, g: int,
                 cap: int | None = DEFAULT_CAP) -> int:
    """Rank of ``{r2^n * f : |n| = g, f in module_basis}`` (homogeneous ``f``)."""
    ps = pairs(k)
    index: dict = {}
    rows = []
    for entries in compositions(g, len(ps)):
        n = ExponentMatrix(k, entries)
        rn = n.polynomial(m)
        for f in module_basis:
            if cap is not None:
                (d,) = f.multidegrees()
                d = tuple(x + y for x, y in zip(d, n.degree_shift()))
                dim = homogeneous_dimension(m, d)
                if dim > cap:
                    raise ResourceCapExceeded(dim, cap, f"space of multidegree {d}")
            p = rn * f
            rows.append({index.setdefault(e, len(index)): c for e, c in p.items()})
    return linalg.rank(rows)


def collapse_detect(a: Sequence[int], m: int, k: int, G: int = 2,
                    cap: int | None = DEFAULT_CAP) -> list[CollapseRecord]:
    """Compare the free graded dimensions of the Verma module with the realized ones.

    The realized module is ``sum_n r2^n F`` where ``F`` is the gl(k)-module
    generated by the first simplicial harmonic of label ``a``.  Returns one
    record per depth ``g <= G``; an empty list when there are no simplicial
    harmonics of label ``a``.
    """
    a = repcomb.pad(a, k)
    hs = simplicial_basis(k, m, a, cap).basis
    if not hs:
        return []
    module = gl_orbit(hs[0], k, m)
    expected = repcomb.gl_dim(a, k)
    if len(module) != expected:
        raise ArithmeticError(f"gl({k}) orbit has dimension {len(module)}, expected {expected}")
    return [CollapseRecord(g, verma_graded_dim(a, k, g), realized_dim(module, k, m, g, cap))
            for g in range(G + 1)]
