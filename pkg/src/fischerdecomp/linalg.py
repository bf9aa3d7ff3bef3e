"""Exact sparse linear algebra over the rationals.

Vectors are dicts ``{column: value}`` with no zero entries.  Elimination is
fraction-free: every stored echelon row is a primitive integer vector with a
positive leading entry, rows are reduced by cross-multiplication and then
divided by their content.  Fractions only appear when the reduced row echelon
form is read off at the end.

Pivoting is deterministic: the pivot of a row is its smallest column index,
so with columns numbered in canonical monomial order the pivot is the first
nonzero entry in that order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

Vector = Mapping[int, "int | Fraction"]


def _primitive(row: Vector) -> dict[int, int]:
    if not row:
        return {}
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items() if v}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    lead = ints[min(ints)]
    if lead < 0:
        g = -g
    return {c: v // g for c, v in ints.items()}


def _eliminate(row: dict[int, int], piv: dict[int, int], col: int) -> dict[int, int]:
    a = piv[col]
    b = row[col]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {c: a * v for c, v in row.items()}
    for c, v in piv.items():
        nv = out.get(c, 0) - b * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return _primitive(out) if out else out


class Echelon:
    """Incrementally built row echelon form of a set of sparse rows."""

    def __init__(self, rows: Iterable[Vector] = ()):
        self._rows: dict[int, dict[int, int]] = {}
        for r in rows:
            self.insert(r)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def reduce(self, row: Vector) -> dict[int, int]:
        """Reduce ``row`` until its leading column is not a pivot.

        The result is zero exactly when ``row`` lies in the row span.
        """
        r = _primitive(row)
        while r:
            c = min(r)
            piv = self._rows.get(c)
            if piv is None:
                break
            r = _eliminate(r, piv, c)
        return r

    def contains(self, row: Vector) -> bool:
        return not self.reduce(row)

    def insert(self, row: Vector) -> bool:
        """Add ``row``; return True if it was independent of the rows so far."""
        r = self.reduce(row)
        if not r:
            return False
        self._rows[min(r)] = r
        return True

    def rref(self) -> list[tuple[int, dict[int, Fraction]]]:
        """Reduced row echelon form as ``(pivot column, row)`` pairs, pivots ascending.

        Each row has a 1 in its pivot column and zeros in every other pivot column.
        """
        cols = sorted(self._rows)
        reduced: dict[int, dict[int, int]] = {}
        # back substitution from the last pivot upward, still fraction-free
        for c in reversed(cols):
            r = dict(self._rows[c])
            for c2 in [x for x in r if x != c and x in reduced]:
                if c2 in r:
                    r = _eliminate(r, reduced[c2], c2)
            reduced[c] = r
        out = []
        for c in cols:
            r = reduced[c]
            lead = r[c]
            out.append((c, {j: Fraction(v, lead) for j, v in r.items()}))
        return out


def rank(rows: Iterable[Vector]) -> int:
    return Echelon(rows).rank


def nullspace(rows: Iterable[Vector], ncols: int) -> list[dict[int, Fraction]]:
    """Basis of ``{v : row . v = 0 for every row}`` in ``ncols`` unknowns.

    One vector per free column, in increasing column order; the vector has a
    1 at its free column, zeros at the other free columns, and is read off the
    reduced echelon form, so the basis is canonical.
    """
    form = Echelon(rows).rref()
    pivot_cols = {c for c, _ in form}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v: dict[int, Fraction] = {f: Fraction(1)}
        for c, r in form:
            x = r.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def solve(rows: list[Vector], rhs: list, ncols: int) -> dict[int, Fraction] | None:
    """One solution of ``rows . x = rhs`` (free unknowns set to 0), or None."""
    if len(rows) != len(rhs):
        raise ValueError("rows and rhs differ in length")
    aug = []
    for r, b in zip(rows, rhs):
        a = dict(r)
        if b:
            a[ncols] = b
        aug.append(a)
    form = Echelon(aug).rref()
    sol: dict[int, Fraction] = {}
    for c, r in form:
        if c == ncols:
            return None
        x = r.get(ncols)
        if x:
            sol[c] = x
    return sol


def transpose(columns: list[Vector]) -> list[dict[int, "int | Fraction"]]:
    """Turn a list of column vectors into a list of row vectors."""
    rows: dict[int, dict[int, int | Fraction]] = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
    return [rows[i] for i in sorted(rows)]
