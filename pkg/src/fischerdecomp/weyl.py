"""Normal-ordered differential operators with polynomial coefficients.

A :class:`WeylElement` is a finite sum ``c * x^a d^b`` with every
multiplication operator to the left of every derivative.  Products are brought
back into this form with the Leibniz rule, so two operators are equal exactly
when their term maps agree.

The invariant operators of the pair (O(m), sp(2k)) are available as
:func:`laplacian`, :func:`rsquared` and :func:`euler`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from math import comb, perm
from typing import Mapping, Sequence

from . import linalg
from .errors import AmbientMismatch, ParseError
from .ratpoly import Polynomial, _fraction, _render_monomial, format_rational

Term = tuple  # (x exponents, d exponents)


class WeylElement:
    """Immutable element of the Weyl algebra on the ``k*m`` variables ``x{i}_{j}``."""

    __slots__ = ("k", "m", "_terms")

    def __init__(self, k: int, m: int, terms: Mapping[Term, object] | None = None):
        self.k = k
        self.m = m
        n = k * m
        clean = {}
        for (a, b), c in (terms or {}).items():
            c = _fraction(c)
            if c:
                a, b = tuple(a), tuple(b)
                if len(a) != n or len(b) != n:
                    raise ValueError("exponent tuples have the wrong length")
                clean[(a, b)] = c
        self._terms = clean

    @classmethod
    def _raw(cls, k, m, terms):
        w = object.__new__(cls)
        w.k, w.m, w._terms = k, m, terms
        return w

    @classmethod
    def scalar(cls, k: int, m: int, c=1) -> "WeylElement":
        z = (0,) * (k * m)
        return cls(k, m, {(z, z): c})

    @property
    def ambient(self):
        return (self.k, self.m)

    def items(self):
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.ambient == other.ambient and self._terms == other._terms

    def __hash__(self):
        return hash((self.k, self.m, frozenset(self._terms.items())))

    def order(self) -> int:
        """Highest number of derivatives in any term (-1 for zero)."""
        return max((sum(b) for (_, b) in self._terms), default=-1)

    def _check(self, other):
        if self.ambient != other.ambient:
            raise AmbientMismatch(f"ambient {self.ambient} != {other.ambient}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for t, c in other._terms.items():
            s = out.get(t, 0) + c
            if s:
                out[t] = s
            else:
                del out[t]
        return WeylElement._raw(self.k, self.m, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "WeylElement":
        c = _fraction(c)
        if not c:
            return WeylElement._raw(self.k, self.m, {})
        return WeylElement._raw(self.k, self.m, {t: c * v for t, v in self._terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return compose(self, other)

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply(self, p)

    def __repr__(self):
        return f"WeylElement(k={self.k}, m={self.m}, {render(self)!r})"

    def __str__(self):
        return render(self)


def render(w: WeylElement) -> str:
    """Text form; ``d{i}_{j}`` stands for the derivative in ``x{i}_{j}``."""
    if not w:
        return "0"
    pieces = []
    for n, ((a, b), c) in enumerate(sorted(w.items(), key=_term_key, reverse=True)):
        xs = _render_monomial(a, w.m)
        ds = _render_monomial(b, w.m).replace("x", "d")
        mono = "*".join(s for s in (xs, ds) if s)
        neg = c < 0
        c = -c if neg else c
        body = format_rational(c) if not mono else (mono if c == 1 else f"{format_rational(c)}*{mono}")
        if n == 0:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" {'-' if neg else '+'} {body}")
    return "".join(pieces)


def _term_key(item):
    (a, b), _ = item
    return (sum(b), sum(a), b, a)


def _check_index(k, i, j):
    if not (1 <= i <= k and 1 <= j <= k):
        raise IndexError(f"operator indices ({i}, {j}) out of range 1..{k}")


def _unit(n, *slots):
    e = [0] * n
    for s in slots:
        e[s] += 1
    return tuple(e)


def laplacian(k: int, m: int, i: int, j: int) -> WeylElement:
    """Mixed Laplacian: sum over s of d/dx{i}_s d/dx{j}_s."""
    _check_index(k, i, j)
    n = k * m
    z = (0,) * n
    terms = {(z, _unit(n, (i - 1) * m + s, (j - 1) * m + s)): Fraction(1) for s in range(m)}
    return WeylElement._raw(k, m, terms)


def rsquared(k: int, m: int, i: int, j: int) -> WeylElement:
    """Multiplication by the inner product sum over s of x{i}_s x{j}_s."""
    _check_index(k, i, j)
    n = k * m
    z = (0,) * n
    terms = {(_unit(n, (i - 1) * m + s, (j - 1) * m + s), z): Fraction(1) for s in range(m)}
    return WeylElement._raw(k, m, terms)


def euler(k: int, m: int, i: int, j: int) -> WeylElement:
    """Mixed Euler operator sum over s of x{i}_s d/dx{j}_s, plus m/2 when i == j."""
    _check_index(k, i, j)
    n = k * m
    terms = {(_unit(n, (i - 1) * m + s), _unit(n, (j - 1) * m + s)): Fraction(1) for s in range(m)}
    if i == j:
        z = (0,) * n
        terms[(z, z)] = Fraction(m, 2)
    return WeylElement._raw(k, m, terms)


def rsquared_polynomial(k: int, m: int, i: int, j: int) -> Polynomial:
    n = k * m
    return Polynomial._raw(
        k, m, {_unit(n, (i - 1) * m + s, (j - 1) * m + s): Fraction(1) for s in range(m)}
    )


def apply(w: WeylElement, p: Polynomial) -> Polynomial:
    if w.ambient != p.ambient:
        raise AmbientMismatch(f"operator ambient {w.ambient} != polynomial ambient {p.ambient}")
    out: dict = {}
    for (a, b), c in w.items():
        for e, v in p.items():
            coeff = c * v
            for bi, ei in zip(b, e):
                if bi > ei:
                    coeff = 0
                    break
                if bi:
                    coeff *= perm(ei, bi)
            if not coeff:
                continue
            key = tuple(ai + ei - bi for ai, bi, ei in zip(a, b, e))
            s = out.get(key, 0) + coeff
            if s:
                out[key] = s
            else:
                del out[key]
    return Polynomial._raw(p.k, p.m, out)


def compose(w1: WeylElement, w2: WeylElement) -> WeylElement:
    """Normal-ordered product ``w1 * w2`` (apply w2 first)."""
    w1._check(w2)
    out: dict = {}
    for (a, b), c1 in w1.items():
        for (c, d), c2 in w2.items():
            # d^b x^c = sum_t prod_v C(b_v, t_v) c_v!/(c_v - t_v)! x^(c-t) d^(b-t)
            overlap = [v for v in range(len(b)) if b[v] and c[v]]
            ranges = [range(min(b[v], c[v]) + 1) for v in overlap]
            for ts in product(*ranges):
                coeff = c1 * c2
                xe = list(c)
                de = list(b)
                for v, t in zip(overlap, ts):
                    if t:
                        coeff *= comb(b[v], t) * perm(c[v], t)
                        xe[v] -= t
                        de[v] -= t
                key = (tuple(p + q for p, q in zip(a, xe)), tuple(p + q for p, q in zip(de, d)))
                s = out.get(key, 0) + coeff
                if s:
                    out[key] = s
                else:
                    del out[key]
    return WeylElement._raw(w1.k, w1.m, out)


def commutator(w1: WeylElement, w2: WeylElement) -> WeylElement:
    return compose(w1, w2) - compose(w2, w1)


def span_membership(w: WeylElement, basis: Sequence[WeylElement]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``w == sum(c[i] * basis[i])``, or None if ``w`` is not in the span.

    When the basis is linearly dependent the free coefficients are set to 0.
    """
    for b in basis:
        w._check(b)
    if not w:
        return [Fraction(0)] * len(basis)
    index: dict = {}
    columns = []
    for b in basis:
        columns.append({index.setdefault(t, len(index)): c for t, c in b.items()})
    target = {}
    for t, c in w.items():
        if t not in index:
            return None
        target[index[t]] = c
    # every coordinate index comes from some basis term, so no row is empty
    rows = linalg.transpose(columns)
    rhs = [target.get(i, 0) for i in range(len(index))]
    sol = linalg.solve(rows, rhs, len(basis))
    if sol is None:
        return None
    return [sol.get(i, Fraction(0)) for i in range(len(basis))]


def span_dimension(elements: Sequence[WeylElement]) -> int:
    index: dict = {}
    rows = []
    for w in elements:
        rows.append({index.setdefault(t, len(index)): c for t, c in w.items()})
    return linalg.rank(rows)


def sp_spanning_set(k: int, m: int) -> dict[str, WeylElement]:
    """The operators D{i}{j}, R{i}{j} (i <= j) and H{i}{j} (all i, j) keyed by literal name."""
    ops = {}
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            ops[f"D{i}{j}"] = laplacian(k, m, i, j)
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            ops[f"R{i}{j}"] = rsquared(k, m, i, j)
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            ops[f"H{i}{j}"] = euler(k, m, i, j)
    return ops


def gl_spanning_set(k: int, m: int) -> dict[str, WeylElement]:
    return {f"H{i}{j}": euler(k, m, i, j) for i in range(1, k + 1) for j in range(1, k + 1)}


# -- operator expressions ------------------------------------------------------

_OP_TOKEN = re.compile(r"\s*(?:(?P<name>[DRH]\d\d)|(?P<num>\d+(?:/\d+)?)|(?P<op>[-+*\[\],()])|(?P<bad>\S))")


def parse_operator(text: str, k: int, m: int) -> WeylElement:
    """Parse an operator expression such as ``[D12, R12] - 2*H11``.

    Atoms are ``D{i}{j}``, ``R{i}{j}``, ``H{i}{j}`` (single-digit indices) and
    brackets ``[A, B]``; terms may carry a rational factor and be joined with
    ``+``/``-``.
    """
    toks = []
    pos = 0
    while pos < len(text):
        mt = _OP_TOKEN.match(text, pos)
        if mt is None:
            break
        if mt.group("bad") is not None:
            raise ParseError(f"unexpected character {mt.group('bad')!r}", text, mt.start("bad"))
        kind = "name" if mt.group("name") else "num" if mt.group("num") else mt.group("op")
        toks.append((kind, mt.group(mt.lastgroup), mt.start(mt.lastgroup)))
        pos = mt.end()
    toks.append(("end", "", len(text)))
    state = {"i": 0}

    def peek():
        return toks[state["i"]]

    def take(kind=None):
        tok = toks[state["i"]]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}", text, tok[2])
        state["i"] += 1
        return tok

    def expr():
        sign = 1
        if peek()[0] in ("+", "-"):
            sign = -1 if take()[0] == "-" else 1
        total = term().scale(sign)
        while peek()[0] in ("+", "-"):
            sign = -1 if take()[0] == "-" else 1
            total = total + term().scale(sign)
        return total

    def term():
        result = atom()
        while peek()[0] == "*":
            take()
            result = compose(result, atom())
        return result

    def atom():
        kind, val, p = peek()
        if kind == "num":
            take()
            return WeylElement.scalar(k, m, Fraction(val))
        if kind == "name":
            take()
            i, j = int(val[1]), int(val[2])
            if not (1 <= i <= k and 1 <= j <= k):
                raise ParseError(f"operator {val} out of range for k={k}", text, p)
            return {"D": laplacian, "R": rsquared, "H": euler}[val[0]](k, m, i, j)
        if kind == "[":
            take()
            a = expr()
            take(",")
            b = expr()
            take("]")
            return commutator(a, b)
        if kind == "(":
            take()
            a = expr()
            take(")")
            return a
        raise ParseError("expected an operator, number, '[' or '('", text, p)

    if peek()[0] == "end":
        raise ParseError("empty expression", text, 0)
    result = expr()
    if peek()[0] != "end":
        raise ParseError("unexpected trailing input", text, peek()[2])
    return result
