"""Sparse polynomials with rational coefficients in k vector variables of R^m.

The variables are ``x{i}_{j}`` with vector index ``1 <= i <= k`` and coordinate
index ``1 <= j <= m``.  A monomial is stored as a dense exponent tuple of length
``k*m``; slot ``(i-1)*m + (j-1)`` holds the exponent of ``x{i}_{j}``.

Terms are ordered graded-lexicographically with ``x1_1 > x1_2 > ... > x1_m >
x2_1 > ...``; rendering lists the largest term first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, prod
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import AmbientMismatch, ParseError, ResourceCapExceeded

Exponents = tuple  # tuple[int, ...] of length k*m

DEFAULT_CAP = 20_000


@dataclass(frozen=True, order=True)
class VarIndex:
    vector: int
    coordinate: int

    def check(self, k: int, m: int) -> None:
        if not 1 <= self.vector <= k:
            raise IndexError(f"vector index {self.vector} out of range 1..{k}")
        if not 1 <= self.coordinate <= m:
            raise IndexError(f"coordinate index {self.coordinate} out of range 1..{m}")

    def slot(self, m: int) -> int:
        return (self.vector - 1) * m + (self.coordinate - 1)

    def __str__(self):
        return f"x{self.vector}_{self.coordinate}"


def _as_var(v) -> VarIndex:
    if isinstance(v, VarIndex):
        return v
    i, j = v
    return VarIndex(i, j)


def monomial_key(e: Exponents) -> tuple:
    """Sort key for the canonical (graded lex) order; larger key = larger term."""
    return (sum(e), e)


def multidegree_of(e: Exponents, k: int, m: int) -> tuple[int, ...]:
    return tuple(sum(e[i * m:(i + 1) * m]) for i in range(k))


def _fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not supported")
    return Fraction(c)


class Polynomial:
    """An immutable polynomial over Q in the k*m variables ``x{i}_{j}``."""

    __slots__ = ("k", "m", "_terms", "_hash")

    def __init__(self, k: int, m: int, terms: Mapping[Exponents, object] | None = None):
        if k < 1 or m < 1:
            raise ValueError("k and m must be positive")
        self.k = k
        self.m = m
        clean: dict[Exponents, Fraction] = {}
        if terms:
            n = k * m
            for e, c in terms.items():
                c = _fraction(c)
                if not c:
                    continue
                e = tuple(e)
                if len(e) != n or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent tuple {e} for k={k}, m={m}")
                clean[e] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, k, m, terms):
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.k = k
        p.m = m
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, k: int, m: int) -> "Polynomial":
        return cls(k, m)

    @classmethod
    def constant(cls, k: int, m: int, c=1) -> "Polynomial":
        return cls(k, m, {(0,) * (k * m): c})

    @classmethod
    def variable(cls, k: int, m: int, v) -> "Polynomial":
        v = _as_var(v)
        v.check(k, m)
        e = [0] * (k * m)
        e[v.slot(m)] = 1
        return cls._raw(k, m, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, k: int, m: int, e: Exponents, c=1) -> "Polynomial":
        return cls(k, m, {tuple(e): c})

    # -- basic protocol ---------------------------------------------------

    @property
    def ambient(self) -> tuple[int, int]:
        return (self.k, self.m)

    @property
    def terms(self) -> Mapping[Exponents, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, e: Exponents) -> Fraction:
        return self._terms.get(tuple(e), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ambient == other.ambient and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {(0,) * (self.k * self.m): other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.k, self.m, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial(k={self.k}, m={self.m}, {render(self)!r})"

    def __str__(self):
        return render(self)

    # -- ring operations --------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatch(f"ambient {self.ambient} != {other.ambient}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.k, self.m, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.k, self.m, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.k, self.m, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = _fraction(c)
        if not c:
            return Polynomial.zero(self.k, self.m)
        return Polynomial._raw(self.k, self.m, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.k, self.m, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.k, self.m)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus and grading ---------------------------------------------

    def derivative(self, v) -> "Polynomial":
        v = _as_var(v)
        v.check(self.k, self.m)
        s = v.slot(self.m)
        out = {}
        for e, c in self._terms.items():
            p = e[s]
            if p:
                e2 = e[:s] + (p - 1,) + e[s + 1:]
                out[e2] = c * p
        return Polynomial._raw(self.k, self.m, out)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def multidegrees(self) -> set[tuple[int, ...]]:
        return {multidegree_of(e, self.k, self.m) for e in self._terms}

    def is_homogeneous(self, d: tuple[int, ...] | None = None) -> bool:
        degs = self.multidegrees()
        if d is not None:
            return degs <= {tuple(d)}
        return len(degs) <= 1

    def multidegree_split(self) -> dict[tuple[int, ...], "Polynomial"]:
        parts: dict[tuple[int, ...], dict] = {}
        for e, c in self._terms.items():
            parts.setdefault(multidegree_of(e, self.k, self.m), {})[e] = c
        return {d: Polynomial._raw(self.k, self.m, t) for d, t in sorted(parts.items())}

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    def to_vector(self, index: Mapping[Exponents, int]) -> dict[int, Fraction]:
        """Coordinates with respect to a monomial index (KeyError if a term is missing)."""
        return {index[e]: c for e, c in self._terms.items()}


# -- functional interface ------------------------------------------------------


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p * q


def scale(c, p: Polynomial) -> Polynomial:
    return p.scale(c)


def derivative(p: Polynomial, v) -> Polynomial:
    return p.derivative(v)


def multidegree_split(p: Polynomial) -> dict[tuple[int, ...], Polynomial]:
    return p.multidegree_split()


# -- monomial spaces -----------------------------------------------------------


def homogeneous_dimension(m: int, d: Iterable[int]) -> int:
    """Dimension of the space of polynomials of multidegree ``d``."""
    return prod(comb(di + m - 1, m - 1) for di in d)


def _block_exponents(m: int, deg: int) -> list[tuple[int, ...]]:
    # all exponent vectors of length m summing to deg, lex descending
    out = []
    for combo in combinations_with_replacement(range(m), deg):
        e = [0] * m
        for s in combo:
            e[s] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def monomials_of_multidegree(k: int, m: int, d: tuple[int, ...],
                             cap: int | None = DEFAULT_CAP) -> list[Exponents]:
    """Exponent tuples of multidegree ``d`` in canonical (descending) order."""
    d = tuple(d)
    if len(d) != k:
        raise ValueError(f"multidegree {d} has length {len(d)}, expected {k}")
    if any(x < 0 for x in d):
        return []
    dim = homogeneous_dimension(m, d)
    if cap is not None and dim > cap:
        raise ResourceCapExceeded(dim, cap, f"space of multidegree {d}")
    out: list[Exponents] = [()]
    for di in d:
        blocks = _block_exponents(m, di)
        out = [e + b for e in out for b in blocks]
    return out


def monomial_index(monos: list[Exponents]) -> dict[Exponents, int]:
    return {e: i for i, e in enumerate(monos)}


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative integers summing to ``total``, lex descending."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def multidegrees_up_to(k: int, D: int) -> list[tuple[int, ...]]:
    """All multidegrees of length ``k`` with total degree at most ``D``, sorted."""
    return sorted(d for t in range(D + 1) for d in compositions(t, k))


# -- text format ---------------------------------------------------------------


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _render_monomial(e: Exponents, m: int) -> str:
    factors = []
    for s, p in enumerate(e):
        if p:
            name = f"x{s // m + 1}_{s % m + 1}"
            factors.append(name if p == 1 else f"{name}^{p}")
    return "*".join(factors)


def render(p: Polynomial) -> str:
    if not p:
        return "0"
    pieces = []
    for n, (e, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        mono = _render_monomial(e, p.m)
        if not mono:
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if n == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>x(?P<vi>\d+)_(?P<vj>\d+))|(?P<op>[-+*/^()])|(?P<bad>\S))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:  # trailing whitespace
            break
        if mt.group("bad") is not None:
            raise ParseError(f"unexpected character {mt.group('bad')!r}", text, mt.start("bad"))
        if mt.group("num") is not None:
            out.append(("num", int(mt.group("num")), mt.start("num")))
        elif mt.group("var") is not None:
            out.append(("var", (int(mt.group("vi")), int(mt.group("vj"))), mt.start("var")))
        else:
            out.append((mt.group("op"), None, mt.start("op")))
        pos = mt.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text, k, m):
        self.text = text
        self.k = k
        self.m = m
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(self.text[tok[2]:tok[2] + 8])
            raise ParseError(f"expected {kind}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def error(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        total = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            total = total + self.term().scale(sign)
        return total

    def term(self) -> Polynomial:
        result = self.factor()
        while self.peek()[0] == "*":
            self.take()
            result = result * self.factor()
        if self.peek()[0] in ("num", "var", "("):
            self.error("missing '*' between factors")
        return result

    def factor(self) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            c = Fraction(val)
            if self.peek()[0] == "/":
                self.take()
                den = self.take("num")
                if den[1] == 0:
                    raise ParseError("zero denominator", self.text, den[2])
                c = Fraction(val, den[1])
            base = Polynomial.constant(self.k, self.m, c)
        elif kind == "var":
            self.take()
            i, j = val
            if not 1 <= i <= self.k:
                raise ParseError(f"vector index {i} out of range 1..{self.k}", self.text, pos)
            if not 1 <= j <= self.m:
                raise ParseError(f"coordinate index {j} out of range 1..{self.m}", self.text, pos)
            base = Polynomial.variable(self.k, self.m, (i, j))
        elif kind == "(":
            self.take()
            base = self.expr()
            self.take(")")
        else:
            self.error("expected a number, variable or '('")
        if self.peek()[0] == "^":
            self.take()
            e = self.take("num")
            if e[1] < 1:
                raise ParseError("exponent must be at least 1", self.text, e[2])
            base = base ** e[1]
        return base


def parse(text: str, k: int, m: int) -> Polynomial:
    """Parse text such as ``"x1_1^2 - 1/2*x1_2"`` into a Polynomial.

    Terms are joined by ``+``/``-``; a term is a ``*``-separated product of
    rationals (``p/q`` or integers) and variable powers ``x{i}_{j}^e``.
    Parentheses are accepted as a convenience.
    """
    p = _Parser(text, k, m)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", text, 0)
    result = p.expr()
    if p.peek()[0] != "end":
        p.error("unexpected trailing input")
    return result
