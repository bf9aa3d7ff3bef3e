"""Partitions, Young diagrams and gl(k) weight combinatorics.

Partitions are plain tuples.  :func:`as_partition` validates and strips
trailing zeros so that ``(2, 1)`` and ``(2, 1, 0)`` compare equal; the length
a partition is padded to is always passed separately.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence


def as_partition(parts: Sequence[int]) -> tuple[int, ...]:
    a = tuple(int(x) for x in parts)
    if any(x < 0 for x in a):
        raise ValueError(f"partition {a} has a negative part")
    if any(a[i] < a[i + 1] for i in range(len(a) - 1)):
        raise ValueError(f"partition {a} is not weakly decreasing")
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def pad(a: Sequence[int], k: int) -> tuple[int, ...]:
    a = as_partition(a)
    if len(a) > k:
        raise ValueError(f"partition {a} has more than {k} nonzero parts")
    return a + (0,) * (k - len(a))


def parse_partition(text: str) -> tuple[int, ...]:
    """Read a comma separated list such as ``"2,1"`` (empty string is the empty partition)."""
    text = text.strip()
    if not text:
        return ()
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise ValueError(f"malformed partition {text!r}") from None
    return as_partition(parts)


def transpose(a: Sequence[int]) -> tuple[int, ...]:
    a = as_partition(a)
    if not a:
        return ()
    return tuple(sum(1 for x in a if x >= j) for j in range(1, a[0] + 1))


def is_admissible(a: Sequence[int], m: int) -> bool:
    """True iff the first two columns of the diagram of ``a`` hold at most ``m`` boxes."""
    t = transpose(a) + (0, 0)
    return t[0] + t[1] <= m


def shift(a: Sequence[int], m: int, k: int) -> tuple[Fraction, ...]:
    """The weight ``(a_1 + m/2, ..., a_k + m/2)``."""
    half = Fraction(m, 2)
    return tuple(x + half for x in pad(a, k))


def gl_dim(a: Sequence[int], k: int) -> int:
    """Dimension of the irreducible gl(k)-module with highest weight ``a``."""
    a = pad(a, k)
    num = 1
    den = 1
    for i in range(k):
        for j in range(i + 1, k):
            num *= a[i] - a[j] + j - i
            den *= j - i
    return num // den


def partitions(n: int, max_length: int | None = None, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` in reverse lexicographic order, optionally bounded."""
    if max_part is None:
        max_part = n
    if max_length is None:
        max_length = n
    if n == 0:
        yield ()
        return
    if max_length == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, max_length - 1, first):
            yield (first,) + rest


def partitions_in_box(length: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """All partitions with at most ``length`` parts each at most ``max_part``, padded to ``length``."""
    def rec(remaining, bound):
        if remaining == 0:
            yield ()
            return
        for x in range(bound, -1, -1):
            for rest in rec(remaining - 1, x):
                yield (x,) + rest
    yield from rec(length, max_part)


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """Dominance order ``a >= b`` for partitions of the same size."""
    a, b = as_partition(a), as_partition(b)
    if sum(a) != sum(b):
        return False
    sa = sb = 0
    for i in range(max(len(a), len(b))):
        sa += a[i] if i < len(a) else 0
        sb += b[i] if i < len(b) else 0
        if sa < sb:
            return False
    return True


def _horizontal_strips(shape: tuple[int, ...], size: int) -> Iterator[tuple[int, ...]]:
    # inner shapes mu with shape/mu a horizontal strip of `size` boxes:
    # shape[i+1] <= mu[i] <= shape[i]
    n = len(shape)

    def rec(i, left):
        if i == n:
            if left == 0:
                yield ()
            return
        lower = shape[i + 1] if i + 1 < n else 0
        for mu_i in range(shape[i], lower - 1, -1):
            removed = shape[i] - mu_i
            if removed > left:
                break
            for rest in rec(i + 1, left - removed):
                yield (mu_i,) + rest

    yield from rec(0, size)


@lru_cache(maxsize=None)
def _kostka(shape: tuple[int, ...], content: tuple[int, ...]) -> int:
    if not content:
        return 1 if sum(shape) == 0 else 0
    last = content[-1]
    total = 0
    for mu in _horizontal_strips(shape, last):
        total += _kostka(as_partition(mu), content[:-1])
    return total


def kostka(a: Sequence[int], d: Sequence[int]) -> int:
    """Number of semistandard tableaux of shape ``a`` and content ``d``.

    The largest letter occupies a horizontal strip; peeling strips off one
    letter at a time gives the recursion, memoised on (shape, content).
    """
    a = as_partition(a)
    d = tuple(int(x) for x in d)
    if any(x < 0 for x in d):
        raise ValueError(f"content {d} has a negative entry")
    if sum(a) != sum(d):
        return 0
    if len(a) > len(d):
        return 0
    return _kostka(a, d)
