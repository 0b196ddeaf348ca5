"""Integer partitions: enumeration, conjugation, hook lengths, dimensions.

Exact scalars are :class:`fractions.Fraction` throughout the package.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator, Sequence


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    >>> Partition([3, 1]).size
    4
    >>> Partition()
    Partition(())
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for i, p in enumerate(parts):
            if p < 1:
                raise ValueError(f"parts must be positive, got {parts}")
            if i and parts[i - 1] < p:
                raise ValueError(f"parts must be weakly decreasing, got {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        """Build a partition from unsorted parts, dropping zeros."""
        return cls(sorted((p for p in parts if p), reverse=True))

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def boxes(self) -> Iterator[tuple[int, int]]:
        """Cells (row, column), zero-based, of the Young diagram."""
        for i, row in enumerate(self):
            for j in range(row):
                yield i, j

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return out

    def to_json(self) -> str:
        return json.dumps(list(self))

    @classmethod
    def from_json(cls, text: str) -> "Partition":
        return cls(json.loads(text))


def partitions_of(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [Partition(p) for p in _partitions(n, n)]


def iter_partitions(n: int) -> Iterator[Partition]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    for p in _partitions(n, n):
        yield Partition(p)


def _partitions(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) from Euler's pentagonal number recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def conjugate(lam: Sequence[int]) -> Partition:
    """Transpose of the Young diagram."""
    if not lam:
        return Partition()
    return Partition(sum(1 for p in lam if p >= i) for i in range(1, lam[0] + 1))


def hook_lengths(lam: Sequence[int]) -> list[list[int]]:
    conj = conjugate(lam)
    return [
        [row - j + conj[j] - i - 1 for j in range(row)] for i, row in enumerate(lam)
    ]


@lru_cache(maxsize=4096)
def _dimension(lam: tuple[int, ...]) -> int:
    n = sum(lam)
    hooks = prod(h for row in hook_lengths(lam) for h in row)
    return factorial(n) // hooks


def dimension(lam: Sequence[int]) -> int:
    """Dimension of the irreducible S_n representation, by the hook length formula."""
    return _dimension(tuple(lam))


def rational_to_json(x: Fraction | int) -> list[str]:
    """Serialize an exact rational as ``["num", "den"]``."""
    x = Fraction(x)
    return [str(x.numerator), str(x.denominator)]


def rational_from_json(pair: Sequence[str]) -> Fraction:
    num, den = pair
    return Fraction(int(num), int(den))
