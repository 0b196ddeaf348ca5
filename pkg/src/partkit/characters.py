"""Symmetric group characters and central characters.

Characters come from the Murnaghan-Nakayama rule on beta-sets: removing a
border strip of length r is moving one bead of the abacus down by r, with
sign (-1)^(beads jumped over).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Sequence

from .partitions import Partition, dimension


def pad_cycle_type(mu: Sequence[int], n: int) -> Partition:
    """Cycle type ``mu`` of S_n with the implicit fixed points made explicit."""
    body = [p for p in mu if p > 1]
    rest = n - sum(body)
    if rest < 0 or any(p < 1 for p in mu):
        raise ValueError(f"cycle type {tuple(mu)} does not fit in S_{n}")
    return Partition.from_parts(body + [1] * rest)


def strip_fixed_points(mu: Sequence[int]) -> Partition:
    return Partition.from_parts(p for p in mu if p > 1)


def _beta_set(lam: tuple[int, ...]) -> tuple[int, ...]:
    L = len(lam)
    return tuple(lam[i] + L - 1 - i for i in range(L))


def _from_beta(beta: Sequence[int]) -> tuple[int, ...]:
    beta = sorted(beta, reverse=True)
    L = len(beta)
    return tuple(b - (L - 1 - i) for i, b in enumerate(beta) if b - (L - 1 - i) > 0)


@lru_cache(maxsize=None)
def _mn(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    beta = _beta_set(lam)
    occupied = set(beta)
    total = 0
    for b in beta:
        t = b - r
        if t < 0 or t in occupied:
            continue
        height = sum(1 for c in beta if t < c < b)
        moved = [c for c in beta if c != b] + [t]
        term = _mn(_from_beta(moved), rest)
        total += -term if height % 2 else term
    return total


def character(lam: Sequence[int], mu: Sequence[int]) -> Fraction:
    """chi^lam evaluated on the class with cycle type ``mu``.

    ``mu`` may omit its 1-cycles; it is padded up to ``|lam|``.  A cycle
    type longer than ``|lam|`` is rejected with ``ValueError``.
    """
    lam = Partition(lam)
    mu = pad_cycle_type(mu, lam.size)
    return Fraction(_mn(tuple(lam), tuple(mu)))


def class_size(mu: Sequence[int], n: int) -> int:
    """Number of permutations of S_n with cycle type ``mu`` (padded)."""
    full = pad_cycle_type(mu, n)
    mult = full.multiplicities()
    return factorial(n) // (
        prod(factorial(m) for m in mult.values()) * prod(k**m for k, m in mult.items())
    )


def central_character(lam: Sequence[int], eta: Sequence[int]) -> Fraction:
    """Eigenvalue f_eta(lam) of the class sum of ``eta`` on the irrep ``lam``.

    Conventions: f_(1) = |lam|, and f_eta = 0 when ``eta`` needs more than
    |lam| points.
    """
    lam = Partition(lam)
    n = lam.size
    if tuple(eta) == (1,):
        return Fraction(n)
    if sum(p for p in eta if p > 1) > n:
        return Fraction(0)
    return class_size(eta, n) * character(lam, eta) / dimension(lam)


def cycle_sign(mu: Sequence[int], n: int | None = None) -> int:
    full = pad_cycle_type(mu, sum(mu) if n is None else n)
    return -1 if (full.size - len(full)) % 2 else 1


def content_sum(lam: Sequence[int]) -> int:
    return sum(j - i for i, j in Partition(lam).boxes())
