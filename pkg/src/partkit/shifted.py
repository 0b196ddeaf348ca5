"""Regularized shifted power sums and negative zeta values."""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

_bernoulli: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(m: int) -> Fraction:
    """B_m with the B_1 = -1/2 convention."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m >= len(_bernoulli):
        with _bernoulli_lock:
            table = list(_bernoulli)
            for k in range(len(table), m + 1):
                table.append(-sum(comb(k + 1, j) * table[j] for j in range(k)) / (k + 1))
            # publish the fully built table in one assignment
            _bernoulli[:] = table
    return _bernoulli[m]


def zeta_negative(k: int) -> Fraction:
    """zeta(-k) = -B_{k+1}/(k+1) for k >= 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return -bernoulli(k + 1) / (k + 1)


def shifted_power_sum(lam: Sequence[int], k: int) -> Fraction:
    """p_k(lam) = sum_j [(lam_j - j + 1/2)^k - (-j + 1/2)^k] + (1 - 2^-k) zeta(-k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    # (lam_j - j + 1/2)^k = (2 lam_j - 2j + 1)^k / 2^k, kept in integers
    acc = 0
    for j, part in enumerate(lam, start=1):
        acc += (2 * part - 2 * j + 1) ** k - (1 - 2 * j) ** k
    return Fraction(acc, 2**k) + _regularization(k)


@lru_cache(maxsize=None)
def _regularization(k: int) -> Fraction:
    return (1 - Fraction(1, 2**k)) * zeta_negative(k)


def shifted_power_sum_numerator(lam: Sequence[int], k: int) -> tuple[int, int]:
    """(N, D) with p_k(lam) = N / D and D depending only on k.

    Lets partition sums accumulate in integers.
    """
    c = _regularization(k)
    acc = 0
    for j, part in enumerate(lam, start=1):
        acc += (2 * part - 2 * j + 1) ** k - (1 - 2 * j) ** k
    return acc * c.denominator + c.numerator * 2**k, 2**k * c.denominator
