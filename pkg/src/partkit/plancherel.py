"""Plancherel measure: exact law, RSK sampling and first-row statistics."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, sqrt
from typing import Sequence

import numpy as np

from .partitions import Partition, dimension, iter_partitions

PMF_MAX_N = 30
RNG_NAME = "numpy.PCG64"
SEED_SPLIT = "numpy.SeedSequence(seed).spawn(num_samples)"


@dataclass(frozen=True)
class PlancherelSample:
    shape: Partition
    n: int
    seed: int
    sampler: str = "rsk"


def plancherel_pmf(n: int) -> dict[Partition, Fraction]:
    """Exact probabilities (dim lam)^2 / n! over partitions of n."""
    if n < 0 or n > PMF_MAX_N:
        raise ValueError(f"exact enumeration is limited to 0 <= n <= {PMF_MAX_N}")
    nf = factorial(n)
    return {lam: Fraction(dimension(lam) ** 2, nf) for lam in iter_partitions(n)}


def rsk_shape(perm: Sequence[int]) -> Partition:
    """Shape of the RSK insertion tableau of ``perm`` (distinct values)."""
    rows: list[list[int]] = []
    for x in perm:
        for row in rows:
            i = bisect.bisect_right(row, x)
            if i == len(row):
                row.append(x)
                break
            row[i], x = x, row[i]
        else:
            rows.append([x])
    return Partition(len(r) for r in rows)


def longest_increasing_subsequence(seq: Sequence[int]) -> int:
    """Quadratic dynamic program; deliberately independent of RSK."""
    best = [1] * len(seq)
    for i in range(len(seq)):
        for j in range(i):
            if seq[j] < seq[i] and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
    return max(best, default=0)


def random_permutation(n: int, seed) -> np.ndarray:
    return np.random.default_rng(seed).permutation(n)


def sample_shape(n: int, seed) -> Partition:
    """Plancherel-distributed shape: RSK of a seeded uniform permutation."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return rsk_shape(random_permutation(n, seed).tolist())


def sample(n: int, seed: int) -> PlancherelSample:
    return PlancherelSample(sample_shape(n, seed), n, seed)


def sample_shapes(n: int, num_samples: int, seed: int) -> list[Partition]:
    children = np.random.SeedSequence(seed).spawn(num_samples)
    return [sample_shape(n, child) for child in children]


def first_row_statistics(n: int, num_samples: int, seed: int) -> dict:
    """Monte Carlo summary of the first two rows of Plancherel shapes."""
    if n < 100 or num_samples < 10:
        raise ValueError("need n >= 100 and num_samples >= 10")
    shapes = sample_shapes(n, num_samples, seed)
    l1 = np.array([s[0] for s in shapes], dtype=float)
    l2 = np.array([s[1] if len(s) > 1 else 0 for s in shapes], dtype=float)
    centre, scale = 2 * sqrt(n), n ** (1 / 6)
    return {
        "n": n,
        "num_samples": num_samples,
        "seed": seed,
        "rng": RNG_NAME,
        "seed_split": SEED_SPLIT,
        "mean_lambda1": float(l1.mean()),
        "var_lambda1": float(l1.var(ddof=1)),
        "mean_lambda2": float(l2.mean()),
        "mean_lambda1_over_sqrt_n": float(l1.mean() / sqrt(n)),
        "mean_scaled_lambda1": float(((l1 - centre) / scale).mean()),
        "var_scaled_lambda1": float(((l1 - centre) / scale).var(ddof=1)),
        "mean_scaled_lambda2": float(((l2 - centre) / scale).mean()),
        "lambda1_ge_lambda2": bool(np.all(l1 >= l2)),
    }


def chi_square_statistic(n: int, num_samples: int, seed: int) -> tuple[float, int]:
    """Pearson statistic of sampled shapes against the exact pmf, with its dof."""
    pmf = plancherel_pmf(n)
    counts = {lam: 0 for lam in pmf}
    for s in sample_shapes(n, num_samples, seed):
        counts[s] += 1
    stat = 0.0
    for lam, p in pmf.items():
        expected = num_samples * float(p)
        stat += (counts[lam] - expected) ** 2 / expected
    return stat, len(pmf) - 1
