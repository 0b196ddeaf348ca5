from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partkit.plancherel import (
    PMF_MAX_N,
    chi_square_statistic,
    first_row_statistics,
    longest_increasing_subsequence,
    plancherel_pmf,
    random_permutation,
    rsk_shape,
    sample_shape,
    sample_shapes,
)


def test_pmf_examples():
    assert plancherel_pmf(2) == {(2,): Fraction(1, 2), (1, 1): Fraction(1, 2)}
    assert plancherel_pmf(3) == {(3,): Fraction(1, 6), (2, 1): Fraction(2, 3), (1, 1, 1): Fraction(1, 6)}


@pytest.mark.parametrize("n", [1, 5, 12, 20])
def test_pmf_sums_to_one(n):
    assert sum(plancherel_pmf(n).values()) == 1


def test_pmf_guard():
    with pytest.raises(ValueError):
        plancherel_pmf(PMF_MAX_N + 1)


def test_sample_examples():
    assert sample_shape(1, 0) == (1,)
    freq = sum(sample_shape(2, s) == (2,) for s in range(10_000)) / 10_000
    assert abs(freq - 0.5) <= 0.02


def test_sampling_is_reproducible():
    assert sample_shapes(50, 20, 3) == sample_shapes(50, 20, 3)
    assert sample_shapes(50, 20, 3) != sample_shapes(50, 20, 4)


@settings(max_examples=200)
@given(st.permutations(list(range(10))))
def test_rsk_first_row_is_lis(perm):
    shape = rsk_shape(perm)
    assert sum(shape) == len(perm)
    assert shape[0] == longest_increasing_subsequence(perm)


def test_rsk_conjugate_row_is_longest_decreasing():
    perm = random_permutation(12, 1).tolist()
    assert len(rsk_shape(perm)) == longest_increasing_subsequence([-x for x in perm])


def test_first_row_mean():
    stats = first_row_statistics(2500, 200, 42)
    assert 1.85 <= stats["mean_lambda1_over_sqrt_n"] <= 2.0
    assert stats["lambda1_ge_lambda2"]
    assert stats["rng"]


def test_chi_square_against_pmf():
    from scipy.stats import chi2

    stat, dof = chi_square_statistic(5, 100_000, 11)
    assert dof == len(plancherel_pmf(5)) - 1
    assert stat < chi2.ppf(0.999, dof)


def test_empirical_distribution_small_n():
    shapes = Counter(sample_shapes(4, 20_000, 5))
    for lam, p in plancherel_pmf(4).items():
        assert abs(shapes[lam] / 20_000 - float(p)) < 0.02
