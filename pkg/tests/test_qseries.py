import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partkit.qseries import (
    QSeries,
    QuasimodularBasis,
    UnderdeterminedFit,
    eisenstein,
    elliptic_gw_series,
    minimal_fit_weight,
    monomials,
    partition_series,
    q_bracket,
    quasimodular_fit,
)


def test_eisenstein_examples():
    assert eisenstein(2, 5)[1] == -24
    assert eisenstein(4, 5)[0] == 1
    assert eisenstein(6, 5)[2] == -16632
    with pytest.raises(ValueError):
        eisenstein(8, 5)


def test_known_relation_e4_squared_is_e8():
    # E8 = E4^2 has q^1 coefficient 480
    assert (eisenstein(4, 10) ** 2)[1] == 480


def test_series_arithmetic_truncates_to_common_order():
    a = QSeries([1, 1, 1, 1])
    b = QSeries([1, 2])
    assert (a * b).order == 1
    assert (a * a.inverse()) == QSeries.one(3)


def test_elliptic_series_examples():
    assert elliptic_gw_series((1,), 12) == QSeries([0] * 13)
    assert elliptic_gw_series((), 5) == QSeries([1, 1, 2, 3, 5, 7])
    assert elliptic_gw_series((1, 1), 8)[2] == 2


def test_q_bracket_of_empty_insertion_is_one():
    assert q_bracket(elliptic_gw_series((), 10)) == QSeries.one(10)
    assert elliptic_gw_series((), 10, normalized=True) == QSeries.one(10)


def test_basis_is_multiplicative():
    basis = QuasimodularBasis.build(8, 15)
    e2, e4 = eisenstein(2, 15), eisenstein(4, 15)
    idx = basis.monomials.index((2, 1, 0))
    assert basis.series[idx] == e2 * e2 * e4
    assert len(monomials(6)) == 7


def test_basis_element_round_trip():
    series = eisenstein(2, 30) * eisenstein(4, 30)
    fit = quasimodular_fit(series, 6)
    assert fit.success
    nonzero = {m: c for m, c in fit.coefficients.items() if c}
    assert nonzero == {(1, 1, 0): 1}


@pytest.mark.parametrize("ks,W", [((1, 1), 6), ((2, 2), 8), ((1, 1, 1, 1), 12)])
def test_bracketed_series_are_quasimodular(ks, W):
    series = elliptic_gw_series(ks, 40)
    fit = quasimodular_fit(q_bracket(series), W)
    assert fit.success
    assert fit.to_json()["coefficients"]


def test_raw_series_is_not_quasimodular():
    # the raw sum still carries the 1/prod(1-q^n) factor
    fit = quasimodular_fit(elliptic_gw_series((1, 1), 40), 6)
    assert not fit.success
    assert fit.first_mismatch is not None


def test_fit_is_independent_of_seed_rows():
    series = q_bracket(elliptic_gw_series((1, 1), 40))
    a = quasimodular_fit(series, 6)
    b = quasimodular_fit(series, 6, seed_rows=list(range(40, -1, -1)))
    assert a.success and b.success
    assert a.coefficients == b.coefficients
    assert a.seed_rows != b.seed_rows


def test_random_series_fails_with_index():
    rng = random.Random(7)
    series = QSeries([Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(41)])
    fit = quasimodular_fit(series, 6)
    assert not fit.success
    assert 0 <= fit.first_mismatch <= 40
    assert "first_mismatch" in fit.to_json()


def test_underdetermined_is_rejected():
    with pytest.raises(UnderdeterminedFit):
        quasimodular_fit(eisenstein(2, 10), 6)


def test_minimal_weight():
    best = minimal_fit_weight(eisenstein(4, 30), 8)
    assert best.max_weight == 4
    assert minimal_fit_weight(partition_series(30), 6) is None


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=7, max_size=7))
def test_random_combination_is_recovered(coeffs):
    basis = QuasimodularBasis.build(6, 25)
    series = QSeries.one(25) * 0
    for c, s in zip(coeffs, basis.series):
        series = series + s * c
    fit = quasimodular_fit(series, 6)
    assert fit.success
    assert [fit.coefficients[m] for m in basis.monomials] == coeffs
