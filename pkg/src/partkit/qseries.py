"""Truncated q-series with exact coefficients, Eisenstein series and
quasimodular fitting in Q[E2, E4, E6].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

import numpy as np

from .partitions import rational_to_json
from .shifted import _regularization, shifted_power_sum_numerator


class QSeries:
    """Power series sum_{n<=N} c_n q^n known up to (and including) q^N."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, QSeries) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"QSeries({[str(c) for c in self.coeffs]})"

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls([1] + [0] * order)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs[: order + 1])

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        return QSeries([other] + [0] * self.order)

    def __add__(self, other) -> "QSeries":
        other = self._coerce(other)
        n = min(self.order, other.order)
        return QSeries(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1]))

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries(-c for c in self.coeffs)

    def __sub__(self, other) -> "QSeries":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            c = Fraction(other)
            return QSeries(c * a for a in self.coeffs)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        return QSeries(sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        out = QSeries.one(self.order)
        for _ in range(e):
            out = out * self
        return out

    def inverse(self) -> "QSeries":
        a = self.coeffs
        if a[0] == 0:
            raise ValueError("series with zero constant term is not invertible")
        inv = [1 / a[0]]
        for n in range(1, len(a)):
            inv.append(-sum(a[k] * inv[n - k] for k in range(1, n + 1)) / a[0])
        return QSeries(inv)

    def log(self) -> "QSeries":
        """Formal logarithm; requires constant term exactly 1."""
        z = self.coeffs
        if z[0] != 1:
            raise ValueError("log needs constant term 1")
        f = [Fraction(0)] * len(z)
        for n in range(1, len(z)):
            s = sum(k * f[k] * z[n - k] for k in range(1, n))
            f[n] = z[n] - Fraction(s) / n
        return QSeries(f)

    def exp(self) -> "QSeries":
        """Formal exponential; requires constant term exactly 0."""
        f = self.coeffs
        if f[0] != 0:
            raise ValueError("exp needs constant term 0")
        z = [Fraction(1)] + [Fraction(0)] * (len(f) - 1)
        for n in range(1, len(f)):
            z[n] = Fraction(sum(k * f[k] * z[n - k] for k in range(1, n + 1))) / n
        return QSeries(z)


def divisor_sigma(n: int, k: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


_EISENSTEIN = {2: -24, 4: 240, 6: -504}


def eisenstein(k: int, order: int) -> QSeries:
    """E_k = 1 + c_k sum sigma_{k-1}(n) q^n, normalized to constant term 1."""
    if k not in _EISENSTEIN:
        raise ValueError("only E2, E4, E6 are supported")
    if order < 0:
        raise ValueError("order must be nonnegative")
    c = _EISENSTEIN[k]
    return QSeries([1] + [c * divisor_sigma(n, k - 1) for n in range(1, order + 1)])


def partition_series(order: int) -> QSeries:
    """sum_d p(d) q^d = prod_m 1/(1 - q^m), the unramified torus covers."""
    out = QSeries.one(order)
    for m in range(1, order + 1):
        out = out * QSeries([1 if i % m == 0 else 0 for i in range(order + 1)])
    return out


def _partition_matrix(d: int) -> np.ndarray:
    """All partitions of d as rows, zero padded to width d (ascending-composition walk)."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    rows = []
    a = [0] * (d + 1)
    k, y = 1, d - 1
    while k:
        x = a[k - 1] + 1
        k -= 1
        while 2 * x <= y:
            a[k] = x
            y -= x
            k += 1
        top = k + 1
        while x <= y:
            a[k], a[top] = x, y
            rows.append(a[top::-1] + [0] * (d - top - 1))
            x += 1
            y -= 1
        a[k] = x + y
        y = x + y - 1
        rows.append(a[k::-1] + [0] * (d - k - 1))
    return np.array(rows, dtype=np.int64)


def _numerators(parts: np.ndarray, k: int) -> np.ndarray:
    """Integer numerators of p_k over the rows of ``parts`` (see shifted_power_sum_numerator)."""
    c = _regularization(k)
    d = parts.shape[1]
    j = np.arange(1, d + 1)
    # int64 holds d * (2d+1)^k comfortably for small k; otherwise use Python ints
    dtype = np.int64 if d * float(2 * d + 1) ** k < 2**62 else object
    a = (2 * parts - 2 * j + 1).astype(dtype)
    b = (1 - 2 * j).astype(dtype)
    acc = (a**k - b**k).sum(axis=1).astype(object)
    return acc * c.denominator + c.numerator * 2**k


def elliptic_gw_series(
    descendants: Sequence[int], order: int, normalized: bool = False
) -> QSeries:
    """Generating series sum_d q^d <prod tau_{k_i}(omega)>_d over an elliptic curve.

    The coefficient of q^d is the disconnected stationary invariant with
    target genus 1.  With ``normalized=True`` the series is divided by
    ``partition_series``; this removes the unmarked unramified torus-cover
    components and gives the q-bracket, which is the quasimodular object.
    """
    ks = [k + 1 for k in descendants]
    denom = 1
    for k in ks:
        denom *= factorial(k) * shifted_power_sum_numerator((), k)[1]
    coeffs = []
    for d in range(order + 1):
        parts = _partition_matrix(d)
        term = np.ones(len(parts), dtype=object)
        for k in ks:
            term = term * _numerators(parts, k)
        coeffs.append(Fraction(int(term.sum()), denom))
    series = QSeries(coeffs)
    return q_bracket(series) if normalized else series


def q_bracket(series: QSeries) -> QSeries:
    """Divide by sum_d p(d) q^d."""
    return series * partition_series(series.order).inverse()


Monomial = tuple[int, int, int]


def monomials(max_weight: int) -> list[Monomial]:
    """Exponents (a, b, c) of E2^a E4^b E6^c with 2a + 4b + 6c <= max_weight."""
    out = []
    for w in range(0, max_weight + 1, 2):
        for c in range(w // 6 + 1):
            for b in range((w - 6 * c) // 4 + 1):
                rest = w - 6 * c - 4 * b
                if rest % 2 == 0:
                    out.append((rest // 2, b, c))
    return out


def monomial_name(m: Monomial) -> str:
    parts = [f"E{w}^{e}" if e > 1 else f"E{w}" for w, e in zip((2, 4, 6), m) if e]
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class QuasimodularBasis:
    max_weight: int
    order: int
    monomials: tuple[Monomial, ...]
    series: tuple[QSeries, ...]

    @classmethod
    def build(cls, max_weight: int, order: int) -> "QuasimodularBasis":
        if max_weight < 0 or max_weight % 2:
            raise ValueError("max_weight must be a nonnegative even integer")
        e = {2: eisenstein(2, order), 4: eisenstein(4, order), 6: eisenstein(6, order)}
        mons = monomials(max_weight)
        series = tuple(e[2] ** a * e[4] ** b * e[6] ** c for a, b, c in mons)
        return cls(max_weight, order, tuple(mons), series)

    def __len__(self) -> int:
        return len(self.monomials)


class UnderdeterminedFit(ValueError):
    """Not enough coefficients to certify a fit."""


@dataclass(frozen=True)
class FitResult:
    success: bool
    max_weight: int
    coefficients: dict[Monomial, Fraction]
    first_mismatch: int | None = None
    seed_rows: tuple[int, ...] = ()

    def to_json(self) -> dict:
        out = {
            "success": self.success,
            "max_weight": self.max_weight,
            "normalization": "E2=1-24q-..., E4=1+240q+..., E6=1-504q-...",
        }
        if self.success:
            out["coefficients"] = {
                monomial_name(m): rational_to_json(c)
                for m, c in self.coefficients.items()
                if c
            }
        else:
            out["first_mismatch"] = self.first_mismatch
        return out


SURPLUS = 10


def _independent_rows(columns: Sequence[QSeries], rows: Sequence[int]) -> list[int]:
    """Greedy choice of rows, in the given order, of full column rank."""
    m = len(columns)
    basis: list[list[Fraction]] = []  # echelon rows
    pivots: list[int] = []
    chosen: list[int] = []
    for r in rows:
        v = [columns[j][r] for j in range(m)]
        for b, p in zip(basis, pivots):
            if v[p]:
                f = v[p] / b[p]
                v = [x - f * y for x, y in zip(v, b)]
        nz = next((j for j in range(m) if v[j]), None)
        if nz is None:
            continue
        basis.append(v)
        pivots.append(nz)
        chosen.append(r)
        if len(chosen) == m:
            break
    return chosen


def solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan on a square nonsingular system over Q, first-nonzero pivoting."""
    n = len(matrix)
    a = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def quasimodular_fit(
    series: QSeries, max_weight: int, seed_rows: Sequence[int] | None = None
) -> FitResult:
    """Express ``series`` in the monomials E2^a E4^b E6^c of weight <= max_weight.

    A square subsystem picked from ``seed_rows`` (default: q^0, q^1, ... in
    order) is solved exactly, then every one of the N+1 coefficients is
    checked.  Raises :class:`UnderdeterminedFit` when N+1 < basis size + 10.
    """
    N = series.order
    basis = QuasimodularBasis.build(max_weight, N)
    m = len(basis)
    if N + 1 < m + SURPLUS:
        raise UnderdeterminedFit(
            f"order {N} too small: need at least {m + SURPLUS - 1} for {m} monomials"
        )
    order_rows = list(range(N + 1)) if seed_rows is None else list(seed_rows)
    rows = _independent_rows(basis.series, order_rows)
    if len(rows) < m:
        raise UnderdeterminedFit("seed rows do not determine the basis coefficients")
    mat = [[basis.series[j][r] for j in range(m)] for r in rows]
    sol = solve_exact(mat, [series[r] for r in rows])
    for n in range(N + 1):
        fitted = sum(c * s[n] for c, s in zip(sol, basis.series))
        if fitted != series[n]:
            return FitResult(False, max_weight, {}, first_mismatch=n, seed_rows=tuple(rows))
    return FitResult(True, max_weight, dict(zip(basis.monomials, sol)), seed_rows=tuple(rows))


def minimal_fit_weight(series: QSeries, max_weight: int) -> FitResult | None:
    """Smallest even weight <= max_weight at which the fit succeeds."""
    for w in range(0, max_weight + 1, 2):
        try:
            res = quasimodular_fit(series, w)
        except UnderdeterminedFit:
            return None
        if res.success:
            return res
    return None
