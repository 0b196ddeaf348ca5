"""Acceptance checks shared by ``partkit selftest`` and the test suite.

Each check returns a :class:`Criterion`; tolerances and sizes are fixed
here and never tuned at run time.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np
from scipy.stats import chi2

from .amoeba import PI2_NOTE, facet_gradient, harnack_area_test, ronkin
from .characters import central_character, character, class_size
from .dimers import (
    LaurentPoly2,
    finite_graph_oracle,
    grid_graph,
    honeycomb,
    matching_oracle,
    planar_partition_function,
    spectral_polynomial,
    torus_graph,
    torus_partition_function,
)
from .gw import StationaryInsertions, domain_genus, stationary_gw
from .hurwitz import BranchData, hurwitz_number, hurwitz_oracle
from .partitions import dimension, iter_partitions, partitions_of
from .plancherel import (
    chi_square_statistic,
    first_row_statistics,
    longest_increasing_subsequence,
    random_permutation,
    rsk_shape,
)
from .qseries import SURPLUS, QuasimodularBasis, elliptic_gw_series, q_bracket, quasimodular_fit
from .shifted import shifted_power_sum

SEED = 20240601
LINE = LaurentPoly2({(0, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0})


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:>2}. {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(number: int, name: str):
    def wrap(fn):
        def run() -> Criterion:
            t0 = time.perf_counter()
            passed, detail, extra = fn()
            return Criterion(number, name, passed, detail, time.perf_counter() - t0, extra)

        run.__name__ = fn.__name__
        run.number = number
        return run

    return wrap


@_timed(1, "sum of dim^2 equals n!")
def dimension_squares():
    t0 = time.perf_counter()
    bad = [n for n in range(11) if sum(dimension(l) ** 2 for l in partitions_of(n)) != factorial(n)]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5
    return ok, f"n<=10 mismatches={bad}, {elapsed:.2f}s (limit 5s)", {}


@_timed(2, "character orthogonality")
def character_orthogonality():
    bad = []
    for n in range(9):
        parts = partitions_of(n)
        table = {l: [character(l, m) for m in parts] for l in parts}
        sizes = [class_size(m, n) for m in parts]
        for a in parts:
            for b in parts:
                s = sum(c * x * y for c, x, y in zip(sizes, table[a], table[b]))
                if s != (factorial(n) if a == b else 0):
                    bad.append((n, a, b))
    return not bad, f"n<=8 failures={len(bad)}", {}


@_timed(3, "p_1 = |lam| - 1/24 and p_2 = 2 f_2")
def shifted_identities():
    bad = 0
    count = 0
    for n in range(11):
        for lam in iter_partitions(n):
            count += 1
            if shifted_power_sum(lam, 1) != n - Fraction(1, 24):
                bad += 1
            if shifted_power_sum(lam, 2) != 2 * central_character(lam, (2,)):
                bad += 1
    return bad == 0, f"{count} partitions with |lam|<=10, failures={bad}", {}


def random_branch_data(rng: random.Random, max_degree: int = 5, max_points: int = 3) -> BranchData:
    d = rng.randint(1, max_degree)
    g = rng.randint(0, 1)
    profiles = []
    for _ in range(rng.randint(0, max_points)):
        cycles = [p for p in partitions_of(d)]
        profiles.append(tuple(rng.choice(cycles)))
    return BranchData(g, d, tuple(profiles))


@_timed(4, "Burnside formula equals permutation enumeration")
def hurwitz_vs_oracle():
    rng = random.Random(SEED)
    cases = [BranchData(0, 2, ((2,), (2,))), BranchData(1, 2, ())]
    cases += [random_branch_data(rng) for _ in range(48)]
    bad = [c for c in cases if hurwitz_number(c) != hurwitz_oracle(c)]
    fixed = (hurwitz_number(cases[0]), hurwitz_number(cases[1]))
    ok = not bad and fixed == (Fraction(1, 2), Fraction(2))
    return ok, f"{len(cases)} cases, mismatches={len(bad)}, fixed values {fixed[0]} and {fixed[1]}", {}


@_timed(5, "GW with k_i=1 equals simple Hurwitz; parity vanishing")
def gw_checks():
    bad = []
    for d in range(1, 6):
        for n in range(5):
            gw = stationary_gw(StationaryInsertions(1, d, (1,) * n))
            hn = hurwitz_number(BranchData(1, d, ((2,),) * n))
            if gw != hn:
                bad.append((d, n))
    rng = random.Random(SEED + 5)
    odd = 0
    nonzero = []
    while odd < 100:
        ins = StationaryInsertions(
            rng.randint(0, 2), rng.randint(0, 6), tuple(rng.randint(0, 4) for _ in range(rng.randint(1, 4)))
        )
        if domain_genus(ins).denominator == 1:
            continue
        odd += 1
        if stationary_gw(ins) != 0:
            nonzero.append(ins)
    ok = not bad and not nonzero
    return ok, f"simple-branching mismatches={bad}, nonzero at non-integer genus={len(nonzero)}/100", {}


def _fit_order(max_weight: int) -> int:
    return max(40, len(QuasimodularBasis.build(max_weight, 0)) + SURPLUS - 1)


@_timed(6, "elliptic GW series are quasimodular")
def quasimodularity():
    results = {}
    ok = True
    for ks in ((1, 1), (2, 2), (1, 1, 1, 1)):
        W = sum(k + 2 for k in ks)
        order = _fit_order(W)
        series = elliptic_gw_series(ks, order)
        fit = quasimodular_fit(q_bracket(series), W)
        raw = quasimodular_fit(series, W)
        results[ks] = (W, order, fit.success, raw.first_mismatch)
        ok &= fit.success
    detail = "; ".join(
        f"{list(k)} W={w} order={o} fit={'ok' if s else 'FAILED'} (raw series mismatch at q^{m})"
        for k, (w, o, s, m) in results.items()
    )
    return ok, detail + " [series divided by sum p(d) q^d]", {"results": results}


@_timed(7, "torus and planar dimer counts match the oracle")
def dimer_counts():
    hc = honeycomb()
    z1 = torus_partition_function(hc, 1)
    z2 = torus_partition_function(hc, 2)
    o1 = finite_graph_oracle(torus_graph(hc, 1))
    o2 = finite_graph_oracle(torus_graph(hc, 2))
    grids = {(2, 2): 2, (2, 4): 5, (4, 4): 36}
    planar = {k: planar_partition_function(*k) for k in grids}
    oracle = {k: matching_oracle(k[0] * k[1], grid_graph(*k)) for k in grids}
    ok = (
        round(z1) == o1 == 3
        and round(z2) == o2
        and abs(z2 - float(o2)) < 1e-9 * float(o2)
        and planar == grids == oracle
    )
    return ok, f"honeycomb n=1 {z1:.6g} (oracle {o1}), n=2 {z2:.6g} (oracle {o2}); planar {planar}", {}


@_timed(8, "unit honeycomb spectral polynomial is z + w + 1")
def honeycomb_spectral():
    P = spectral_polynomial(honeycomb())
    ok = P.allclose(LINE, 1e-12) and set(P.terms) == set(LINE.terms)
    return ok, f"P = {sorted(P.terms.items())}", {}


@_timed(9, "Ronkin convexity and facet slopes")
def ronkin_checks():
    rng = np.random.default_rng(SEED)
    lo, hi = -3.0, 3.0
    cache: dict = {}

    def R(p):
        key = (float(p[0]), float(p[1]))
        if key not in cache:
            cache[key] = ronkin(LINE, *key, quad_order=256)
        return cache[key]

    worst = -math.inf
    for _ in range(1000):
        p, q = rng.uniform(lo, hi, 2), rng.uniform(lo, hi, 2)
        worst = max(worst, R((p + q) / 2) - (R(p) + R(q)) / 2)
    slopes = {}
    for pt in ((-8.0, -8.0), (8.0, 0.0), (0.0, 8.0)):
        slopes[pt] = facet_gradient(LINE, pt, quad_order=256, tol=0.05)
    ok = worst <= 1e-3 and slopes == {(-8.0, -8.0): (0, 0), (8.0, 0.0): (1, 0), (0.0, 8.0): (0, 1)}
    return ok, f"max midpoint excess {worst:.2e} (tol 1e-3), slopes {list(slopes.values())}", {}


@_timed(10, "Harnack area ratio for z + w + 1")
def harnack():
    t0 = time.perf_counter()
    rec = harnack_area_test(LINE, (-6.0, 6.0, -6.0, 6.0), 600, 720)
    elapsed = time.perf_counter() - t0
    ok = 0.95 <= rec["ratio"] <= 1.05 and elapsed < 60 and rec["normalization_note"] == PI2_NOTE
    return ok, f"ratio {rec['ratio']:.4f} in [0.95, 1.05], {elapsed:.1f}s; note: pi^2 normalization recorded", {"record": rec}


@_timed(11, "Plancherel statistics")
def plancherel_checks():
    stats = first_row_statistics(2500, 200, SEED)
    mean_ok = 1.85 <= stats["mean_lambda1_over_sqrt_n"] <= 2.0
    lis_bad = 0
    for s in range(1000):
        n = 1 + s % 10
        perm = random_permutation(n, s).tolist()
        if rsk_shape(perm)[0] != longest_increasing_subsequence(perm):
            lis_bad += 1
    stat, dof = chi_square_statistic(5, 100_000, SEED)
    threshold = chi2.ppf(0.999, dof)
    ok = mean_ok and lis_bad == 0 and stat < threshold and stats["lambda1_ge_lambda2"]
    return ok, (
        f"mean(l1)/sqrt(n)={stats['mean_lambda1_over_sqrt_n']:.4f} in [1.85, 2.00]; "
        f"LIS mismatches={lis_bad}/1000; chi2={stat:.2f} < {threshold:.2f} (dof {dof})"
    ), {"stats": stats}


CRITERIA = [
    dimension_squares,
    character_orthogonality,
    shifted_identities,
    hurwitz_vs_oracle,
    gw_checks,
    quasimodularity,
    dimer_counts,
    honeycomb_spectral,
    ronkin_checks,
    harnack,
    plancherel_checks,
]


def run_all(echo=print) -> list[Criterion]:
    t0 = time.perf_counter()
    results = []
    for check in CRITERIA:
        res = check()
        echo(res.line())
        results.append(res)
    total = time.perf_counter() - t0
    overall = Criterion(
        12, "selftest end to end", all(r.passed for r in results) and total < 600, f"{total:.1f}s (limit 600s)", total
    )
    echo(overall.line())
    results.append(overall)
    return results
