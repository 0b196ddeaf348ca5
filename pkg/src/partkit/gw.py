"""Stationary Gromov-Witten invariants of a target curve as a finite
partition sum, and the genus constraint that fixes the domain genus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .characters import central_character
from .hurwitz import BranchData, _dim_weight
from .partitions import iter_partitions
from .shifted import shifted_power_sum


@dataclass(frozen=True)
class StationaryInsertions:
    target_genus: int
    degree: int
    descendants: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.target_genus < 0 or self.degree < 0:
            raise ValueError("target genus and degree must be nonnegative")
        ks = tuple(int(k) for k in self.descendants)
        if any(k < 0 for k in ks):
            raise ValueError("descendant orders must be nonnegative")
        object.__setattr__(self, "descendants", ks)


def stationary_gw(ins: StationaryInsertions) -> Fraction:
    """Disconnected invariant <prod tau_{k_i}(omega)>^bullet_d.

    sum_{|lam|=d} (dim lam/d!)^(2-2g(V)) prod_i p_{k_i+1}(lam)/(k_i+1)!.
    Degree 0 keeps only the empty-partition term.
    """
    d = ins.degree
    ks = [k + 1 for k in ins.descendants]
    denom = 1
    for k in ks:
        denom *= factorial(k)
    total = Fraction(0)
    for lam in iter_partitions(d):
        term = _dim_weight(lam, d, ins.target_genus)
        for k in ks:
            term *= shifted_power_sum(lam, k)
        total += term
    return total / denom


def domain_genus(ins: StationaryInsertions) -> Fraction:
    """Genus g solving sum (k_i + 1) = d (2 - 2 g(V)) + 2g - 2 + n.

    A non-integer result means the invariant vanishes.
    """
    return Fraction(sum(ins.descendants) - ins.degree * (2 - 2 * ins.target_genus) + 2, 2)


def gwh_substitution_check(data: BranchData) -> tuple[Fraction, Fraction]:
    """(Hurwitz side with f_{k+1}, GW side with p_{k+1}/(k+1)!) for single-cycle profiles.

    Both sides are the same partition sum with one substitution, so a
    1-cycle profile uses the f_1 = |lam| convention here.
    """
    cycles = []
    for prof in data.profiles:
        if len(prof) != 1:
            raise ValueError(f"profile {tuple(prof)} is not a single cycle")
        cycles.append(prof[0])
    d = data.degree
    hur = Fraction(0)
    for lam in iter_partitions(d):
        term = _dim_weight(lam, d, data.target_genus)
        for k in cycles:
            term *= central_character(lam, (k,))
        hur += term
    gw = stationary_gw(StationaryInsertions(data.target_genus, d, tuple(k - 1 for k in cycles)))
    return hur, gw
