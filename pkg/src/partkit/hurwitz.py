"""Hurwitz numbers from Burnside's character formula, a brute-force
permutation oracle, and the connected/disconnected conversion.

All counts are possibly-disconnected covers weighted by 1/|Aut|; that
weighting is the 1/d! in both routes, so do not divide again.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Sequence

from .characters import central_character, strip_fixed_points
from .partitions import Partition, dimension, iter_partitions
from .qseries import QSeries

ORACLE_MAX_DEGREE = 6
ORACLE_MAX_GENUS = 1
ORACLE_MAX_PROFILES = 4


@dataclass(frozen=True)
class BranchData:
    target_genus: int
    degree: int
    profiles: tuple[Partition, ...] = field(default=())

    def __post_init__(self):
        if self.target_genus < 0:
            raise ValueError("target genus must be nonnegative")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        # a profile larger than the degree is allowed and admits no covers
        profiles = tuple(Partition.from_parts(p) for p in self.profiles)
        object.__setattr__(self, "profiles", profiles)

    @classmethod
    def parse(cls, target_genus: int, degree: int, profiles: str) -> "BranchData":
        """``profiles`` like ``"2,2;3"``: semicolons between points, commas between parts."""
        pts = [s for s in profiles.split(";") if s.strip()]
        return cls(target_genus, degree, tuple(tuple(int(x) for x in s.split(",")) for s in pts))


def _dim_weight(lam: Partition, d: int, target_genus: int) -> Fraction:
    e = 2 - 2 * target_genus
    if e == 0:
        return Fraction(1)
    return Fraction(dimension(lam), factorial(d)) ** e


def hurwitz_number(data: BranchData) -> Fraction:
    """sum_{|lam|=d} (dim lam / d!)^(2-2g) prod_i f_{eta_i}(lam).

    Profiles are conjugacy classes; 1-cycles are fixed points and an empty
    profile is the identity class.
    """
    if data.degree < 1:
        raise ValueError("degree must be >= 1")
    d = data.degree
    classes = [strip_fixed_points(p) for p in data.profiles]
    total = Fraction(0)
    for lam in iter_partitions(d):
        term = _dim_weight(lam, d, data.target_genus)
        for eta in classes:
            if not term:
                break
            term *= central_character(lam, eta)
        total += term
    return total


# -- brute-force oracle ------------------------------------------------------

Perm = tuple[int, ...]


def _compose(p: Perm, q: Perm) -> Perm:
    """(p q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def _inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def cycle_type(p: Perm) -> Partition:
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                n += 1
            lengths.append(n)
    return Partition.from_parts(lengths)


@lru_cache(maxsize=None)
def _classes(d: int) -> dict[Partition, tuple[Perm, ...]]:
    out: dict[Partition, list[Perm]] = {}
    for p in permutations(range(d)):
        out.setdefault(strip_fixed_points(cycle_type(p)), []).append(p)
    return {k: tuple(v) for k, v in out.items()}


@lru_cache(maxsize=None)
def _commutator_distribution(d: int) -> dict[Perm, int]:
    group = list(permutations(range(d)))
    inverses = {g: _inverse(g) for g in group}
    counts: Counter = Counter()
    for a in group:
        ai = inverses[a]
        for b in group:
            counts[_compose(_compose(a, b), _compose(ai, inverses[b]))] += 1
    return dict(counts)


def hurwitz_oracle(data: BranchData) -> Fraction:
    """Count tuples (a_1, b_1, ..., sigma_1, ...) in S_d with
    prod [a_i, b_i] prod sigma_j = id and sigma_j in the class eta_j, over d!.

    Limited to d <= 6, target genus <= 1 and at most 4 branch points.
    """
    d, g = data.degree, data.target_genus
    if d < 1 or d > ORACLE_MAX_DEGREE or g > ORACLE_MAX_GENUS or len(data.profiles) > ORACLE_MAX_PROFILES:
        raise ValueError("input exceeds the brute-force oracle guard")
    identity = tuple(range(d))
    # distribution of the partial product, keyed by permutation
    dist: dict[Perm, int] = {identity: 1}
    if g == 1:
        dist = dict(_commutator_distribution(d))
    classes = _classes(d)
    for eta in data.profiles:
        members = classes.get(strip_fixed_points(eta), ())
        nxt: Counter = Counter()
        for p, c in dist.items():
            for s in members:
                nxt[_compose(p, s)] += c
        dist = nxt
    return Fraction(dist.get(identity, 0), factorial(d))


def connected_oracle(data: BranchData) -> Fraction:
    """Like :func:`hurwitz_oracle` but keeps only tuples generating a
    transitive subgroup, i.e. connected covers."""
    d, g = data.degree, data.target_genus
    if d < 1 or d > 5 or g > ORACLE_MAX_GENUS or len(data.profiles) > 3:
        raise ValueError("input exceeds the connected-oracle guard")
    identity = tuple(range(d))
    group = list(permutations(range(d)))
    classes = _classes(d)
    members = [classes.get(strip_fixed_points(eta), ()) for eta in data.profiles]

    def tuples(k, prefix):
        if k == len(members):
            yield prefix
            return
        for s in members[k]:
            yield from tuples(k + 1, prefix + [s])

    count = 0
    handles = [(a, b) for a in group for b in group] if g == 1 else [None]
    for h in handles:
        base = identity
        gens = []
        if h is not None:
            a, b = h
            base = _compose(_compose(a, b), _compose(_inverse(a), _inverse(b)))
            gens = [a, b]
        for sig in tuples(0, []):
            prod = base
            for s in sig:
                prod = _compose(prod, s)
            if prod == identity and _transitive(gens + sig, d):
                count += 1
    return Fraction(count, factorial(d))


def _transitive(gens: Sequence[Perm], d: int) -> bool:
    reached = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for g in gens:
            j = g[i]
            if j not in reached:
                reached.add(j)
                stack.append(j)
    return len(reached) == d


# -- generating series -------------------------------------------------------


def connected_series(disconnected: QSeries | Sequence) -> QSeries:
    """Connected counts from disconnected ones: the formal log.

    The input must start with the empty-cover term 1.
    """
    z = disconnected if isinstance(disconnected, QSeries) else QSeries(disconnected)
    if z[0] != 1:
        raise ValueError("disconnected series must have constant term 1")
    return z.log()


def disconnected_series(connected: QSeries | Sequence) -> QSeries:
    f = connected if isinstance(connected, QSeries) else QSeries(connected)
    return f.exp()


def hurwitz_series(target_genus: int, profile_of_degree, order: int) -> QSeries:
    """sum_d H_d q^d with constant term 1, branching given per degree by
    ``profile_of_degree(d) -> profiles``."""
    coeffs = [Fraction(1)]
    for d in range(1, order + 1):
        coeffs.append(hurwitz_number(BranchData(target_genus, d, tuple(profile_of_degree(d)))))
    return QSeries(coeffs)
