"""Exact partition sums (Hurwitz numbers, stationary GW invariants of
curves, quasimodular series, Plancherel measure) and periodic dimer models
(Kasteleyn determinants, spectral curves, amoebas, Ronkin functions)."""

__version__ = "0.1.0"
