"""Periodic bipartite dimer models.

Kasteleyn matrices twisted by a character (z, w), the spectral polynomial
P(z, w) = det K(z, w), torus and planar partition functions, and an
exhaustive perfect-matching counter used as the oracle for all of them.

Kasteleyn signs are supplied with the graph.  The built-in constructors
carry signings that the matching oracle confirms; there is no general
orientation search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations
from math import exp
from typing import Iterable, Sequence

import numpy as np

ORACLE_MAX_VERTICES = 36
EXACT_EXPANSION_MAX = 6


@dataclass(frozen=True)
class Edge:
    b: int
    w: int
    weight: float = 1.0
    dx: int = 0
    dy: int = 0
    sign: int = 1


@dataclass(frozen=True)
class PeriodicBipartiteGraph:
    """Fundamental domain of a doubly periodic bipartite graph.

    An edge joins black vertex ``b`` in the base copy to white vertex ``w``
    in the copy translated by ``(dx, dy)``.
    """

    black: tuple[tuple[float, float], ...]
    white: tuple[tuple[float, float], ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if len(self.black) != len(self.white):
            raise ValueError("need as many black as white vertices")
        for e in self.edges:
            if not (0 <= e.b < len(self.black) and 0 <= e.w < len(self.white)):
                raise ValueError(f"edge {e} references a missing vertex")
            if not e.weight > 0:
                raise ValueError("edge weights must be positive")
            if e.sign not in (1, -1):
                raise ValueError("edge signs must be +1 or -1")

    @property
    def size(self) -> int:
        return len(self.black)

    def to_dict(self) -> dict:
        return {
            "black": [list(p) for p in self.black],
            "white": [list(p) for p in self.white],
            "edges": [
                {"b": e.b, "w": e.w, "weight": e.weight, "dx": e.dx, "dy": e.dy, "sign": e.sign}
                for e in self.edges
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PeriodicBipartiteGraph":
        return cls(
            tuple(tuple(p) for p in data["black"]),
            tuple(tuple(p) for p in data["white"]),
            tuple(
                Edge(
                    int(e["b"]),
                    int(e["w"]),
                    float(e.get("weight", 1.0)),
                    int(e.get("dx", 0)),
                    int(e.get("dy", 0)),
                    int(e.get("sign", 1)),
                )
                for e in data["edges"]
            ),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "PeriodicBipartiteGraph":
        return cls.from_dict(json.loads(text))


def honeycomb(a: float = 1.0, b: float = 1.0, c: float = 1.0) -> PeriodicBipartiteGraph:
    """One black and one white vertex; P(z, w) = a + b z + c w."""
    return PeriodicBipartiteGraph(
        black=((0.0, 0.0),),
        white=((0.5, 0.3),),
        edges=(Edge(0, 0, a, 0, 0), Edge(0, 0, b, 1, 0), Edge(0, 0, c, 0, 1)),
    )


def square_torus(weights: Sequence[float] | None = None) -> PeriodicBipartiteGraph:
    """2x2 fundamental domain of the square lattice.

    Black (0,0), (1,1); white (1,0), (0,1).  Vertical edges in column x
    carry sign (-1)^x, which makes every square face Kasteleyn-flat.  The
    eight weights follow the edge order below; unit weights give
    P = 4 + z + 1/z + w + 1/w.
    """
    wt = [1.0] * 8 if weights is None else [float(x) for x in weights]
    if len(wt) != 8:
        raise ValueError("square_torus takes 8 edge weights")
    edges = (
        Edge(0, 0, wt[0], 0, 0, 1),    # (0,0)-(1,0)
        Edge(0, 0, wt[1], -1, 0, 1),   # (0,0)-(-1,0)
        Edge(0, 1, wt[2], 0, 0, 1),    # (0,0)-(0,1)
        Edge(0, 1, wt[3], 0, -1, 1),   # (0,0)-(0,-1)
        Edge(1, 1, wt[4], 1, 0, 1),    # (1,1)-(2,1)
        Edge(1, 1, wt[5], 0, 0, 1),    # (1,1)-(0,1)
        Edge(1, 0, wt[6], 0, 1, -1),   # (1,1)-(1,2)
        Edge(1, 0, wt[7], 0, 0, -1),   # (1,1)-(1,0)
    )
    return PeriodicBipartiteGraph(((0.0, 0.0), (1.0, 1.0)), ((1.0, 0.0), (0.0, 1.0)), edges)


def gapped_square_torus() -> PeriodicBipartiteGraph:
    """Square lattice weights with a gaseous bubble: P = 7 + 2z + 2/z + w + 1/w."""
    return square_torus([2, 1, 1, 1, 1, 2, 1, 1])


BUILTIN = {"honeycomb": honeycomb, "square": square_torus, "gapped-square": gapped_square_torus}


def kasteleyn_matrix(G: PeriodicBipartiteGraph, z: complex = 1, w: complex = 1) -> np.ndarray:
    """K[b, w] = sum over edges b-w of sign * weight * z^dx * w^dy."""
    if z == 0 or w == 0:
        raise ValueError("twist parameters must be nonzero")
    K = np.zeros((len(G.black), len(G.white)), dtype=complex)
    for e in G.edges:
        K[e.b, e.w] += e.sign * e.weight * complex(z) ** e.dx * complex(w) ** e.dy
    return K


# -- Laurent polynomials -----------------------------------------------------


class LaurentPoly2:
    """Real Laurent polynomial sum c_ij z^i w^j."""

    def __init__(self, terms: dict[tuple[int, int], float] | Iterable = ()):
        items = terms.items() if isinstance(terms, dict) else ((tuple(t[:2]), t[2]) for t in terms)
        self.terms: dict[tuple[int, int], float] = {}
        for (i, j), c in items:
            key = (int(i), int(j))
            self.terms[key] = self.terms.get(key, 0.0) + float(c)
        self.terms = {k: c for k, c in self.terms.items() if c != 0.0}

    def __repr__(self) -> str:
        return f"LaurentPoly2({dict(sorted(self.terms.items()))})"

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        for (i, j), c in self.terms.items():
            out = out + c * z**i * w**j
        return out

    def __mul__(self, c: float) -> "LaurentPoly2":
        return LaurentPoly2({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    @property
    def exponents(self) -> list[tuple[int, int]]:
        return sorted(self.terms)

    def scale_variables(self, a: float, b: float) -> "LaurentPoly2":
        """P(a z, b w)."""
        return LaurentPoly2({(i, j): c * a**i * b**j for (i, j), c in self.terms.items()})

    def shift(self, di: int, dj: int) -> "LaurentPoly2":
        return LaurentPoly2({(i + di, j + dj): c for (i, j), c in self.terms.items()})

    def normalized(self) -> "LaurentPoly2":
        """Unit representative: lowest exponent 0 in each variable and a
        positive coefficient on the lexicographically largest exponent."""
        if not self.terms:
            return self
        imin = min(i for i, _ in self.terms)
        jmin = min(j for _, j in self.terms)
        out = self.shift(-imin, -jmin)
        lead = out.terms[max(out.terms)]
        return out * (1.0 if lead > 0 else -1.0)

    def w_degree_range(self) -> tuple[int, int]:
        js = [j for _, j in self.terms]
        return min(js), max(js)

    def w_coefficients(self, z: np.ndarray) -> np.ndarray:
        """Coefficients of P(z, .) as a polynomial in w, highest power first.

        Shape ``z.shape + (deg + 1,)`` where the w-exponents are shifted to
        start at 0.
        """
        z = np.asarray(z, dtype=complex)
        jmin, jmax = self.w_degree_range()
        out = np.zeros(z.shape + (jmax - jmin + 1,), dtype=complex)
        for (i, j), c in self.terms.items():
            out[..., jmax - j] += c * z**i
        return out

    def allclose(self, other: "LaurentPoly2", tol: float = 1e-9) -> bool:
        keys = set(self.terms) | set(other.terms)
        scale = max([abs(c) for c in self.terms.values()] + [1.0])
        return all(abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol * scale for k in keys)

    def to_json(self) -> list[list]:
        return [[i, j, c] for (i, j), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly2":
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, dict):
            data = data["terms"]
        return cls((int(i), int(j), float(c)) for i, j, c in data)


# -- spectral polynomial -----------------------------------------------------


def _entry_polys(G: PeriodicBipartiteGraph) -> list[list[dict]]:
    n = G.size
    entries: list[list[dict]] = [[{} for _ in range(n)] for _ in range(n)]
    for e in G.edges:
        poly = entries[e.b][e.w]
        key = (e.dx, e.dy)
        poly[key] = poly.get(key, 0.0) + e.sign * e.weight
    return entries


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def _spectral_exact(G: PeriodicBipartiteGraph) -> LaurentPoly2:
    entries = _entry_polys(G)
    n = G.size
    total: dict[tuple[int, int], float] = {}
    for p in permutations(range(n)):
        acc = {(0, 0): float(_perm_sign(p))}
        for b in range(n):
            ent = entries[b][p[b]]
            if not ent:
                acc = {}
                break
            nxt: dict[tuple[int, int], float] = {}
            for (i1, j1), c1 in acc.items():
                for (i2, j2), c2 in ent.items():
                    key = (i1 + i2, j1 + j2)
                    nxt[key] = nxt.get(key, 0.0) + c1 * c2
            acc = nxt
        for k, c in acc.items():
            total[k] = total.get(k, 0.0) + c
    return LaurentPoly2({k: c for k, c in total.items() if abs(c) > 1e-12})


def _spectral_interpolated(G: PeriodicBipartiteGraph, tol: float = 1e-10) -> LaurentPoly2:
    rows: dict[int, list[Edge]] = {}
    for e in G.edges:
        rows.setdefault(e.b, []).append(e)
    if len(rows) < G.size:
        return LaurentPoly2()
    lo_x = sum(min(e.dx for e in es) for es in rows.values())
    hi_x = sum(max(e.dx for e in es) for es in rows.values())
    lo_y = sum(min(e.dy for e in es) for es in rows.values())
    hi_y = sum(max(e.dy for e in es) for es in rows.values())
    nx, ny = hi_x - lo_x + 1, hi_y - lo_y + 1
    zs = np.exp(2j * np.pi * np.arange(nx) / nx)
    ws = np.exp(2j * np.pi * np.arange(ny) / ny)
    vals = np.empty((nx, ny), dtype=complex)
    for a, z in enumerate(zs):
        for b, w in enumerate(ws):
            # strip the lowest monomial so exponents index from 0
            vals[a, b] = np.linalg.det(kasteleyn_matrix(G, z, w)) * z**-lo_x * w**-lo_y
    coeffs = np.fft.fft2(vals) / (nx * ny)
    # fft2 uses e^{-2 pi i jk/n}, which is exactly the coefficient extraction
    scale = np.abs(coeffs).max() if coeffs.size else 0.0
    terms = {}
    for a in range(nx):
        for b in range(ny):
            c = coeffs[a, b]
            if abs(c) > tol * max(scale, 1.0):
                terms[(a + lo_x, b + lo_y)] = c.real
    return LaurentPoly2(terms)


def spectral_polynomial(
    G: PeriodicBipartiteGraph, normalize: bool = True, method: str = "auto"
) -> LaurentPoly2:
    """P(z, w) = det K(z, w) as a Laurent polynomial.

    ``method`` is "exact" (Leibniz expansion), "interpolate" (evaluation on
    roots of unity plus 2D FFT) or "auto" (exact up to 6 black vertices).
    With ``normalize`` the result is the unit representative of
    :meth:`LaurentPoly2.normalized`.
    """
    if method == "auto":
        method = "exact" if G.size <= EXACT_EXPANSION_MAX else "interpolate"
    if method == "exact":
        P = _spectral_exact(G)
    elif method == "interpolate":
        P = _spectral_interpolated(G)
    else:
        raise ValueError(f"unknown method {method!r}")
    return P.normalized() if normalize else P


def apply_magnetic_field(G: PeriodicBipartiteGraph, B1: float, B2: float) -> PeriodicBipartiteGraph:
    """Multiply each edge weight by exp(B1 dx + B2 dy)."""
    return replace(
        G,
        edges=tuple(replace(e, weight=e.weight * exp(B1 * e.dx + B2 * e.dy)) for e in G.edges),
    )


# -- finite graphs -----------------------------------------------------------


@dataclass(frozen=True)
class FiniteGraph:
    """Finite multigraph with optional bipartition and Kasteleyn data.

    ``edges`` are (u, v, weight); for bipartite graphs u is black and v
    is white, each indexed within its colour class.
    """

    num_black: int
    num_white: int
    edges: tuple[tuple[int, int, object], ...]
    signs: tuple[int, ...] = field(default=())
    # wrap counts of each edge around the torus, used for the (+-1, +-1) twists
    windings: tuple[tuple[int, int], ...] = field(default=())
    offsets: tuple[tuple[int, int], ...] = field(default=())

    @property
    def num_vertices(self) -> int:
        return self.num_black + self.num_white


def torus_graph(G: PeriodicBipartiteGraph, n: int) -> FiniteGraph:
    """G_n = G / n Z^2 with edge windings around the n-torus."""
    if n < 1:
        raise ValueError("n must be positive")
    k = G.size
    edges, signs, windings, offsets = [], [], [], []
    for i in range(n):
        for j in range(n):
            for e in G.edges:
                ti, tj = i + e.dx, j + e.dy
                b = (i * n + j) * k + e.b
                w = ((ti % n) * n + (tj % n)) * k + e.w
                edges.append((b, w, e.weight))
                signs.append(e.sign)
                windings.append((ti // n, tj // n))
                offsets.append((e.dx, e.dy))
    return FiniteGraph(k * n * n, k * n * n, tuple(edges), tuple(signs), tuple(windings), tuple(offsets))


def twisted_matrix(F: FiniteGraph, z: complex = 1, w: complex = 1) -> np.ndarray:
    K = np.zeros((F.num_black, F.num_white), dtype=complex)
    for (b, wh, wt), s, (hx, hy) in zip(F.edges, F.signs, F.windings):
        K[b, wh] += s * float(wt) * complex(z) ** hx * complex(w) ** hy
    return K


def twisted_determinants(G: PeriodicBipartiteGraph, n: int) -> dict[tuple[int, int], float]:
    """det K_n(sigma, tau) for (sigma, tau) in {+1, -1}^2 (all real)."""
    F = torus_graph(G, n)
    return {
        (s, t): float(np.linalg.det(twisted_matrix(F, s, t)).real)
        for s in (1, -1)
        for t in (1, -1)
    }


def torus_partition_function(G: PeriodicBipartiteGraph, n: int) -> float:
    """Weighted number of perfect matchings of G_n from four twisted determinants.

    A Kasteleyn signing makes the sign of a matching depend only on its
    winding class mod 2, so (1/4) sum sigma^a tau^b det K(sigma, tau) is
    +-(weight of class (a, b)); the partition function is the sum of the
    absolute values over the four classes.  This equals the usual
    (1/2)|+-Z_{++} +- Z_{-+} +- Z_{+-} +- Z_{--}| with the minus sign on the
    one class whose sign differs, without having to know that class.
    """
    dets = twisted_determinants(G, n)
    total = 0.0
    for a in (0, 1):
        for b in (0, 1):
            total += abs(sum(s**a * t**b * v for (s, t), v in dets.items()) / 4)
    return total


def _adjacency(num_vertices: int, edges) -> list[list[tuple[int, object]]]:
    adj: list[list[tuple[int, object]]] = [[] for _ in range(num_vertices)]
    for u, v, wt in edges:
        adj[u].append((v, wt))
        adj[v].append((u, wt))
    return adj


def matching_oracle(num_vertices: int, edges: Iterable[tuple[int, int, object]]) -> Fraction:
    """Exact weighted count of perfect matchings by exhaustive backtracking.

    Vertices are 0..num_vertices-1, ``edges`` are (u, v, weight) with
    parallel edges allowed.  Weights are converted to exact rationals.
    Partial results are memoized on the set of matched vertices.
    """
    if num_vertices > ORACLE_MAX_VERTICES:
        raise ValueError(f"matching oracle is limited to {ORACLE_MAX_VERTICES} vertices")
    edges = [(u, v, Fraction(wt)) for u, v, wt in edges if u != v]
    if num_vertices % 2:
        return Fraction(0)
    adj = _adjacency(num_vertices, edges)
    full = (1 << num_vertices) - 1
    memo: dict[int, Fraction] = {full: Fraction(1)}

    def count(mask: int) -> Fraction:
        if mask in memo:
            return memo[mask]
        u = (~mask & (mask + 1)).bit_length() - 1  # lowest unmatched vertex
        total = Fraction(0)
        for v, wt in adj[u]:
            if not mask >> v & 1:
                total += wt * count(mask | 1 << u | 1 << v)
        memo[mask] = total
        return total

    return count(0)


def finite_graph_oracle(F: FiniteGraph) -> Fraction:
    """matching_oracle on a bipartite FiniteGraph (white shifted after black)."""
    return matching_oracle(
        F.num_vertices, ((b, F.num_black + w, wt) for b, w, wt in F.edges)
    )


def grid_graph(rows: int, cols: int) -> list[tuple[int, int, int]]:
    """Edges (u, v, 1) of the rows x cols grid; vertex r*cols + c."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                edges.append((u, u + 1, 1))
            if r + 1 < rows:
                edges.append((u, u + cols, 1))
    return edges


def grid_kasteleyn(rows: int, cols: int) -> list[list[int]]:
    """Integer Kasteleyn matrix of the planar grid, black = (r + c) even.

    Horizontal edges +1, vertical edges in column c carry (-1)^c, so each
    unit square has sign product -1.
    """
    black = [(r, c) for r in range(rows) for c in range(cols) if (r + c) % 2 == 0]
    white = [(r, c) for r in range(rows) for c in range(cols) if (r + c) % 2 == 1]
    widx = {v: i for i, v in enumerate(white)}
    K = [[0] * len(white) for _ in black]
    for i, (r, c) in enumerate(black):
        for dr, dc in ((0, 1), (0, -1), (1, 0), (-1, 0)):
            nb = (r + dr, c + dc)
            if nb in widx:
                K[i][widx[nb]] = 1 if dr == 0 else (-1) ** c
    return K


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free exact determinant of an integer matrix."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def planar_partition_function(rows: int, cols: int) -> int:
    """Number of domino tilings of a rows x cols rectangle, as |det K|."""
    if rows < 1 or cols < 1 or rows > 16 or cols > 16:
        raise ValueError("grid dimensions must be in 1..16")
    if rows * cols % 2:
        return 0
    return abs(bareiss_determinant(grid_kasteleyn(rows, cols)))
