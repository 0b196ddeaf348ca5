"""Amoebas, Ronkin functions and limit shapes of spectral curves.

Membership in the amoeba is read off a sweep over z = exp(x + i theta):
at fixed x the k-th smallest root modulus of P(z, .) is a continuous
function of theta, so the vertical slice of the amoeba is the union over
k of the ranges [min_theta log|w_k|, max_theta log|w_k|].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import ndimage

from .dimers import LaurentPoly2

LEAD_TOL = 1e-10
PI2_NOTE = (
    "amoeba area is compared with pi^2 times the Newton polygon area; "
    "the unnormalized statement 'amoeba area equals Newton polygon area' "
    "does not hold for z + w + 1 (pi^2/2 versus 1/2)"
)

Bbox = tuple[float, float, float, float]


class PhaseLabel(str, Enum):
    FROZEN = "frozen"
    LIQUID = "liquid"
    GASEOUS = "gaseous"


class NotInFacet(ValueError):
    """Finite-difference gradient is not close to a lattice point."""


@dataclass
class AmoebaRaster:
    bbox: Bbox
    resolution: tuple[int, int]
    mask: np.ndarray  # shape (ny, nx), row 0 at ymin
    samples: np.ndarray  # (m, 2) points (x, log|w|)
    theta_steps: int
    # cells whose centre lies in a slice range; the midpoint-rule area mask
    core: np.ndarray | None = None

    @property
    def cell_size(self) -> tuple[float, float]:
        xmin, xmax, ymin, ymax = self.bbox
        nx, ny = self.resolution
        return (xmax - xmin) / nx, (ymax - ymin) / ny

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        xmin, _, ymin, _ = self.bbox
        dx, dy = self.cell_size
        return int(math.floor((y - ymin) / dy)), int(math.floor((x - xmin) / dx))

    def contains(self, x: float, y: float) -> bool:
        iy, ix = self.cell_of(x, y)
        ny, nx = self.mask.shape
        if not (0 <= iy < ny and 0 <= ix < nx):
            return False
        return bool(self.mask[iy, ix])

    @property
    def area(self) -> float:
        """Cell-count area of ``core``.

        ``mask`` also keeps cells hit by samples, which keeps thin
        tentacles connected but overcounts them by up to a cell per column.
        """
        dx, dy = self.cell_size
        cells = self.core if self.core is not None else self.mask
        return float(cells.sum()) * dx * dy

    def to_pgm(self) -> str:
        """Plain PGM, maxval 1, top row = ymax."""
        ny, nx = self.mask.shape
        lines = ["P2", f"{nx} {ny}", "1"]
        for row in self.mask[::-1]:
            lines.append(" ".join("1" if v else "0" for v in row))
        return "\n".join(lines) + "\n"

    def sidecar(self) -> dict:
        return {
            "bbox": list(self.bbox),
            "resolution": list(self.resolution),
            "theta_steps": self.theta_steps,
            "orientation": "PGM row 0 is y = ymax",
            "area": self.area,
        }


def _check_curve(P: LaurentPoly2) -> None:
    if len(P.terms) < 2:
        raise ValueError("polynomial must have at least two monomials")
    jmin, jmax = P.w_degree_range()
    if jmax == jmin:
        raise ValueError("polynomial has no positive degree in w")
    if len({i for i, _ in P.terms}) == 1:
        raise ValueError("polynomial does not depend on z")


def default_bbox(P: LaurentPoly2) -> Bbox:
    """[-R, R]^2 with R = 2 + max|exponent| * max|log coefficient ratio|."""
    exps = max(max(abs(i), abs(j)) for i, j in P.terms)
    logs = [math.log(abs(c)) for c in P.terms.values()]
    R = 2 + exps * (max(logs) - min(logs))
    return (-R, R, -R, R)


def thetas(steps: int) -> np.ndarray:
    """Half-step offset nodes (j + 1/2) 2 pi / steps."""
    return (np.arange(steps) + 0.5) * (2 * np.pi / steps)


def _roots(coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched roots of polynomials (highest power first) by companion
    eigenvalues.  Returns (roots, valid) where invalid rows have a vanishing
    leading coefficient."""
    deg = coeffs.shape[-1] - 1
    flat = coeffs.reshape(-1, deg + 1)
    lead = flat[:, 0]
    scale = np.abs(flat).max(axis=1)
    valid = np.abs(lead) > LEAD_TOL * np.where(scale > 0, scale, 1.0)
    safe = np.where(valid, lead, 1.0)
    monic = flat[:, 1:] / safe[:, None]
    if deg == 1:
        roots = -monic
    else:
        comp = np.zeros((flat.shape[0], deg, deg), dtype=complex)
        comp[:, 0, :] = -monic
        comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
        roots = np.linalg.eigvals(comp)
    return roots.reshape(coeffs.shape[:-1] + (deg,)), valid.reshape(coeffs.shape[:-1])


def root_log_moduli(P: LaurentPoly2, xs: np.ndarray, theta_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Sorted log|w_k| for z = exp(x + i theta); shape (len(xs), theta_steps, deg)."""
    xs = np.asarray(xs, dtype=float)
    z = np.exp(xs[:, None] + 1j * thetas(theta_steps)[None, :])
    roots, valid = _roots(P.w_coefficients(z))
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(roots))
    logs.sort(axis=-1)
    return logs, valid


def _column_intervals(logs: np.ndarray, valid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo = np.where(valid[..., None], logs, np.inf).min(axis=1)
    hi = np.where(valid[..., None], logs, -np.inf).max(axis=1)
    return lo, hi


def rasterize_amoeba(
    P: LaurentPoly2,
    bbox: Bbox | None = None,
    resolution: int | tuple[int, int] = 400,
    theta_steps: int = 360,
) -> AmoebaRaster:
    """Rasterize Log of the curve P = 0 inside ``bbox``.

    A cell is set when its centre lies in a column's root-modulus range or
    when a sampled curve point falls in it.  Columns are cell centres and
    theta runs over half-step offset nodes.
    """
    _check_curve(P)
    bbox = default_bbox(P) if bbox is None else tuple(float(v) for v in bbox)
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    xmin, xmax, ymin, ymax = bbox
    dx, dy = (xmax - xmin) / nx, (ymax - ymin) / ny
    xc = xmin + (np.arange(nx) + 0.5) * dx
    yc = ymin + (np.arange(ny) + 0.5) * dy

    mask = np.zeros((ny, nx), dtype=bool)
    core = np.zeros((ny, nx), dtype=bool)
    samples = []
    chunk = max(1, 200_000 // max(theta_steps, 1))
    for start in range(0, nx, chunk):
        cols = slice(start, min(nx, start + chunk))
        logs, valid = root_log_moduli(P, xc[cols], theta_steps)
        lo, hi = _column_intervals(logs, valid)
        inside = ((yc[None, :, None] >= lo[:, None, :]) & (yc[None, :, None] <= hi[:, None, :])).any(-1)
        core[:, cols] = inside.T
        mask[:, cols] |= inside.T
        # sample hits
        xs = np.broadcast_to(xc[cols][:, None, None], logs.shape)
        ok = np.broadcast_to(valid[..., None], logs.shape) & np.isfinite(logs)
        px, py = xs[ok], logs[ok]
        iy = np.floor((py - ymin) / dy).astype(int)
        keep = (iy >= 0) & (iy < ny)
        ix = np.floor((px - xmin) / dx).astype(int)
        mask[iy[keep], ix[keep]] = True
        samples.append(np.column_stack([px, py]))
    return AmoebaRaster(bbox, (nx, ny), mask, np.concatenate(samples), theta_steps, core)


def in_amoeba(P: LaurentPoly2, x: float, y: float, theta_steps: int = 720) -> bool:
    """Point test at exact (x, y), same slice rule as the raster."""
    _check_curve(P)
    logs, valid = root_log_moduli(P, np.array([x]), theta_steps)
    lo, hi = _column_intervals(logs, valid)
    return bool(((lo[0] <= y) & (y <= hi[0])).any())


def classify_phase(
    P: LaurentPoly2,
    B: Sequence[float],
    bbox: Bbox | None = None,
    resolution: int | tuple[int, int] = 400,
    theta_steps: int = 360,
    margin: float = 0.05,
    raster: AmoebaRaster | None = None,
) -> PhaseLabel:
    """Phase at magnetic field B: liquid inside the amoeba, gaseous in a
    bounded complement component, frozen in an unbounded one.

    Components are found by 4-connected flood fill of the raster
    complement; a component touching the bbox edge counts as unbounded.
    """
    if raster is None:
        raster = rasterize_amoeba(P, bbox, resolution, theta_steps)
    xmin, xmax, ymin, ymax = raster.bbox
    b1, b2 = B
    mx, my = margin * (xmax - xmin), margin * (ymax - ymin)
    if not (xmin + mx <= b1 <= xmax - mx and ymin + my <= b2 <= ymax - my):
        raise ValueError("B is too close to the bbox edge for a reliable phase")
    if raster.contains(b1, b2):
        return PhaseLabel.LIQUID
    labels, _ = ndimage.label(~raster.mask)
    lab = labels[raster.cell_of(b1, b2)]
    edge = np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])
    return PhaseLabel.FROZEN if lab in set(edge.tolist()) else PhaseLabel.GASEOUS


def complement_components(raster: AmoebaRaster) -> list[dict]:
    """Connected components of the complement with a deep interior point each."""
    labels, count = ndimage.label(~raster.mask)
    edge = set(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]]).tolist())
    dist = ndimage.distance_transform_edt(labels > 0)
    xmin, _, ymin, _ = raster.bbox
    dx, dy = raster.cell_size
    out = []
    for k in range(1, count + 1):
        d = np.where(labels == k, dist, 0)
        iy, ix = np.unravel_index(int(d.argmax()), d.shape)
        out.append(
            {
                "label": k,
                "bounded": k not in edge,
                "cells": int((labels == k).sum()),
                "depth": float(d[iy, ix]) * min(dx, dy),
                "point": (xmin + (ix + 0.5) * dx, ymin + (iy + 0.5) * dy),
            }
        )
    return out


# -- Ronkin function -----------------------------------------------------------


def ronkin(P: LaurentPoly2, x: float, y: float, quad_order: int = 256) -> float:
    """Torus average of log|P(e^(x+i theta), e^(y+i phi))|.

    Tensor-product periodic trapezoid rule with nodes (j + 1/2) 2 pi / N.
    """
    if quad_order < 16:
        raise ValueError("quad_order must be >= 16")
    t = thetas(quad_order)
    vals = np.zeros((quad_order, quad_order), dtype=complex)
    for (i, j), c in P.terms.items():
        vals += c * math.exp(i * x + j * y) * np.outer(np.exp(1j * i * t), np.exp(1j * j * t))
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(vals))
    if not np.all(np.isfinite(logs)):
        a, b = np.argwhere(~np.isfinite(logs))[0]
        raise FloatingPointError(
            f"log|P| not finite at node theta={t[a]:.6g}, phi={t[b]:.6g} for (x, y)=({x}, {y})"
        )
    return float(logs.mean())


def _jensen_columns(P: LaurentPoly2, x: float, ys: np.ndarray, theta_steps: int) -> np.ndarray:
    """Ronkin values at (x, ys) with the phi-integral done by Jensen's formula."""
    jmin, jmax = P.w_degree_range()
    z = np.exp(x + 1j * thetas(theta_steps))
    coeffs = P.w_coefficients(z)
    roots, valid = _roots(coeffs)
    if not valid.all():
        raise FloatingPointError(f"leading w-coefficient vanishes on |z| = e^{x}")
    with np.errstate(divide="ignore"):
        logr = np.log(np.abs(roots))  # (T, D)
        lead = np.log(np.abs(coeffs[:, 0]))
    ys = np.asarray(ys, dtype=float)
    tail = np.maximum(ys[:, None, None], logr[None, :, :]).sum(-1)  # (ny, T)
    return (jmin * ys[:, None] + lead[None, :] + tail).mean(axis=1)


def ronkin_jensen(P: LaurentPoly2, x: float, y: float, theta_steps: int = 1024) -> float:
    """Independent route to the Ronkin function: exact inner integral over
    the w-circle via root moduli, trapezoid rule over the z-circle."""
    return float(_jensen_columns(P, x, np.array([y]), theta_steps)[0])


def facet_gradient(
    P: LaurentPoly2,
    point: Sequence[float],
    h: float = 0.25,
    quad_order: int = 256,
    tol: float = 0.05,
) -> tuple[int, int]:
    """Integer slope of the Ronkin function on a complement component.

    Central differences with step ``h``; the residual from rounding must be
    below ``tol`` and the slope must be a lattice point of the Newton
    polygon, otherwise :class:`NotInFacet` is raised.
    """
    x, y = point
    gx = (ronkin(P, x + h, y, quad_order) - ronkin(P, x - h, y, quad_order)) / (2 * h)
    gy = (ronkin(P, x, y + h, quad_order) - ronkin(P, x, y - h, quad_order)) / (2 * h)
    rx, ry = round(gx), round(gy)
    residual = max(abs(gx - rx), abs(gy - ry))
    if residual > tol:
        raise NotInFacet(f"gradient ({gx:.4f}, {gy:.4f}) is not in a facet (residual {residual:.3g})")
    if not newton_polygon(P).contains((rx, ry)):
        raise NotInFacet(f"slope ({rx}, {ry}) lies outside the Newton polygon")
    return int(rx), int(ry)


# -- Newton polygon ------------------------------------------------------------


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, int], ...]  # counter-clockwise

    @property
    def area(self) -> Fraction:
        v = self.vertices
        if len(v) < 3:
            return Fraction(0)
        twice = sum(v[k][0] * v[(k + 1) % len(v)][1] - v[(k + 1) % len(v)][0] * v[k][1] for k in range(len(v)))
        return Fraction(abs(twice), 2)

    def contains(self, p: Sequence[int]) -> bool:
        v = self.vertices
        if len(v) == 1:
            return tuple(p) == v[0]
        if len(v) == 2:
            a, b = v
            return _cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
        return all(_cross(v[k], v[(k + 1) % len(v)], p) >= 0 for k in range(len(v)))


def newton_polygon(P: LaurentPoly2) -> NewtonPolygon:
    """Convex hull of the exponents (monotone chain, exact integers)."""
    pts = sorted(set(P.terms))
    if not pts:
        raise ValueError("zero polynomial has no Newton polygon")
    if len(pts) <= 2:
        return NewtonPolygon(tuple(pts))
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 or all(_cross(hull[0], hull[1], q) == 0 for q in hull):
        return NewtonPolygon((pts[0], pts[-1]))
    return NewtonPolygon(tuple(hull))


def harnack_area_test(
    P: LaurentPoly2,
    bbox: Bbox | None = None,
    resolution: int | tuple[int, int] = 600,
    theta_steps: int = 720,
) -> dict:
    """Amoeba area (mask-cell count) against pi^2 times the Newton polygon area.

    Harnack curves give ratio close to 1.  The error is of order
    perimeter * cell size plus the tentacle area cut off by the bbox.
    """
    raster = rasterize_amoeba(P, bbox, resolution, theta_steps)
    npoly = newton_polygon(P)
    newton_area = float(npoly.area)
    target = math.pi**2 * newton_area
    degenerate = npoly.area == 0
    return {
        "amoeba_area": raster.area,
        "newton_area": newton_area,
        "pi2_newton_area": target,
        "ratio": 0.0 if degenerate else raster.area / target,
        "degenerate": degenerate,
        "bbox": list(raster.bbox),
        "resolution": list(raster.resolution),
        "theta_steps": theta_steps,
        "normalization_note": PI2_NOTE,
    }


def limit_shape_surface(
    P: LaurentPoly2,
    bbox: Bbox | None = None,
    resolution: int | tuple[int, int] = 100,
    quad_order: int = 256,
) -> np.ndarray:
    """Rows (x, y, -R(x, y)) over cell centres, row-major in y then x.

    Each column shares one sweep over the z-circle; the w-circle average is
    exact (Jensen), so the result agrees with :func:`ronkin` to quadrature
    accuracy.
    """
    if quad_order < 16:
        raise ValueError("quad_order must be >= 16")
    _check_curve(P)
    bbox = default_bbox(P) if bbox is None else bbox
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    xmin, xmax, ymin, ymax = bbox
    xc = xmin + (np.arange(nx) + 0.5) * (xmax - xmin) / nx
    yc = ymin + (np.arange(ny) + 0.5) * (ymax - ymin) / ny
    R = np.empty((ny, nx))
    for ix, x in enumerate(xc):
        R[:, ix] = _jensen_columns(P, x, yc, quad_order)
    X, Y = np.meshgrid(xc, yc)
    return np.column_stack([X.ravel(), Y.ravel(), -R.ravel()])


def surface_to_csv(surface: np.ndarray) -> str:
    lines = ["x,y,height"]
    lines += [f"{x:.10g},{y:.10g},{h:.10g}" for x, y, h in surface]
    return "\n".join(lines) + "\n"
