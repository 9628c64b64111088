"""Amoebas of Laurent polynomials that are quadratic in their last variable.

For fixed values of the other variables, P = 0 is a quadratic in the last
variable z after clearing 1/z, so every slice of the amoeba is exact: the
points are (x_prefix, log|root|).  In the plane the amoeba is rasterised
column by column from these slices, and the complement components are
labelled and matched with Ronkin gradients.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from ._validation import as_point_array, check_int
from .errors import ConfigError, UnsupportedDimensionError
from .polytope import newton_polytope
from .quadrature import QuadratureSpec
from .ronkin import _roots, ronkin_gradient

__all__ = [
    "AmoebaSlice",
    "AmoebaComponent",
    "AmoebaRaster",
    "AmoebaResolutionWarning",
    "amoeba_slice",
    "amoeba_complement_components",
]

LEAD_TOL = 1e-14
THETA_SAMPLES = 512


class AmoebaResolutionWarning(UserWarning):
    """The raster may be too coarse to separate the complement components."""


@dataclass(frozen=True)
class AmoebaSlice:
    """Amoeba points of shape (m, k) plus the number of skipped samples."""

    points: np.ndarray
    skipped: int


def _check_quadratic(P):
    lo, hi = P.last_variable_span()
    if (lo, hi) != (-1, 1):
        raise ConfigError(f"last-variable degree span must be (-1, 1), got ({lo}, {hi})")


def _slice_roots(P, w_prefix):
    """Roots in the last variable, sorted by modulus; NaN where the lead vanishes."""
    _, C = P.last_variable_coefficients(w_prefix)
    scale = np.abs(C).max(axis=1)
    # ascending coefficients of z^-1, z^0, z^1; times z gives c + b z + a z^2
    good = np.abs(C[:, 2]) > LEAD_TOL * np.maximum(scale, 1e-300)
    roots = np.full((C.shape[0], 2), np.nan + 0j)
    if np.any(good):
        r = _roots(C[good])
        order = np.argsort(np.abs(r), axis=1)
        roots[good] = np.take_along_axis(r, order, axis=1)
    return roots, good


def amoeba_slice(P, x_prefix=None, theta_prefix=None):
    """Amoeba points over a grid of (x_prefix, theta_prefix) values.

    Parameters
    ----------
    P : LaurentPolynomial
        k <= 2, with last-variable exponents exactly {-1, 0, 1}.
    x_prefix, theta_prefix : array_like
        Radii (log scale) and angles of the first variable when k == 2;
        every combination is used.  Ignored for k == 1.

    Returns
    -------
    AmoebaSlice
        Points (x_prefix, log|root|) for every nonzero root; samples whose
        leading coefficient vanishes are skipped and counted.
    """
    if P.k > 2:
        raise UnsupportedDimensionError("amoeba slices are provided for k <= 2")
    _check_quadratic(P)
    if P.k == 1:
        roots, good = _slice_roots(P, np.zeros((1, 0)))
        prefix = np.zeros((1, 0))
    else:
        xs = np.atleast_1d(np.asarray(x_prefix, dtype=float))
        ts = np.atleast_1d(np.asarray(theta_prefix, dtype=float))
        X, TH = np.meshgrid(xs, ts, indexing="ij")
        prefix = X.reshape(-1, 1)
        roots, good = _slice_roots(P, (X + 1j * TH).reshape(-1, 1))
    pts = []
    for j in range(2):
        r = roots[good, j]
        nz = r != 0
        pts.append(np.column_stack([prefix[good][nz], np.log(np.abs(r[nz]))]))
    return AmoebaSlice(np.vstack(pts), int(np.sum(~good)))


@dataclass(frozen=True)
class AmoebaComponent:
    label: int
    cells: int
    bounded: bool
    representative: np.ndarray
    gradient: np.ndarray
    depth: float


@dataclass(frozen=True, eq=False)
class AmoebaRaster:
    """Rasterised amoeba of a plane curve and its complement components.

    ``membership[i, j]`` is True when cell (i, j) meets the (dilated)
    amoeba; ``labels`` numbers the 4-connected complement components from 1.
    Cell (i, j) is centred at (xs[i], ys[j]).
    """

    box: tuple
    resolution: int
    xs: np.ndarray
    ys: np.ndarray
    membership: np.ndarray
    labels: np.ndarray
    components: list
    fpt_bounds: tuple
    skipped: int = 0
    warning: str = field(default="")

    @property
    def count(self):
        return len(self.components)

    def component_at(self, point):
        i = int(np.clip(np.searchsorted(self.xs, point[0]), 0, self.resolution - 1))
        j = int(np.clip(np.searchsorted(self.ys, point[1]), 0, self.resolution - 1))
        # searchsorted finds the right neighbour; use the nearest centre
        i = min((i, max(i - 1, 0)), key=lambda a: abs(self.xs[a] - point[0]))
        j = min((j, max(j - 1, 0)), key=lambda b: abs(self.ys[b] - point[1]))
        lab = int(self.labels[i, j])
        return next((c for c in self.components if c.label == lab), None)

    def report(self):
        return {
            "box": [list(b) for b in self.box],
            "resolution": self.resolution,
            "components": self.count,
            "fpt_bounds": list(self.fpt_bounds),
            "skipped_samples": self.skipped,
            "warning": self.warning,
            "details": [
                {
                    "label": c.label,
                    "cells": c.cells,
                    "bounded": c.bounded,
                    "representative": c.representative.tolist(),
                    "gradient": c.gradient.tolist(),
                }
                for c in self.components
            ],
        }

    def to_pgm(self):
        """Plain PGM (P2): amoeba 0, complement components shaded by label."""
        img = np.where(self.membership, 0, 64 + (191 * self.labels) // max(self.count, 1))
        # rows of the image run top (max y) to bottom
        rows = img.T[::-1]
        lines = ["P2", f"{self.resolution} {self.resolution}", "255"]
        lines += [" ".join(str(int(v)) for v in row) for row in rows]
        return "\n".join(lines) + "\n"

    def to_json(self):
        out = self.report()
        out["membership"] = self.membership.T[::-1].astype(int).tolist()
        return out


def _parse_box(box):
    b = np.asarray(box, dtype=float)
    if b.shape == (2,):
        b = np.array([b, b])
    if b.shape != (2, 2) or np.any(b[:, 1] <= b[:, 0]):
        raise ConfigError(f"box must be (lo, hi) or ((x_lo, x_hi), (y_lo, y_hi)) with lo < hi, got {box!r}")
    return tuple(tuple(float(v) for v in r) for r in b)


def _rasterise(P, box, n, n_theta):
    (x0, x1), (y0, y1) = box
    hx, hy = (x1 - x0) / n, (y1 - y0) / n
    xs = x0 + hx * (np.arange(n) + 0.5)
    ys = y0 + hy * (np.arange(n) + 0.5)
    theta = 2 * math.pi * np.arange(n_theta) / n_theta
    member = np.zeros((n, n), dtype=bool)
    skipped = 0
    for i, x in enumerate(xs):
        roots, good = _slice_roots(P, (x + 1j * theta)[:, None])
        skipped += int(np.sum(~good))
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.log(np.abs(roots))
        for branch in logs.T:
            b = branch[np.isfinite(branch)]
            if b.size == 0:
                continue
            # a branch over the circle of angles is continuous, so its image is an interval
            lo = int(np.floor((b.min() - y0) / hy))
            hi = int(np.floor((b.max() - y0) / hy))
            if hi < 0 or lo >= n:
                continue
            member[i, max(lo, 0): min(hi, n - 1) + 1] = True
    member = ndimage.binary_dilation(member, structure=np.ones((3, 3), dtype=bool))
    return xs, ys, member, skipped


def amoeba_complement_components(P, box=(-3.0, 3.0), resolution=600, gradients=True, quad=None, n_theta=THETA_SAMPLES):
    """Rasterise the amoeba of a plane curve and label its complement.

    Each complement component gets a representative (the cell deepest
    inside it) and, if ``gradients``, the numerical Ronkin gradient there.
    The Newton-polytope bounds (#vertices <= count <= #lattice points) are
    attached; an :class:`AmoebaResolutionWarning` is issued when the count
    falls outside them or a component is only a few cells thick.
    """
    if P.k != 2:
        raise UnsupportedDimensionError("amoeba rasters are provided for k = 2")
    n = check_int(resolution, "resolution", minimum=8)
    box = _parse_box(box)
    quad = quad or QuadratureSpec()
    if len(P) == 1:
        # a monomial never vanishes on the torus: the amoeba is empty
        (x0, x1), (y0, y1) = box
        xs = x0 + (x1 - x0) / n * (np.arange(n) + 0.5)
        ys = y0 + (y1 - y0) / n * (np.arange(n) + 0.5)
        member, skipped = np.zeros((n, n), dtype=bool), 0
    else:
        _check_quadratic(P)
        xs, ys, member, skipped = _rasterise(P, box, n, n_theta)

    labels, count = ndimage.label(~member)
    depth = ndimage.distance_transform_edt(~member)
    edge = np.zeros_like(member)
    edge[0, :] = edge[-1, :] = edge[:, 0] = edge[:, -1] = True
    comps = []
    for lab in range(1, count + 1):
        mask = labels == lab
        flat = np.argmax(np.where(mask, depth, -1.0))
        i, j = np.unravel_index(flat, mask.shape)
        rep = np.array([xs[i], ys[j]])
        grad = ronkin_gradient(P, rep, quad=quad) if gradients else np.full(2, np.nan)
        comps.append(AmoebaComponent(lab, int(mask.sum()), not bool(np.any(mask & edge)), rep, grad, float(depth[i, j])))

    npoly = newton_polytope(P)
    bounds = (len(npoly.vertices), len(npoly.lattice_points))
    notes = []
    if not bounds[0] <= count <= bounds[1]:
        notes.append(f"component count {count} outside the Newton-polytope bounds {bounds}")
    thin = [c.label for c in comps if c.depth < 2.0]
    if thin:
        notes.append(f"components {thin} are under two cells thick; refine the raster or enlarge the box")
    warning = "; ".join(notes)
    if warning:
        warnings.warn(warning, AmoebaResolutionWarning, stacklevel=2)
    return AmoebaRaster(box, n, xs, ys, member, labels, comps, bounds, skipped, warning)
