"""Tropical polynomials, tropical hypersurfaces and the direction graph.

A tropical polynomial is max_i (<f_i, x> + b_i).  Its hypersurface is the
set where the maximum is attained at least twice.  For the symmetric family
max(+-x_1, ..., +-x_d, 0) the hypersurface is assembled from the cones C_S
of :mod:`polytope`; ``direction_graph`` builds the same object from scratch
as the codimension >= 1 skeleton of the normal fan of the cross-polytope,
so the two constructions can be compared.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.optimize import linprog, nnls

from ._validation import as_point_array, check_int, check_real
from .errors import ConfigError, UnsupportedDimensionError
from .polytope import (
    cone_CS,
    direction_polytope,
    newton_polytope,
    perpendicularity_check,
    valid_signed_sets,
)

__all__ = [
    "TropicalPolynomial",
    "PolyhedralComplex",
    "DualityReport",
    "tropicalize",
    "trop_member",
    "trop_hypersurface",
    "direction_graph",
    "duality_check",
    "TIE_TOL",
]

TIE_TOL = 1e-9
GEOM_TOL = 1e-9


class TropicalPolynomial:
    """max over terms of <form, x> + offset.

    Parameters
    ----------
    d : int
        Number of variables.
    terms : iterable of (form, offset)
        Integer forms of length d and rational offsets.  Repeated
        (form, offset) pairs are merged.
    """

    def __init__(self, d, terms):
        self.d = check_int(d, "d", minimum=1)
        seen = set()
        for form, offset in terms:
            form = tuple(int(c) for c in np.atleast_1d(form))
            if len(form) != self.d:
                raise ConfigError(f"form {form} has length {len(form)}, expected {self.d}")
            seen.add((form, Fraction(offset)))
        if not seen:
            raise ConfigError("a tropical polynomial needs at least one term")
        self.terms = sorted(seen)
        self._forms = np.array([f for f, _ in self.terms], dtype=float).reshape(-1, self.d)
        self._offsets = np.array([float(b) for _, b in self.terms])

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        body = ", ".join(f"{list(f)}.x{'+' if b >= 0 else ''}{b}" for f, b in self.terms)
        return f"TropicalPolynomial(max({body}))"

    def __eq__(self, other):
        if not isinstance(other, TropicalPolynomial):
            return NotImplemented
        return self.d == other.d and self.terms == other.terms

    def term_values(self, x):
        """Values of every term at points x, shape (n, n_terms)."""
        x = as_point_array(x, self.d)
        return x @ self._forms.T + self._offsets

    def __call__(self, x):
        return self.term_values(x).max(axis=1)

    def reduced(self):
        """Drop terms that never exceed the maximum of the others.

        A term is redundant when its lifted point (form, offset) lies on or
        below the upper hull of the other lifted points, which is a small
        linear program.  The result is equal to ``self`` as a function.
        """
        keep = list(self.terms)
        i = 0
        while i < len(keep):
            others = keep[:i] + keep[i + 1:]
            if others and _dominated(*keep[i], others):
                del keep[i]
            else:
                i += 1
        return TropicalPolynomial(self.d, keep)

    def to_json(self):
        return {"d": self.d, "terms": [{"form": list(f), "offset": str(b)} for f, b in self.terms]}


def _dominated(form, offset, others):
    """True if some convex combination of others has the same form and offset >= offset."""
    A = np.array([f for f, _ in others], dtype=float).T
    b = np.array([float(o) for _, o in others])
    m = len(others)
    A_eq = np.vstack([A, np.ones((1, m))])
    b_eq = np.append(np.array(form, dtype=float), 1.0)
    res = linprog(-b, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * m, method="highs")
    return bool(res.status == 0 and -res.fun >= float(offset) - 1e-12)


def tropicalize(P):
    """One term per monomial: form = exponent, offset = -valuation."""
    return TropicalPolynomial(P.k, [(e, -c.valuation) for e, c in P.terms.items()])


def trop_member(T, x, tol=TIE_TOL):
    """True where the two largest term values differ by less than ``tol``.

    Accepts a single point (returns bool) or an (n, d) array.
    """
    tol = check_real(tol, "tol")
    if tol <= 0:
        raise ConfigError("tol must be positive")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 0 or (x.ndim == 1 and x.shape[0] == T.d)
    vals = T.term_values(x)
    if vals.shape[1] < 2:
        out = np.zeros(vals.shape[0], dtype=bool)
    else:
        top2 = -np.partition(-vals, 1, axis=1)[:, :2]
        out = (top2[:, 0] - top2[:, 1]) < tol
    return bool(out[0]) if single else out


def _canon(v):
    """Scale a direction to unit length and round for set comparison."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    return tuple(np.round(v / n, 12) + 0.0) if n > 0 else tuple(np.zeros_like(v))


def _canon_point(p):
    return tuple(np.round(np.asarray(p, dtype=float), 12) + 0.0)


@dataclass(frozen=True, eq=False)
class PolyhedralComplex:
    """Cells conv(vertices) + cone(rays) in R^d.

    ``cells`` holds pairs (vertex indices, ray indices).
    """

    d: int
    vertices: np.ndarray
    rays: np.ndarray
    cells: tuple = field(default=())

    def ray_set(self):
        return frozenset(_canon(r) for r in self.rays)

    def vertex_set(self):
        return frozenset(_canon_point(v) for v in self.vertices)

    def cell_set(self):
        return frozenset(
            (frozenset(_canon_point(self.vertices[i]) for i in vi), frozenset(_canon(self.rays[j]) for j in rj))
            for vi, rj in self.cells
        )

    def __eq__(self, other):
        if not isinstance(other, PolyhedralComplex):
            return NotImplemented
        return self.d == other.d and self.vertex_set() == other.vertex_set() and self.cell_set() == other.cell_set()

    def maximal_cells(self):
        """Cells not contained in another cell (by generator inclusion)."""
        sets = [(frozenset(v), frozenset(r)) for v, r in self.cells]
        out = []
        for i, (v, r) in enumerate(sets):
            if not any(j != i and v <= v2 and r <= r2 and (v, r) != (v2, r2) for j, (v2, r2) in enumerate(sets)):
                out.append(self.cells[i])
        return out

    def contains(self, x, tol=GEOM_TOL):
        """Whether points lie within ``tol`` of some cell (non-negative least squares)."""
        x = as_point_array(x, self.d)
        out = np.zeros(x.shape[0], dtype=bool)
        for vi, rj in self.maximal_cells():
            V = self.vertices[list(vi)].reshape(-1, self.d)
            R = self.rays[list(rj)].reshape(-1, self.d)
            # columns: vertices (weights summing to 1) then rays
            A = np.vstack([np.hstack([V.T, R.T]), np.append(np.ones(len(V)), np.zeros(len(R)))])
            for i in np.flatnonzero(~out):
                _, resid = nnls(A, np.append(x[i], 1.0))
                if resid < tol:
                    out[i] = True
        return out

    def to_json(self):
        return {
            "d": self.d,
            "vertices": self.vertices.tolist(),
            "rays": self.rays.tolist(),
            "cones": [{"vertices": list(map(int, v)), "rays": list(map(int, r))} for v, r in self.cells],
        }


def _build_complex(d, cells):
    """Assemble a complex from cells given as (list of points, list of rays)."""
    vkeys, rkeys, verts, rays, out = {}, {}, [], [], []
    for pts, drs in cells:
        vi, ri = [], []
        for p in pts:
            key = _canon_point(p)
            if key not in vkeys:
                vkeys[key] = len(verts)
                verts.append(np.asarray(p, dtype=float) + 0.0)
            vi.append(vkeys[key])
        for r in drs:
            key = _canon(r)
            if key not in rkeys:
                rkeys[key] = len(rays)
                rays.append(np.asarray(r, dtype=float) + 0.0)
            ri.append(rkeys[key])
        cell = (tuple(sorted(set(vi))), tuple(sorted(set(ri))))
        if cell not in out:
            out.append(cell)
    return PolyhedralComplex(
        d,
        np.array(verts, dtype=float).reshape(-1, d),
        np.array(rays, dtype=float).reshape(-1, d),
        tuple(sorted(out)),
    )


def _is_symmetric_family(T):
    """Forms are exactly {+-e_j} (optionally with 0) and all offsets agree."""
    forms = {f for f, _ in T.terms}
    offsets = {b for _, b in T.terms}
    eye = np.eye(T.d, dtype=int)
    target = {tuple(s * eye[j]) for j in range(T.d) for s in (1, -1)}
    return len(offsets) == 1 and forms - {(0,) * T.d} == target


def _fan_complex(d):
    """Hypersurface of max(+-x_j) from the cones C_S with #S >= 2."""
    cells = [([np.zeros(d)], [])]
    for S in valid_signed_sets(d, min_size=2):
        cells.append(([np.zeros(d)], list(cone_CS(S, d).rays)))
    return _build_complex(d, cells)


def _tie_cells_2d(T):
    """Edges and vertices of a plane tropical curve from pairwise tie sets."""
    F, B = T._forms, T._offsets
    cells = []
    n = len(T)
    for i, j in combinations(range(n), 2):
        df = F[i] - F[j]
        if not df.any():
            continue
        # line {df . x = B[j] - B[i]}: base point and direction
        c = B[j] - B[i]
        p0 = df * c / df.dot(df)
        direc = np.array([-df[1], df[0]])
        lo, hi = -np.inf, np.inf
        empty = False
        for k in range(n):
            if k in (i, j):
                continue
            # term i >= term k along p0 + t direc
            a = (F[i] - F[k]).dot(direc)
            b = (F[i] - F[k]).dot(p0) + B[i] - B[k]
            if abs(a) < 1e-15:
                if b < -GEOM_TOL:
                    empty = True
                    break
            elif a > 0:
                lo = max(lo, -b / a)
            else:
                hi = min(hi, -b / a)
        if empty or lo > hi + GEOM_TOL:
            continue
        if np.isfinite(lo) and np.isfinite(hi):
            pts = [p0 + lo * direc, p0 + hi * direc]
            cells.append((pts if hi - lo > GEOM_TOL else pts[:1], []))
        elif np.isfinite(lo):
            cells.append(([p0 + lo * direc], [direc]))
        elif np.isfinite(hi):
            cells.append(([p0 + hi * direc], [-direc]))
        else:
            cells.append(([p0], [direc, -direc]))
    return cells


def _tie_points_1d(T):
    cells = []
    F, B = T._forms[:, 0], T._offsets
    for i, j in combinations(range(len(T)), 2):
        if F[i] == F[j]:
            continue
        x = (B[j] - B[i]) / (F[i] - F[j])
        vals = F * x + B
        if vals.max() - max(vals[i], vals[j]) < GEOM_TOL and abs(vals[i] - vals[j]) < GEOM_TOL:
            cells.append(([np.array([x])], []))
    return cells


def trop_hypersurface(T):
    """The tropical hypersurface of T as a polyhedral complex.

    The symmetric family max(+-x_j) uses the C_S cones in any d <= 3;
    otherwise d must be 1 or 2 and the cells come from pairwise tie sets.
    """
    if _is_symmetric_family(T):
        if T.d > 3:
            raise UnsupportedDimensionError("C_S construction is provided for d <= 3")
        return _fan_complex(T.d)
    if T.d == 1:
        return _build_complex(1, _tie_points_1d(T))
    if T.d == 2:
        cells = _tie_cells_2d(T)
        # isolated tie points that are vertices of an edge add nothing
        is_edge = [len(pts) > 1 or len(drs) > 0 for pts, drs in cells]
        edges = [c for c, e in zip(cells, is_edge) if e]
        ends = {_canon_point(p) for pts, _ in edges for p in pts}
        points = [c for c, e in zip(cells, is_edge) if not e and _canon_point(c[0][0]) not in ends]
        cells = edges + points
        return _build_complex(2, cells)
    raise UnsupportedDimensionError(f"generic tropical hypersurfaces are supported for d <= 2, got {T.d}")


def _cone_rays_from_hrep(A_eq, A_ub, d):
    """Extreme rays of {x : A_eq x = 0, A_ub x <= 0} for d <= 3."""
    rows = [r for r in A_ub]
    base = list(A_eq)
    rays = []
    need = d - 1 - len(base)
    for extra in combinations(range(len(rows)), max(need, 0)):
        M = np.array(base + [rows[i] for i in extra], dtype=float).reshape(-1, d)
        if M.shape[0] and np.linalg.matrix_rank(M) != d - 1:
            continue
        _, _, vt = np.linalg.svd(M if M.shape[0] else np.zeros((1, d)))
        v = vt[-1]
        for cand in (v, -v):
            if (A_eq.size == 0 or np.all(np.abs(A_eq @ cand) < 1e-12)) and np.all(A_ub @ cand <= 1e-12):
                key = _canon(cand)
                if key not in {_canon(r) for r in rays}:
                    rays.append(cand / np.abs(cand).max())
    return rays


def direction_graph(d):
    """Codimension >= 1 skeleton of the normal fan of the cross-polytope.

    Every subset V of vertices is tested as a face: its normal cone
    {x : <v - v0, x> = 0 on V, <w - v0, x> <= 0 for all vertices w} is built
    from the H-description, and V is a face exactly when a relative-interior
    point of that cone makes precisely V tight.  Faces of dimension >= 1
    contribute their normal cones.
    """
    d = check_int(d, "d", minimum=1)
    if d > 3:
        raise UnsupportedDimensionError("direction_graph is provided for d <= 3")
    verts = direction_polytope(d).vertices.astype(float)
    cells = [([np.zeros(d)], [])]
    for size in range(2, len(verts) + 1):
        for V in combinations(range(len(verts)), size):
            v0 = verts[V[0]]
            A_eq = np.array([verts[i] - v0 for i in V[1:]])
            if np.linalg.matrix_rank(A_eq) == d:
                continue
            A_ub = np.array([w - v0 for w in verts])
            rays = _cone_rays_from_hrep(A_eq, A_ub, d)
            if not rays:
                continue
            interior = np.sum(rays, axis=0)
            support = verts @ interior
            tight = set(np.flatnonzero(np.abs(support - support.max()) < 1e-9))
            if tight == set(V):
                cells.append(([np.zeros(d)], rays))
    return _build_complex(d, cells)


@dataclass(frozen=True)
class DualityReport:
    d: int
    newton_equals_direction: object
    cone_points: int
    cone_failures: int
    sample_points: int
    mismatches: int
    graph_matches: object
    perpendicular: object
    max_inner_product: float

    @property
    def passed(self):
        flags = [self.newton_equals_direction, self.graph_matches, self.perpendicular]
        return self.cone_failures == 0 and self.mismatches == 0 and all(f is not False for f in flags)


def _cell_samples(cx, rng, per_cell):
    pts = []
    for vi, rj in cx.maximal_cells():
        V = cx.vertices[list(vi)]
        R = cx.rays[list(rj)]
        lam = rng.dirichlet(np.ones(len(V)), per_cell)
        mu = rng.uniform(0, 3, (per_cell, len(R))) if len(R) else np.zeros((per_cell, 0))
        pts.append(lam @ V + mu @ R.reshape(-1, cx.d))
    return np.vstack(pts) if pts else np.zeros((0, cx.d))


def duality_check(P, samples=10_000, seed=0, tol=TIE_TOL, box=3.0):
    """Check the Newton polytope / tropical hypersurface / direction graph chain.

    (a) random points of every cell pass ``trop_member``; (b) on a grid of
    ``samples`` points (symmetric, so exact ties occur) plus random points,
    cell membership and ``trop_member`` agree; (c) for the symmetric family
    the complex equals ``direction_graph(d)``, the Newton polytope equals
    the cross-polytope and every cone is perpendicular to its face.
    """
    T = tropicalize(P)
    cx = trop_hypersurface(T)
    rng = np.random.default_rng(seed)
    on_cells = _cell_samples(cx, rng, 50)
    cone_failures = int(np.sum(~trop_member(T, on_cells, tol))) if len(on_cells) else 0

    side = max(int(round(samples ** (1.0 / T.d))), 2)
    axis = np.linspace(-box, box, side)
    grid = np.stack(np.meshgrid(*([axis] * T.d), indexing="ij"), axis=-1).reshape(-1, T.d)
    pts = np.vstack([grid, on_cells])
    mismatches = int(np.sum(cx.contains(pts, tol) != trop_member(T, pts, tol)))

    family = _is_symmetric_family(T) and T.d <= 3
    ne = newton_polytope(P) == direction_polytope(T.d) if family else None
    gm = cx == direction_graph(T.d) if family else None
    perp, worst = None, 0.0
    if family:
        perp = True
        for S in valid_signed_sets(T.d):
            ok, w = perpendicularity_check(S, T.d, return_max=True)
            perp = perp and ok
            worst = max(worst, w)
    return DualityReport(T.d, ne, len(on_cells), cone_failures, len(pts), mismatches, gm, perp, worst)
