"""Lattice polytopes: Newton polytopes, the cross-polytope and its faces.

Hulls are computed exactly in integer arithmetic for affine rank <= 3
(monotone chain in the plane, facet enumeration in space).  Lower-rank
supports are projected onto coordinates that keep the rank, which maps
extreme points to extreme points.  Cross-polytope supports are recognised
in any dimension.
"""

from dataclasses import dataclass
from itertools import combinations, product
from math import gcd

import numpy as np

from ._validation import check_int
from .errors import InvalidSetError, UnsupportedDimensionError

__all__ = [
    "LatticePolytope",
    "PolyhedralCone",
    "newton_polytope",
    "direction_polytope",
    "parse_signed_set",
    "valid_signed_sets",
    "cone_CS",
    "face_FS",
    "perpendicularity_check",
]

MAX_HULL_RANK = 3
PERP_TOL = 1e-12


def _rank(vectors):
    vectors = np.asarray(vectors, dtype=float)
    if vectors.size == 0:
        return 0
    return int(np.linalg.matrix_rank(vectors))


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2(points):
    """Vertices of a planar integer point set in counter-clockwise order."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _primitive(v):
    g = 0
    for c in v:
        g = gcd(g, abs(int(c)))
    return tuple(int(c) // g for c in v) if g else tuple(int(c) for c in v)


def _facets3(points):
    """Facet planes (n, b) with n.x <= b of a full-rank 3D integer point set."""
    arr = np.array(points, dtype=np.int64)
    normals = set()
    for i, j, l in combinations(range(len(points)), 3):
        n = np.cross(arr[j] - arr[i], arr[l] - arr[i])
        if not n.any():
            continue
        vals = arr @ n
        if vals.max() <= vals[i]:
            normals.add(_primitive(n))
        elif vals.min() >= vals[i]:
            normals.add(_primitive(-n))
    return sorted((n, int((arr @ np.array(n)).max())) for n in normals)


def _hull3(points):
    facets = _facets3(points)
    arr = np.array(points, dtype=np.int64)
    verts = set()
    for n, b in facets:
        on = arr[arr @ np.array(n) == b]
        # drop a coordinate with nonzero normal component: injective on the plane
        keep = [c for c in range(3) if c != int(np.flatnonzero(n)[0])]
        proj = {tuple(p[keep]): tuple(p) for p in on}
        for q in _hull2(list(proj)):
            verts.add(proj[q])
    return sorted(verts), facets


class _Hull:
    """Exact hull of an integer point set with affine rank <= 3."""

    def __init__(self, points):
        self.points = sorted(set(tuple(int(c) for c in p) for p in points))
        arr = np.array(self.points, dtype=np.int64)
        self.origin = arr[0]
        diffs = arr - self.origin
        self.rank = _rank(diffs)
        self.diffs = diffs
        if self.rank > MAX_HULL_RANK:
            raise UnsupportedDimensionError(f"hull of affine rank {self.rank} > {MAX_HULL_RANK}")
        self.coords = self._choose_coords(diffs)
        proj = [tuple(p[self.coords]) for p in arr]
        lookup = {}
        for q, p in zip(proj, self.points):
            lookup.setdefault(q, p)
        self.facets = []
        if self.rank == 0:
            pv = [proj[0]]
        elif self.rank == 1:
            pv = [min(proj), max(proj)]
        elif self.rank == 2:
            pv = _hull2(proj)
            for a, b in zip(pv, pv[1:] + pv[:1]):
                n = (b[1] - a[1], a[0] - b[0])
                self.facets.append((n, n[0] * a[0] + n[1] * a[1]))
        else:
            pv, self.facets = _hull3(proj)
        self.vertices = sorted(lookup[q] for q in pv)
        self._lo = min(proj) if self.rank == 1 else None
        self._hi = max(proj) if self.rank == 1 else None

    def _choose_coords(self, diffs):
        d = diffs.shape[1]
        for cols in combinations(range(d), self.rank):
            if _rank(diffs[:, cols]) == self.rank:
                return list(cols)
        return []

    def contains(self, p):
        p = np.asarray(p, dtype=np.int64)
        if self.rank == 0:
            return bool(np.array_equal(p, self.origin))
        if _rank(np.vstack([self.diffs, p - self.origin])) != self.rank:
            return False
        q = tuple(p[self.coords])
        if self.rank == 1:
            return self._lo <= q <= self._hi
        return all(np.dot(n, q) <= b for n, b in self.facets)


@dataclass(frozen=True, eq=False)
class LatticePolytope:
    """Convex hull of integer points.

    Parameters
    ----------
    d : int
        Ambient dimension.
    vertices : ndarray of int, shape (m, d)
        Extreme points, sorted lexicographically.
    lattice_points : ndarray of int, shape (p, d)
        All integer points of the closed hull, sorted lexicographically.
    """

    d: int
    vertices: np.ndarray
    lattice_points: np.ndarray

    @classmethod
    def from_points(cls, points, d=None):
        pts = np.asarray(points, dtype=np.int64)
        if d is None:
            d = pts.shape[1]
        pts = pts.reshape(-1, d)
        cross = _cross_polytope_dim(pts)
        if cross is not None:
            return direction_polytope(cross)
        hull = _Hull(pts)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        # bounding-box scan; hulls here are small
        lattice = [p for p in product(*(range(a, b + 1) for a, b in zip(lo, hi))) if hull.contains(p)]
        return cls(d, np.array(hull.vertices, dtype=np.int64).reshape(-1, d), np.array(sorted(lattice), dtype=np.int64).reshape(-1, d))

    def vertex_set(self):
        return frozenset(tuple(int(c) for c in v) for v in self.vertices)

    def lattice_set(self):
        return frozenset(tuple(int(c) for c in v) for v in self.lattice_points)

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.d == other.d and self.vertex_set() == other.vertex_set()

    def __hash__(self):
        return hash((self.d, self.vertex_set()))

    def to_json(self):
        return {
            "d": self.d,
            "vertices": self.vertices.tolist(),
            "lattice_points": self.lattice_points.tolist(),
        }


def _cross_polytope_dim(pts):
    """d if the points are exactly {+-e_j} (optionally with 0), else None."""
    d = pts.shape[1]
    if d <= MAX_HULL_RANK:
        return None
    target = {tuple(s * np.eye(d, dtype=int)[j]) for j in range(d) for s in (1, -1)}
    have = {tuple(int(c) for c in p) for p in pts}
    have.discard((0,) * d)
    return d if have == target else None


def newton_polytope(P):
    """Convex hull of the exponent vectors of a Laurent polynomial.

    Supports of affine rank <= 3 are handled in any ambient dimension, as are
    cross-polytope supports; anything else raises
    :class:`UnsupportedDimensionError`.
    """
    if P.is_zero():
        raise UnsupportedDimensionError("the zero polynomial has an empty Newton polytope")
    return LatticePolytope.from_points(P.exponents, P.k)


def direction_polytope(d):
    """The cross-polytope Conv(+-e_1, ..., +-e_d)."""
    d = check_int(d, "d", minimum=1)
    eye = np.eye(d, dtype=np.int64)
    verts = np.concatenate([eye, -eye])
    verts = np.array(sorted(map(tuple, verts)), dtype=np.int64)
    lattice = np.array(sorted(map(tuple, np.vstack([verts, np.zeros((1, d), dtype=np.int64)]))), dtype=np.int64)
    return LatticePolytope(d, verts, lattice)


def parse_signed_set(S, d):
    """Normalise a signed coordinate set to a sorted tuple of +-j (1-based).

    Entries may be nonzero ints or strings like ``"x1"`` / ``"-x2"``.
    """
    d = check_int(d, "d", minimum=1)
    out = []
    for s in S:
        if isinstance(s, str):
            t = s.strip().replace(" ", "")
            sign = -1 if t.startswith("-") else 1
            t = t.lstrip("+-")
            if not t.startswith("x") or not t[1:].isdigit():
                raise InvalidSetError(f"cannot parse signed coordinate {s!r}")
            s = sign * int(t[1:])
        s = int(s)
        if s == 0 or abs(s) > d:
            raise InvalidSetError(f"signed coordinate {s} out of range for d={d}")
        out.append(s)
    if not out:
        raise InvalidSetError("signed set must be nonempty")
    if len(set(out)) != len(out):
        raise InvalidSetError(f"signed set {S!r} has repeated entries")
    if len({abs(s) for s in out}) != len(out):
        raise InvalidSetError(f"signed set {S!r} contains a coordinate with both signs")
    return tuple(sorted(out, key=lambda s: (abs(s), -s)))


def valid_signed_sets(d, min_size=1):
    """All valid signed sets of size >= ``min_size``."""
    d = check_int(d, "d", minimum=1)
    out = []
    for r in range(min_size, d + 1):
        for coords in combinations(range(1, d + 1), r):
            for signs in product((1, -1), repeat=r):
                out.append(tuple(s * c for s, c in zip(signs, coords)))
    return out


def _signed_vector(s, d):
    v = np.zeros(d)
    v[abs(s) - 1] = np.sign(s)
    return v


@dataclass(frozen=True, eq=False)
class PolyhedralCone:
    """The cone C_S attached to a signed coordinate set S.

    ``rays`` holds the generators (sum of s_i) +- e_j for each coordinate
    outside S; when S uses every coordinate the generator list would be
    empty, and the cone is the ray spanned by the sum of s_i instead.
    """

    S: tuple
    d: int
    rays: np.ndarray

    @property
    def r(self):
        return len(self.S)

    @property
    def dimension(self):
        return _rank(self.rays)

    def contains(self, x, tol=1e-9):
        """Membership by the defining relations: s_i . x all equal to t and
        t >= sum of |x_j| over coordinates outside S."""
        x = np.asarray(x, dtype=float)
        vals = np.array([np.sign(s) * x[..., abs(s) - 1] for s in self.S])
        t = vals[0]
        same = np.all(np.abs(vals - t) <= tol, axis=0)
        rest = [j for j in range(self.d) if j + 1 not in {abs(s) for s in self.S}]
        free = np.sum(np.abs(x[..., rest]), axis=-1) if rest else np.zeros_like(t)
        return same & (t + tol >= free)


def cone_CS(S, d):
    S = parse_signed_set(S, d)
    sigma = sum(_signed_vector(s, d) for s in S)
    used = {abs(s) for s in S}
    rays = []
    for j in range(1, d + 1):
        if j in used:
            continue
        e = _signed_vector(j, d)
        rays.extend([sigma + e, sigma - e])
    if not rays:
        rays = [sigma]
    return PolyhedralCone(S, d, np.array(rays))


def face_FS(S, d):
    """Face Conv(s_1, ..., s_r) of the cross-polytope."""
    S = parse_signed_set(S, d)
    verts = np.array(sorted(tuple(int(c) for c in _signed_vector(s, d)) for s in S), dtype=np.int64)
    # a simplex on distinct signed unit vectors has no lattice points besides its vertices
    return LatticePolytope(d, verts, verts.copy())


def perpendicularity_check(S, d, return_max=False):
    """Every generator of C_S is orthogonal to every edge direction s_1 - s_i of F_S."""
    S = parse_signed_set(S, d)
    cone = cone_CS(S, d)
    first = _signed_vector(S[0], d)
    dirs = [first - _signed_vector(s, d) for s in S[1:]]
    worst = 0.0
    for ray in cone.rays:
        for v in dirs:
            worst = max(worst, abs(float(np.dot(ray, v))))
    ok = worst < PERP_TOL
    return (ok, worst) if return_max else ok
