"""Plain SVG drawings of plane Newton polytopes, tropical curves and amoebas.

Every figure uses the same fixed 400 x 400 viewport with the data box
mapped onto it, so identical inputs give identical files.
"""

import numpy as np

from .errors import UnsupportedDimensionError
from .polytope import _hull2

__all__ = ["newton_svg", "tropical_svg", "amoeba_svg"]

SIZE = 400
PAD = 20


def _fmt(v):
    return f"{v:.6g}"


class _Canvas:
    def __init__(self, box):
        (self.x0, self.x1), (self.y0, self.y1) = box
        self.parts = []

    def map(self, p):
        sx = PAD + (p[0] - self.x0) / (self.x1 - self.x0) * (SIZE - 2 * PAD)
        sy = SIZE - PAD - (p[1] - self.y0) / (self.y1 - self.y0) * (SIZE - 2 * PAD)
        return sx, sy

    def line(self, a, b, stroke="black", width=1.5):
        (ax, ay), (bx, by) = self.map(a), self.map(b)
        self.parts.append(
            f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" stroke="{stroke}" stroke-width="{width}"/>'
        )

    def dot(self, p, r=3, fill="black"):
        x, y = self.map(p)
        self.parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{fill}"/>')

    def polygon(self, pts, fill="#cfe0f5", stroke="black"):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (self.map(p) for p in pts))
        self.parts.append(f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="1.5"/>')

    def rect(self, p, w, h, fill):
        x, y = self.map((p[0], p[1] + h))
        sw = w / (self.x1 - self.x0) * (SIZE - 2 * PAD)
        sh = h / (self.y1 - self.y0) * (SIZE - 2 * PAD)
        self.parts.append(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(sw)}" height="{_fmt(sh)}" fill="{fill}"/>')

    def axes(self):
        self.line((self.x0, 0), (self.x1, 0), stroke="#999999", width=0.5)
        self.line((0, self.y0), (0, self.y1), stroke="#999999", width=0.5)

    def render(self):
        head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">'
        body = [head, f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>'] + self.parts + ["</svg>"]
        return "\n".join(body) + "\n"


def newton_svg(poly):
    """Newton polytope (d = 1 or 2) with its lattice points."""
    pts = poly.lattice_points.astype(float)
    if poly.d == 1:
        pts = np.column_stack([pts[:, 0], np.zeros(len(pts))])
        verts = np.column_stack([poly.vertices[:, 0].astype(float), np.zeros(len(poly.vertices))])
    elif poly.d == 2:
        verts = poly.vertices.astype(float)
    else:
        raise UnsupportedDimensionError("SVG output is provided for d <= 2")
    r = max(1.0, float(np.abs(pts).max())) + 0.5
    cv = _Canvas(((-r, r), (-r, r)))
    cv.axes()
    if poly.d == 2 and len(verts) >= 3:
        cv.polygon(_hull2([tuple(v) for v in verts]))
    elif len(verts) >= 2:
        cv.line(verts[0], verts[-1], width=2.5)
    for p in pts:
        cv.dot(p, 3, "#555555")
    for v in verts:
        cv.dot(v, 5, "black")
    return cv.render()


def tropical_svg(cx, extent=3.0):
    """Plane tropical curve; rays are drawn to the edge of the box."""
    if cx.d != 2:
        raise UnsupportedDimensionError("SVG output is provided for d = 2")
    cv = _Canvas(((-extent, extent), (-extent, extent)))
    cv.axes()
    for vi, rj in cx.maximal_cells():
        V = cx.vertices[list(vi)]
        if len(V) >= 2:
            cv.line(V[0], V[1], stroke="#b22222", width=2.5)
        for j in rj:
            ray = cx.rays[j] / np.abs(cx.rays[j]).max()
            cv.line(V[0], V[0] + 4 * extent * ray, stroke="#b22222", width=2.5)
    for v in cx.vertices:
        cv.dot(v, 4, "#b22222")
    return cv.render()


def amoeba_svg(raster):
    """Amoeba cells of an :class:`AmoebaRaster` as horizontal runs."""
    cv = _Canvas(raster.box)
    hx = raster.xs[1] - raster.xs[0]
    hy = raster.ys[1] - raster.ys[0]
    for j, y in enumerate(raster.ys):
        row = raster.membership[:, j]
        i = 0
        while i < row.size:
            if not row[i]:
                i += 1
                continue
            start = i
            while i < row.size and row[i]:
                i += 1
            cv.rect((raster.xs[start] - hx / 2, y - hy / 2), hx * (i - start), hy, "#2e5c8a")
    cv.axes()
    for c in raster.components:
        cv.dot(c.representative, 3, "#e08000")
    return cv.render()
