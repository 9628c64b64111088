"""Ronkin functions of Laurent polynomials and the log-zeta correspondence.

R_P(x) is the average of log|P| over the torus |z_j| = e^{x_j}.  Two
quadratures are provided:

``"jensen"`` (default)
    The innermost variable is integrated exactly with Jensen's formula
    (mean of log|Q| on a circle = log|lead| + sum of max(log r, log|root|)),
    and the remaining k-1 angles use the periodic trapezoidal rule with node
    doubling.  The outer integrand is analytic off the amoeba and only has
    kinks on it, so the rule stays accurate even where P vanishes on the
    integration torus.

``"tensor"``
    Plain tensor-product trapezoid over all k angles; a node where |P| is
    numerically zero is replaced by the average over a cell-centred
    sub-grid, and the evaluation is flagged singular if that still hits zero.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import as_real_vector, check_int, check_real, check_shift
from .errors import AccuracyError, ConfigError, DegeneracyError, DomainError, UnsupportedDimensionError
from .laurent import LaurentPolynomial
from .quadrature import QuadratureSpec, evaluate_on_grid, fixed_order_mean, refine
from .walk import qw_coin, rw_coin
from .zeta import log_zeta

__all__ = [
    "RonkinEvaluation",
    "CorrespondenceReport",
    "ronkin_eval",
    "ronkin_gradient",
    "p_rw",
    "p_qw",
    "p_simplified",
    "qw_ronkin_closed",
    "correspondence_check",
]

MAX_K = 3
SINGULAR_TOL = 1e-10
NEAR_ZERO = 1e-13
SUBCELL = 4
KINK_SCAN = 64
BISECT_STEPS = 52
GAUSS_ORDER = 24
MAX_SPLIT_DEPTH = 40
GOLDEN_STEPS = 80
TS_STEP = 0.5
TS_RANGE = 3.5
TS_LEVELS = 7
TOUCH_TOL = 1e-8
KINK_MERGE = 1e-12


@dataclass(frozen=True)
class RonkinEvaluation:
    """Value of R_P at ``x`` with quadrature diagnostics.

    ``min_abs`` is the smallest |P| met on the integration torus (for the
    Jensen method, the lower bound |lead| * prod | e^{x_k} - |root| | per
    outer node).  ``singular_flag`` is set when it fell below the singular
    tolerance, i.e. the zero set of P meets the torus numerically.
    """

    x: np.ndarray
    value: float
    nodes: int
    delta: float
    singular_flag: bool
    min_abs: float
    method: str = "jensen"


@dataclass(frozen=True)
class CorrespondenceReport:
    model: str
    params: dict
    u: float
    log_zeta: float
    ronkin: float
    difference: float
    log_zeta_nodes: int
    ronkin_nodes: int


def _roots(q):
    """Roots of the polynomials with coefficient rows ``q`` (ascending powers).

    Every row must have a nonzero last entry.  Returns shape (m, D).
    """
    D = q.shape[1] - 1
    if D == 0:
        return np.zeros((q.shape[0], 0), dtype=complex)
    if D == 1:
        return (-q[:, 0] / q[:, 1])[:, None]
    if D == 2:
        a, b, c = q[:, 2], q[:, 1], q[:, 0]
        disc = np.sqrt(b * b - 4 * a * c)
        # pick the sign that avoids cancellation; second root from Vieta
        sgn = np.where((b.conj() * disc).real >= 0, 1.0, -1.0)
        qq = -0.5 * (b + sgn * disc)
        r1 = np.where(qq != 0, qq / a, 0.0)
        r2 = np.where(qq != 0, c / np.where(qq != 0, qq, 1.0), 0.0)
        return np.stack([r1, r2], axis=1)
    comp = np.zeros((q.shape[0], D, D), dtype=complex)
    comp[:, 1:, :-1] = np.eye(D - 1)
    comp[:, :, -1] = -q[:, :-1] / q[:, -1:]
    return np.linalg.eigvals(comp)


def _jensen_rows(coeffs, xk):
    """Exact circle average of log|sum_i C[:, i] z^i| at radius e^{xk}.

    Returns (values, lower bound of |P| on the circle, number of roots
    outside the circle, distance min |log|root| - xk| of the roots from the
    circle).  Rows whose nominal top coefficient vanishes are reduced to
    their actual degree, which is the continuous limit (log|lead| +
    log|escaping root| stays finite).
    """
    m, width = coeffs.shape
    values = np.empty(m)
    bound = np.empty(m)
    outside = np.zeros(m, dtype=int)
    dist = np.full(m, np.inf)
    mag = np.abs(coeffs)
    scale = mag.max(axis=1)
    nz = mag > NEAR_ZERO * np.maximum(scale, 1e-300)[:, None]
    ok = nz.any(axis=1)
    top = np.where(ok, width - 1 - np.argmax(nz[:, ::-1], axis=1), 0)
    values[~ok] = -np.inf
    bound[~ok] = 0.0
    r = math.exp(xk)
    for deg in np.unique(top[ok]):
        rows = np.flatnonzero(ok & (top == deg))
        q = coeffs[rows, : deg + 1]
        lead = np.abs(q[:, -1])
        roots = _roots(q)
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(roots))
        values[rows] = np.log(lead) + np.maximum(logs, xk).sum(axis=1)
        bound[rows] = lead * np.prod(np.abs(r - np.abs(roots)), axis=1)
        # escaped roots (degree drop) count as outside
        outside[rows] = (logs > xk).sum(axis=1) + (width - 1 - deg)
        if deg > 0:
            dist[rows] = np.abs(logs - xk).min(axis=1)
    return values, bound, outside, dist


def _jensen_integrand(P, x):
    m_lo, _ = P.last_variable_span()
    xk = float(x[-1])
    xo = x[:-1]

    def f(theta):
        _, coeffs = P.last_variable_coefficients(xo[None, :] + 1j * theta)
        vals, bound, outside, dist = _jensen_rows(coeffs, xk)
        return vals + m_lo * xk, bound, outside, dist

    return f


def _cell_offsets(h, d, s=SUBCELL):
    g = (np.arange(s) + 0.5) / s - 0.5
    mesh = np.stack(np.meshgrid(*([g] * d), indexing="ij"), axis=-1).reshape(-1, d)
    return mesh * h


def _gauss_rule(order):
    if order not in _GAUSS_CACHE:
        _GAUSS_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GAUSS_CACHE[order]


_GAUSS_CACHE = {}


class _Fibre:
    """Circle average over the next-to-last angle, with kink handling.

    ``g(t)`` returns (values, |P| bounds, root counts, root distances from
    the circle) for angles ``t``.  Without kinks the average is the periodic
    trapezoid with doubling.  Kinks sit where a root meets the circle: where
    the root count changes they are located by bisection, and where two
    roots touch the circle together without changing the count (a local
    minimum of the distance that reaches zero) by golden-section search.
    Every smooth arc between kinks is integrated with adaptive
    Gauss-Legendre, or with tanh-sinh when ``arc="tanh-sinh"`` (for
    integrands whose arcs end in algebraic singularities rather than kinks).
    """

    def __init__(self, g, tol, max_nodes, scan, state, arc="gauss"):
        self.g, self.tol, self.max_nodes, self.scan, self.state = g, tol, max_nodes, scan, state
        self.arc = arc
        self.evals = 0
        self.kink_count = 0

    def _call(self, t):
        vals, bound, outside, dist = self.g(t)
        bad = ~np.isfinite(vals)
        if np.any(bad):
            # P vanishes identically on this fibre: average a small neighbourhood instead
            for i in np.flatnonzero(bad):
                sv, sb, _, _ = self.g(t[i] + _cell_offsets(2 * math.pi / self.scan, 1)[:, 0])
                vals[i], bound[i] = np.mean(sv), sb.min()
        self.evals += t.size
        self.state["min"] = min(self.state["min"], float(bound.min()))
        return vals, outside, dist

    def mean(self):
        n = self.scan
        theta = 2 * math.pi * np.arange(n) / n
        vals, outside, dist = self._call(theta)
        touches = self._touches(theta, outside, dist)
        mean = float(fixed_order_mean(vals))
        while touches.size == 0 and np.all(outside == outside[0]):
            if 2 * n > self.max_nodes:
                raise AccuracyError(f"fibre quadrature did not reach tolerance {self.tol:g} before the node cap")
            odd = 2 * math.pi * (2 * np.arange(n) + 1) / (2 * n)
            v2, o2, _ = self._call(odd)
            cur = 0.5 * (mean + float(fixed_order_mean(v2)))
            theta = np.stack([theta, odd], axis=1).ravel()
            vals = np.stack([vals, v2], axis=1).ravel()
            outside = np.stack([outside, o2], axis=1).ravel()
            n *= 2
            delta = abs(cur - mean)
            mean = cur
            if delta < self.tol and np.all(outside == outside[0]):
                return mean, delta
        self.state["kinks"] = True
        return self._piecewise(theta, outside, touches)

    def _kinks(self, theta, outside):
        idx = np.flatnonzero(outside != np.roll(outside, -1))
        if idx.size == 0:
            return np.zeros(0)
        a = theta[idx].copy()
        b = np.where(idx + 1 < theta.size, theta[(idx + 1) % theta.size], 2 * math.pi)
        ca = outside[idx]
        for _ in range(BISECT_STEPS):
            mid = 0.5 * (a + b)
            _, cm, _ = self._call(mid)
            left = cm == ca
            a = np.where(left, mid, a)
            b = np.where(left, b, mid)
        return np.sort(0.5 * (a + b))

    def _touches(self, theta, outside, dist):
        """Angles where the root distance has a local minimum that reaches zero
        while the root count stays the same (crossings are bisected instead)."""
        prev, nxt = np.roll(dist, 1), np.roll(dist, -1)
        with np.errstate(invalid="ignore"):  # rows without roots carry inf
            drop = np.maximum(np.abs(prev - dist), np.abs(nxt - dist))
        same = (np.roll(outside, 1) == outside) & (np.roll(outside, -1) == outside)
        # a V-shaped minimum reaching zero is no deeper than the rise to its neighbours
        cand = np.flatnonzero(same & np.isfinite(dist) & (dist <= prev) & (dist <= nxt) & (dist < drop))
        if cand.size == 0:
            return np.zeros(0)
        h = 2 * math.pi / theta.size
        a, b = theta[cand] - h, theta[cand] + h
        g = (math.sqrt(5) - 1) / 2
        for _ in range(GOLDEN_STEPS):
            c, d = b - g * (b - a), a + g * (b - a)
            _, _, dd = self._call(np.concatenate([c, d]))
            left = dd[: c.size] < dd[c.size:]
            a, b = np.where(left, a, c), np.where(left, d, b)
        t = 0.5 * (a + b)
        _, _, dt = self._call(t)
        return np.mod(t[dt < TOUCH_TOL], 2 * math.pi)

    def _piecewise(self, theta, outside, touches):
        kinks = np.sort(np.concatenate([self._kinks(theta, outside), touches]))
        # kinks found by both searches coincide to rounding
        kinks = kinks[np.append(True, np.diff(kinks) > KINK_MERGE)]
        self.kink_count = kinks.size
        edges = np.append(kinks, kinks[0] + 2 * math.pi)
        arc = self._tanh_sinh if self.arc == "tanh-sinh" else self._arc
        total, err = 0.0, 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            v, e = arc(a, b)
            total += v
            err += e
        return total / (2 * math.pi), err / (2 * math.pi)

    def _rule(self, a, b, order):
        x, w = _gauss_rule(order)
        half = 0.5 * (b - a)
        vals, _, _ = self._call(a + half * (x + 1.0))
        return half * float(np.dot(w, vals))

    def _arc(self, a, b):
        stack = [(a, b, 0)]
        total, err = 0.0, 0.0
        while stack:
            lo, hi, depth = stack.pop()
            coarse = self._rule(lo, hi, GAUSS_ORDER)
            fine = self._rule(lo, hi, 2 * GAUSS_ORDER)
            e = abs(fine - coarse)
            if e <= self.tol * (hi - lo) or depth >= MAX_SPLIT_DEPTH:
                if e > self.tol * (hi - lo):
                    raise AccuracyError(f"arc quadrature did not reach tolerance {self.tol:g}")
                total += fine
                err += e
            else:
                mid = 0.5 * (lo + hi)
                stack.append((mid, hi, depth + 1))
                stack.append((lo, mid, depth + 1))
        return total, err

    def _tanh_sinh(self, a, b):
        """Double-exponential rule on [a, b], halving the step until two levels agree."""
        half = 0.5 * (b - a)
        floor = np.finfo(float).eps * max(1.0, abs(a), abs(b))

        def part(t):
            # distance from the nearer endpoint, computed without cancellation
            u = 0.5 * math.pi * np.sinh(t)
            e = np.exp(-2.0 * u)
            dist = half * 2.0 * e / (1.0 + e)
            w = half * math.pi * np.cosh(t) * 4.0 * e / (1.0 + e) ** 2 / 2.0
            keep = dist > floor
            t_l, t_r = a + dist[keep], b - dist[keep]
            vals = self._call(np.concatenate([t_l, t_r]))[0]
            return float(np.dot(np.concatenate([w[keep], w[keep]]), vals))

        h = TS_STEP
        centre = float(self._call(np.array([0.5 * (a + b)]))[0][0]) * half * 0.5 * math.pi
        acc = centre + part(h * np.arange(1, int(TS_RANGE / h) + 1))
        est = h * acc
        for _ in range(TS_LEVELS):
            h *= 0.5
            acc += part(h * np.arange(1, int(TS_RANGE / h) + 1, 2))
            new = h * acc
            delta = abs(new - est)
            est = new
            if delta <= self.tol * (b - a):
                return est, delta
        raise AccuracyError(f"tanh-sinh arc did not reach tolerance {self.tol:g}")


def _ronkin_jensen(P, x, quad):
    k = P.k
    f = _jensen_integrand(P, x)
    if k == 1:
        vals, bound, _, _ = f(np.zeros((1, 0)))
        if not np.isfinite(vals[0]):
            raise DomainError("polynomial vanishes identically")
        mb = float(bound[0])
        return RonkinEvaluation(x, float(vals[0]), 1, 0.0, mb < SINGULAR_TOL, mb, "jensen")

    state = {"min": math.inf, "kinks": False}
    scan = max(quad.nodes_per_dim, KINK_SCAN)
    inner_tol = quad.tolerance / 4 if k > 2 else quad.tolerance

    def fibres(t):
        # one inner fibre per outer angle; its kink count plays the role of the root count
        vals, counts = np.empty(t.size), np.empty(t.size, dtype=int)
        for i, t1 in enumerate(t):
            fib = _Fibre(lambda t2: f(np.column_stack([np.full(t2.size, t1), t2])), inner_tol, quad.max_nodes_per_dim, scan, state)
            vals[i], _ = fib.mean()
            counts[i] = fib.kink_count
        return vals, np.full(t.size, np.inf), counts, np.full(t.size, np.inf)

    try:
        if k == 2:
            fib = _Fibre(lambda t: f(t[:, None]), inner_tol, quad.max_nodes_per_dim, scan, state)
        else:
            # the outer integrand is singular where the inner kink structure changes
            fib = _Fibre(fibres, quad.tolerance, quad.max_nodes_per_dim, scan, state, arc="tanh-sinh")
        value, delta = fib.mean()
        nodes = fib.evals
    except AccuracyError as exc:
        partial = RonkinEvaluation(x, math.nan, 0, math.inf, state["min"] < SINGULAR_TOL, state["min"], "jensen")
        raise AccuracyError(str(exc), evaluation=partial) from None
    mb = state["min"]
    singular = state["kinks"] or mb < SINGULAR_TOL
    return RonkinEvaluation(x, float(value), nodes, float(delta), singular, mb, "jensen")


def _ronkin_tensor(P, x, quad):
    k = P.k
    state = {"min": math.inf, "singular": False}

    def mean_at(n):
        h = 2 * math.pi / n
        offsets = _cell_offsets(h, k)

        def g(theta):
            a = np.abs(P.on_torus(x, theta))
            state["min"] = min(state["min"], float(a.min()))
            with np.errstate(divide="ignore"):
                vals = np.log(a)
            for i in np.flatnonzero(a < NEAR_ZERO):
                sub = np.abs(P.on_torus(x, theta[i][None, :] + offsets))
                state["min"] = min(state["min"], float(sub.min()))
                if np.any(sub < NEAR_ZERO):
                    state["singular"] = True
                    sub = np.maximum(sub, NEAR_ZERO)
                vals[i] = np.mean(np.log(sub))
            return vals

        return float(fixed_order_mean(evaluate_on_grid(g, n, k)))

    try:
        value, nodes, delta = refine(mean_at, k, quad)
    except AccuracyError as exc:
        partial = RonkinEvaluation(x, math.nan, 0, math.inf, True, state["min"], "tensor")
        raise AccuracyError(str(exc), evaluation=partial) from None
    singular = state["singular"] or state["min"] < SINGULAR_TOL
    return RonkinEvaluation(x, value, nodes, delta, singular, state["min"], "tensor")


def ronkin_eval(P, x, quad=None, method="jensen"):
    """Ronkin function R_P(x) = average of log|P(e^{x + i theta})| over the torus."""
    quad = quad or QuadratureSpec()
    if P.is_zero():
        raise DomainError("Ronkin function of the zero polynomial is undefined")
    if P.k > MAX_K:
        raise UnsupportedDimensionError(f"Ronkin quadrature supports k <= {MAX_K}, got {P.k}")
    x = as_real_vector(x, P.k, "x")
    if method == "jensen":
        return _ronkin_jensen(P, x, quad)
    if method == "tensor":
        return _ronkin_tensor(P, x, quad)
    raise ConfigError(f"unknown Ronkin method {method!r}")


def ronkin_gradient(P, x, h=1e-3, quad=None):
    """Central-difference gradient of R_P at ``x``."""
    x = as_real_vector(x, P.k, "x")
    grad = np.empty(P.k)
    for j in range(P.k):
        e = np.zeros(P.k)
        e[j] = h
        grad[j] = (ronkin_eval(P, x + e, quad).value - ronkin_eval(P, x - e, quad).value) / (2 * h)
    return grad


def p_rw(d, u):
    """1 - (u / 2d) sum_j (z_j + 1/z_j)."""
    d = check_int(d, "d", minimum=1)
    u = check_real(u, "u")
    terms = {(0,) * d: 1.0}
    for j in range(d):
        for s in (1, -1):
            e = [0] * d
            e[j] = s
            terms[tuple(e)] = -u / (2 * d)
    return LaurentPolynomial(d, terms)


def p_qw(xi, u, shift="M"):
    """Quantum-walk polynomial in one variable.

    M-type: 1 - cos(xi) (z - 1/z) u - u^2; F-type: 1 - sin(xi) (z + 1/z) u + u^2.
    """
    xi = check_real(xi, "xi")
    u = check_real(u, "u")
    if check_shift(shift) == "M":
        c = math.cos(xi)
        return LaurentPolynomial(1, {1: -c * u, -1: c * u, 0: 1.0 - u * u})
    s = math.sin(xi)
    return LaurentPolynomial(1, {1: -s * u, -1: -s * u, 0: 1.0 + u * u})


def p_simplified(family, param):
    """Rescaled polynomials with the same zero sets (u = 1).

    ``family`` is ``"RWd"`` (``param`` = d), ``"QWm"`` or ``"QWf"``
    (``param`` = xi, which must not be a multiple of pi/2).
    """
    if family == "RWd":
        d = check_int(param, "d", minimum=1)
        terms = {(0,) * d: -2.0 * d}
        for j in range(d):
            for s in (1, -1):
                e = [0] * d
                e[j] = s
                terms[tuple(e)] = 1.0
        return LaurentPolynomial(d, terms)
    if family in ("QWm", "QWf"):
        xi = check_real(param, "xi")
        c, s = math.cos(xi), math.sin(xi)
        if abs(c) < 1e-12 or abs(s) < 1e-12:
            raise DegeneracyError(f"xi={xi} is a multiple of pi/2")
        if family == "QWm":
            return LaurentPolynomial(1, {1: 1.0, -1: -1.0, 0: -1.0 / c})
        return LaurentPolynomial(1, {1: 1.0, -1: 1.0, 0: -1.0 / s})
    raise ConfigError(f"unknown family {family!r}; expected RWd, QWm or QWf")


def qw_ronkin_closed(xi, u):
    """R(0) of the M-type quantum-walk polynomial in closed form, |u| < 1.

    With a = 1 - 2 sin^2(xi) u^2 + u^4 and b = 2 cos^2(xi) u^2 this is
    (1/2) log((a + sqrt(a^2 - b^2)) / 2).  The identity
    a^2 - b^2 = (1 - u^2)^2 (1 + 2 cos(2 xi) u^2 + u^4) is checked on the way.
    """
    xi = check_real(xi, "xi")
    u = check_real(u, "u")
    if not -1.0 < u < 1.0:
        raise DomainError(f"closed form needs -1 < u < 1, got {u}")
    s2, c2 = math.sin(xi) ** 2, math.cos(xi) ** 2
    a = 1.0 - 2.0 * s2 * u * u + u**4
    b = 2.0 * c2 * u * u
    disc = a * a - b * b
    factored = (1.0 - u * u) ** 2 * (1.0 + 2.0 * math.cos(2.0 * xi) * u * u + u**4)
    if abs(disc - factored) > 1e-12 * max(1.0, abs(disc)):
        raise AccuracyError(f"a^2 - b^2 = {disc!r} does not factor as expected ({factored!r})")
    return 0.5 * math.log((a + math.sqrt(max(disc, 0.0))) / 2.0)


def correspondence_check(model, params, u, quad=None):
    """Compare the log-zeta function with R(0, ..., 0) of the matching polynomial.

    ``model`` is ``"rw"`` (``params={"d": d}``), ``"qw-m"`` or ``"qw-f"``
    (``params={"xi": xi}``).
    """
    quad = quad or QuadratureSpec()
    params = dict(params or {})
    if model == "rw":
        d = check_int(params.get("d", 1), "d", minimum=1)
        coin, poly = rw_coin(d), p_rw(d, u)
    elif model in ("qw-m", "qw-f"):
        if "xi" not in params:
            raise ConfigError("qw models need params['xi']")
        shift = "M" if model == "qw-m" else "F"
        coin, poly = qw_coin(params["xi"], shift), p_qw(params["xi"], u, shift)
    else:
        raise ConfigError(f"unknown model {model!r}; expected rw, qw-m or qw-f")
    lz = log_zeta(coin, u, quad)
    rk = ronkin_eval(poly, np.zeros(poly.k), quad)
    L = float(np.real(lz.value))
    return CorrespondenceReport(model, params, float(u), L, rk.value, abs(L - rk.value), lz.nodes, rk.nodes)
