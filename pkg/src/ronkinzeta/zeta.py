"""Walk-type zeta functions on finite tori and their N -> infinity limit.

``finite_zeta`` evaluates det(I - u M_A)^(-1/N^d) through the momentum
factorisation, ``log_zeta`` is the logarithmic zeta function obtained as the
torus average of log det(I - u M(theta)), and the ``c_r_*`` functions give the
trace moments that form its power-series coefficients.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._validation import check_int, check_real
from .errors import AccuracyError, DimensionError, DomainError, PoleError, UnsupportedDimensionError
from .quadrature import QuadratureSpec, evaluate_on_grid, fixed_order_mean, grid_points, refine, CHUNK
from .walk import CoinMatrix, TorusSpec, char_dets, momentum_matrices

__all__ = [
    "ZetaResult",
    "SeriesResult",
    "finite_zeta",
    "log_zeta",
    "admissible_u_range",
    "c_r_finite",
    "c_r_limit",
    "c_r_sequence",
    "series_log_zeta",
]

POLE_TOL = 1e-12
REAL_TOL = 1e-13
R_MAX_CAP = 200
MAX_QUAD_DIM = 3


@dataclass(frozen=True)
class ZetaResult:
    """A zeta or log-zeta value with its quadrature diagnostics.

    ``torus`` is the finite torus, or the string ``"infinite"`` for the
    N -> infinity limit.  ``nodes`` is the node count per dimension of the
    final grid and ``delta`` the change between the last two refinements
    (zero for exact finite sums).
    """

    value: Union[float, complex]
    u: float
    torus: Union[TorusSpec, str]
    nodes: int
    delta: float = 0.0


@dataclass(frozen=True)
class SeriesResult:
    value: float
    last_term: float
    r_max: int


def _maybe_real(z, scale=1.0):
    z = complex(z)
    if abs(z.imag) <= REAL_TOL * max(1.0, abs(z.real), scale):
        return z.real
    return z


def _is_real(dets):
    return np.abs(dets.imag) <= REAL_TOL * np.maximum(np.abs(dets), 1.0)


def finite_zeta(coin, torus, u):
    """det(I_{2dN^d} - u M_A)^(-1/N^d) from the N^d momentum determinants.

    Logs are summed in a fixed order; when any determinant is non-real the
    imaginary part of the total is reduced to (-pi, pi] so that the result is
    the principal power of the full determinant.
    """
    if torus.d != coin.d:
        raise DimensionError(f"torus dimension {torus.d} does not match coin dimension {coin.d}")
    u = check_real(u, "u")
    n = torus.N
    dets = evaluate_on_grid(lambda pts: char_dets(coin, pts, u), n, coin.d).ravel()
    small = np.flatnonzero(np.abs(dets) < POLE_TOL)
    if small.size:
        k = tuple(int(i) for i in np.unravel_index(small[0], (n,) * coin.d))
        raise PoleError(f"det(I - u M(k)) vanishes at k={k} for u={u}", k=k)
    if np.all(_is_real(dets) & (dets.real > 0)):
        total = fixed_order_mean(np.log(dets.real)) * dets.size
        value = math.exp(-total / dets.size)
    else:
        total = complex(fixed_order_mean(np.log(dets)) * dets.size)
        im = math.remainder(total.imag, 2 * math.pi)
        if im == -math.pi:
            im = math.pi
        value = _maybe_real(np.exp(-complex(total.real, im) / dets.size))
    return ZetaResult(value, u, torus, n, 0.0)


def admissible_u_range(coin):
    """Open interval of u where the closed forms of the coin's family hold.

    Returns ``None`` for coins without a family-specific range (general
    coins, CRW, QW coins not built by ``qw_coin``).
    """
    if coin.class_hint == "RW":
        return (-1.0, 1.0)
    if coin.class_hint == "QW" and coin.d == 1 and coin.xi is not None:
        if coin.shift_type == "M":
            c = math.cos(coin.xi)
            return (c - math.sqrt(c * c + 1.0), 0.0)
        return (-math.inf, 0.0)
    return None


def _enforce_u_range(coin, u):
    rng = admissible_u_range(coin)
    if rng is None:
        return
    lo, hi = rng
    if not (lo + 1e-14 < u < hi):
        raise DomainError(
            f"u={u} outside the admissible range ({lo:.15g}, {hi:.15g}) for this "
            f"{coin.class_hint} {coin.shift_type}-type coin"
        )


def _log_det(dets, u):
    """Branch-checked log of a grid of determinants (shape (n,)*d)."""
    if np.all(_is_real(dets)):
        re = dets.real
        if np.any(re <= 0):
            raise DomainError(
                f"det(I - u M(theta)) <= 0 at a quadrature node for u={u}; u lies outside "
                "the range where the logarithmic zeta function is defined"
            )
        return np.log(re)
    if np.any(np.abs(dets) < POLE_TOL):
        raise DomainError(f"det(I - u M(theta)) vanishes at a quadrature node for u={u}")
    arg = np.angle(dets)
    for axis in range(dets.ndim):
        jump = np.abs(np.roll(arg, -1, axis=axis) - arg)
        if np.any(jump > math.pi):
            raise DomainError(
                f"principal log of det(I - u M(theta)) is discontinuous on the torus for u={u}"
            )
    return np.log(dets)


def log_zeta(coin, u, quad=None):
    """Logarithmic zeta function: torus average of log det(I - u M(theta)).

    The node count doubles until successive values differ by less than
    ``quad.tolerance``.  Family-specific u ranges are enforced (RW: |u| < 1;
    ``qw_coin`` M-type: cos xi - sqrt(cos^2 xi + 1) < u < 0; F-type: u < 0).
    """
    quad = quad or QuadratureSpec()
    u = check_real(u, "u")
    d = coin.d
    if d > MAX_QUAD_DIM:
        raise UnsupportedDimensionError(f"log_zeta supports d <= {MAX_QUAD_DIM}, got {d}")
    if u == 0.0:
        return ZetaResult(0.0, u, "infinite", quad.nodes_per_dim, 0.0)
    _enforce_u_range(coin, u)

    def mean_at(n):
        dets = evaluate_on_grid(lambda pts: char_dets(coin, pts, u), n, d)
        return complex(fixed_order_mean(_log_det(dets, u)))

    value, nodes, delta = refine(mean_at, d, quad)
    return ZetaResult(_maybe_real(value), u, "infinite", nodes, delta)


def _trace_power_mean(coin, n, r):
    total = n**coin.d
    sums = []
    for s in range(0, total, CHUNK):
        mats = momentum_matrices(coin, grid_points(n, coin.d, s, s + CHUNK))
        sums.append(np.sum(np.trace(np.linalg.matrix_power(mats, r), axis1=1, axis2=2)))
    acc = sums[0]
    for p in sums[1:]:
        acc = acc + p
    return _maybe_real(acc / total)


def c_r_finite(coin, torus, r):
    """C_r(A, T^d_N): torus average of Tr(M(k)^r)."""
    r = check_int(r, "r", minimum=1)
    if torus.d != coin.d:
        raise DimensionError(f"torus dimension {torus.d} does not match coin dimension {coin.d}")
    return _trace_power_mean(coin, torus.N, r)


def c_r_limit(coin, r, quad=None):
    """C_r(A, T^d_inf): the integral of Tr(M(theta)^r) over the torus.

    Tr(M^r) is a trigonometric polynomial of degree r in each angle, so the
    periodic rule with more than r nodes is exact; the node count used is
    ``max(quad.nodes_per_dim, r + 1)``.
    """
    quad = quad or QuadratureSpec()
    r = check_int(r, "r", minimum=1)
    if coin.d > MAX_QUAD_DIM:
        raise UnsupportedDimensionError(f"c_r_limit supports d <= {MAX_QUAD_DIM}, got {coin.d}")
    n = max(quad.nodes_per_dim, r + 1)
    if not quad.allows(n, coin.d):
        raise AccuracyError(f"exact rule for r={r} needs {n}^{coin.d} nodes, above the cap")
    return _trace_power_mean(coin, n, r)


def c_r_sequence(coin, r_max, quad=None):
    """[C_1, ..., C_{r_max}] in the N -> infinity limit, sharing one exact grid."""
    quad = quad or QuadratureSpec()
    r_max = check_int(r_max, "r_max", minimum=1)
    if r_max > R_MAX_CAP:
        raise AccuracyError(f"r_max capped at {R_MAX_CAP}")
    d = coin.d
    if d > MAX_QUAD_DIM:
        raise UnsupportedDimensionError(f"c_r_sequence supports d <= {MAX_QUAD_DIM}, got {d}")
    n = max(quad.nodes_per_dim, r_max + 1)
    if not quad.allows(n, d):
        raise AccuracyError(f"exact rule for r_max={r_max} needs {n}^{d} nodes, above the cap")
    total = n**d
    acc = np.zeros(r_max, dtype=complex)
    for s in range(0, total, CHUNK):
        mats = momentum_matrices(coin, grid_points(n, d, s, s + CHUNK))
        power = mats
        for r in range(r_max):
            if r:
                power = power @ mats
            acc[r] += np.sum(np.trace(power, axis1=1, axis2=2))
    return [_maybe_real(c) for c in acc / total]


def series_log_zeta(coin, u, r_max, quad=None):
    """Partial sum -sum_{r<=r_max} C_r u^r / r with the last term as diagnostic."""
    u = check_real(u, "u")
    cs = c_r_sequence(coin, r_max, quad)
    terms = [c * u**r / r for r, c in enumerate(cs, start=1)]
    value = 0.0
    for t in terms:
        value -= t
    # odd-order coefficients vanish for the symmetric families, so look at two terms
    last = max(abs(t) for t in terms[-2:])
    return SeriesResult(_maybe_real(value), float(last), r_max)
