"""Closed-form logarithmic zeta functions and trace moments.

These are independent oracles for the quadrature paths in :mod:`zeta`:
the terminating 2F1 moments of the one-parameter quantum walk, its log-zeta
closed forms, and the 1D/2D random-walk formulas built on the central
binomial numbers B_{2n} = binom(2n, n) / 4^n.
"""

import math
import warnings
from fractions import Fraction
from math import comb

from ._validation import check_int, check_real, check_shift
from .errors import AccuracyError, ConfigError, DomainError

__all__ = [
    "StatedDomainWarning",
    "TruncationWarning",
    "hyp2f1_terminating",
    "qw_c2l",
    "qw_u_lower_bound",
    "qw_log_zeta_closed",
    "b2n",
    "rw_log_series",
    "rw2_hyp4f3_series",
    "rw_log_zeta_closed",
]

B2N_EXACT_MAX = 32


class StatedDomainWarning(UserWarning):
    """Value computed for u in (0, 1), outside the (-1, 0) range stated for the RW formulas."""


class TruncationWarning(UserWarning):
    """A truncated series has not decayed below the requested tolerance."""


def hyp2f1_terminating(l, x):
    """2F1(1-l, 1-l; 2; x) for integer l >= 1, a polynomial of degree l-1 in x.

    Coefficients come from exact integer Pochhammer recurrences.
    """
    l = check_int(l, "l", minimum=1)
    x = check_real(x, "x")
    coef = Fraction(1)
    total = 0.0
    xm = 1.0
    for m in range(l):
        total += float(coef) * xm
        coef *= Fraction((1 - l + m) ** 2, (2 + m) * (m + 1))
        xm *= x
    return total


def _check_xi(xi):
    xi = check_real(xi, "xi")
    if not 0.0 < xi < math.pi / 2:
        raise DomainError(f"xi must lie in (0, pi/2), got {xi}")
    return xi


def qw_c2l(xi, l, shift="M"):
    """C_{2l} of the 1D quantum walk with coin angle ``xi``.

    Both the finite binomial sum and the 2F1 expression are evaluated and
    must agree (to 1e-12 relative to the size of the summands).
    """
    xi = _check_xi(xi)
    l = check_int(l, "l", minimum=1)
    shift = check_shift(shift)
    c2, s2 = math.cos(xi) ** 2, math.sin(xi) ** 2
    # M-type uses (c2, s2); F-type is the same sum with the roles swapped
    p, q = (c2, s2) if shift == "M" else (s2, c2)
    terms = [
        (-1) ** (m + (l if shift == "M" else 0)) * comb(l - 1, m - 1) ** 2 / m * p ** (l - m) * q**m
        for m in range(1, l + 1)
    ]
    by_sum = 2 * l * math.fsum(terms)
    if shift == "M":
        by_hyp = 2 * l * (-c2) ** (l - 1) * s2 * hyp2f1_terminating(l, -s2 / c2)
    else:
        by_hyp = 2 * l * s2 ** (l - 1) * (-c2) * hyp2f1_terminating(l, -c2 / s2)
    scale = max(1.0, 2 * l * math.fsum(abs(t) for t in terms))
    if abs(by_sum - by_hyp) > 1e-12 * scale:
        raise AccuracyError(f"sum and 2F1 forms of C_{2 * l} disagree: {by_sum!r} vs {by_hyp!r}")
    return by_sum


def qw_u_lower_bound(xi):
    """Left end cos xi - sqrt(cos^2 xi + 1) of the M-type admissible u range."""
    c = math.cos(xi)
    return c - math.sqrt(c * c + 1.0)


def qw_log_zeta_closed(xi, u, shift="M"):
    """Closed-form log-zeta of the 1D quantum walk.

    M-type: log((1 - u^2 + sqrt(1 + 2 cos(2 xi) u^2 + u^4)) / 2) for
    u in (cos xi - sqrt(cos^2 xi + 1), 0); F-type: the same with +u^2, for
    u < 0.  ``u = 0`` returns the limiting value 0.
    """
    xi = _check_xi(xi)
    u = check_real(u, "u")
    shift = check_shift(shift)
    if u == 0.0:
        return 0.0
    if shift == "M":
        lo = qw_u_lower_bound(xi)
        if not (lo + 1e-14 < u < 0.0):
            raise DomainError(f"M-type closed form needs u in (cos xi - sqrt(cos^2 xi + 1), 0) = ({lo:.15g}, 0), got {u}")
        base = 1.0 - u * u
    else:
        if not u < 0.0:
            raise DomainError(f"F-type closed form needs u < 0, got {u}")
        base = 1.0 + u * u
    root = math.sqrt(1.0 + 2.0 * math.cos(2.0 * xi) * u * u + u**4)
    return math.log((base + root) / 2.0)


def b2n(n):
    """binom(2n, n) / 4^n; a Fraction for n <= 32, a float beyond."""
    n = check_int(n, "n", minimum=0)
    if n <= B2N_EXACT_MAX:
        return Fraction(comb(2 * n, n), 4**n)
    return comb(2 * n, n) / 4**n


def rw_log_series(d, u, n_max):
    """Terms B_{2n}^d u^{2n} / (2n), n = 1..n_max (d in {1, 2})."""
    out = []
    b = 1.0
    for n in range(1, n_max + 1):
        b *= (2 * n - 1) / (2 * n)
        out.append(b**d * u ** (2 * n) / (2 * n))
    return out


def rw2_hyp4f3_series(u, n_max):
    """-(u^2/8) 4F3(3/2, 3/2, 1, 1; 2, 2, 2; u^2) truncated after n_max terms."""
    term = 1.0
    acc = []
    x = u * u
    for m in range(n_max):
        acc.append(term)
        term *= (1.5 + m) ** 2 * (1.0 + m) ** 2 / ((2.0 + m) ** 3 * (m + 1.0)) * x
    return -(x / 8.0) * math.fsum(acc)


def rw_log_zeta_closed(d, u, n_max=60, tol=1e-8):
    """Closed-form log-zeta of the simple symmetric RW in d = 1 or 2.

    d = 1 returns log((1 + sqrt(1 - u^2)) / 2) after checking that the
    B_{2n} series truncated at ``n_max`` agrees within its tail bound.
    d = 2 returns the (B_{2n})^2 series partial sum after checking it against
    the 4F3 series truncated at the same order.  A :class:`TruncationWarning`
    is issued when the tail bound exceeds ``tol``; u in (0, 1) triggers a
    :class:`StatedDomainWarning`.
    """
    d = check_int(d, "d", minimum=1)
    if d not in (1, 2):
        raise ConfigError(f"closed RW forms exist for d in {{1, 2}}, got {d}")
    u = check_real(u, "u")
    n_max = check_int(n_max, "n_max", minimum=1)
    if abs(u) >= 1.0:
        raise DomainError(f"RW closed forms need |u| < 1, got {u}")
    if u > 0:
        warnings.warn(f"u={u} lies outside the stated range (-1, 0) of the RW formulas", StatedDomainWarning, stacklevel=2)
    terms = rw_log_series(d, u, n_max + 1)
    series = -math.fsum(terms[:-1])
    # successive term ratios are below u^2, so the tail is dominated geometrically
    bound = terms[-1] / (1.0 - u * u)
    if bound > tol:
        warnings.warn(f"series tail bound {bound:.3e} exceeds tolerance {tol:g}", TruncationWarning, stacklevel=2)
    if d == 1:
        closed = math.log((1.0 + math.sqrt(1.0 - u * u)) / 2.0)
        if abs(closed - series) > bound + 1e-14:
            raise AccuracyError(f"B_2n series {series!r} and closed form {closed!r} disagree beyond tail bound {bound:.3e}")
        return closed
    hyp = rw2_hyp4f3_series(u, n_max)
    if abs(hyp - series) > 1e-13 * max(1.0, abs(series)):
        raise AccuracyError(f"(B_2n)^2 series {series!r} and 4F3 series {hyp!r} disagree")
    return series
