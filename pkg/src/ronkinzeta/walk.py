"""Coin matrices, tori and the momentum-space walk matrix.

A 2d-state walk on the torus T^d_N (or on Z^d) is driven by a 2d x 2d coin
``A``.  Row ``2j-2`` of ``A`` (zero-based) carries the amplitude that hops in
the ``-e_j`` direction and row ``2j-1`` the amplitude hopping along ``+e_j``.
After a Fourier transform the walk operator block-diagonalises into the
matrices

    M(k) = sum_j exp(+i k_j) P_{2j-1} A + exp(-i k_j) P_{2j} A,

which are the kernel of every spectral computation in the package.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from ._validation import as_real_vector, check_int, check_real, check_shift
from .errors import ConfigError, DimensionError, StateError

__all__ = [
    "CLASS_HINTS",
    "CoinMatrix",
    "TorusSpec",
    "MomentumMatrix",
    "qw_coin",
    "rw_coin",
    "to_flip_flop",
    "to_moving",
    "phase_vector",
    "momentum_matrices",
    "build_momentum_matrix",
    "char_det",
    "char_dets",
    "momentum_eigenvalues",
]

CLASS_HINTS = ("RW", "CRW", "QW", "General")
CLASS_TOL = 1e-12
MAX_EIG_SIZE = 64


@dataclass(frozen=True, eq=False)
class CoinMatrix:
    """A validated 2d x 2d coin.

    Parameters
    ----------
    d : int
        Spatial dimension; the coin is 2d x 2d.
    entries : array_like
        Complex coin entries, row-major.
    shift_type : {"M", "F"}
        Moving or flip-flop shift convention.
    class_hint : {"RW", "CRW", "QW", "General"}
        Declared walk class.  The class is checked at construction to
        ``CLASS_TOL``; a violation raises ``ConfigError``.
    xi : float, optional
        Angle of the one-parameter 2x2 quantum-walk family, when the coin
        came from :func:`qw_coin`.  Used only to enforce the admissible
        ``u`` range of that family.
    """

    d: int
    entries: np.ndarray
    shift_type: str = "M"
    class_hint: str = "General"
    xi: Optional[float] = field(default=None)

    def __post_init__(self):
        d = check_int(self.d, "d", minimum=1)
        a = np.array(self.entries, dtype=complex)
        if a.shape != (2 * d, 2 * d):
            raise DimensionError(f"coin for d={d} must be {2 * d}x{2 * d}, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ConfigError("coin entries must be finite")
        shift = check_shift(self.shift_type)
        if self.class_hint not in CLASS_HINTS:
            raise ConfigError(f"class_hint must be one of {CLASS_HINTS}, got {self.class_hint!r}")
        _check_class(a, self.class_hint)
        a.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "shift_type", shift)
        if self.xi is not None:
            object.__setattr__(self, "xi", float(self.xi))

    @property
    def size(self):
        return 2 * self.d

    def to_json(self):
        return {
            "d": self.d,
            "shift": self.shift_type,
            "class": self.class_hint,
            "entries": [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            d = obj["d"]
            entries = [[complex(e["re"], e.get("im", 0.0)) for e in row] for row in obj["entries"]]
            return cls(d, entries, obj.get("shift", "M"), obj.get("class", "General"))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed coin JSON: {exc}") from None

    def __repr__(self):
        return f"CoinMatrix(d={self.d}, shift_type={self.shift_type!r}, class_hint={self.class_hint!r})"


def _check_class(a, hint):
    n = a.shape[0]
    if hint == "QW":
        err = np.max(np.abs(a @ a.conj().T - np.eye(n)))
        if err > CLASS_TOL:
            raise ConfigError(f"QW coin is not unitary (max deviation {err:.3e})")
    elif hint in ("RW", "CRW"):
        if np.max(np.abs(a.imag)) > CLASS_TOL:
            raise ConfigError(f"{hint} coin must be real")
        re = a.real
        if re.min() < -CLASS_TOL or re.max() > 1 + CLASS_TOL:
            raise ConfigError(f"{hint} coin entries must lie in [0, 1]")
        colsum_err = np.max(np.abs(re.sum(axis=0) - 1.0))
        if colsum_err > CLASS_TOL:
            raise ConfigError(f"{hint} coin columns must sum to 1 (deviation {colsum_err:.3e})")
        if hint == "RW" and np.max(np.abs(re - re[:, :1])) > CLASS_TOL:
            raise ConfigError("RW coin rows must be constant")


@dataclass(frozen=True)
class TorusSpec:
    """The d-dimensional torus with N^d sites."""

    d: int
    N: int

    def __post_init__(self):
        object.__setattr__(self, "d", check_int(self.d, "d", minimum=1))
        object.__setattr__(self, "N", check_int(self.N, "N", minimum=1))

    @property
    def n_sites(self):
        return self.N**self.d

    def indices(self):
        """All k in K_N^d as an (N^d, d) integer array, lexicographic order."""
        return np.array(list(product(range(self.N), repeat=self.d)), dtype=int).reshape(-1, self.d)

    def momenta(self):
        """The grid 2 pi k / N, one row per k."""
        return 2.0 * np.pi * self.indices() / self.N


@dataclass(frozen=True, eq=False)
class MomentumMatrix:
    k: np.ndarray
    matrix: np.ndarray
    coin: CoinMatrix

    def recompute(self):
        return momentum_matrices(self.coin, self.k[None, :])[0]


def qw_coin(xi, shift="M"):
    """The 2x2 quantum-walk coin [[cos xi, sin xi], [sin xi, -cos xi]].

    The F-type coin is the same matrix with its two rows exchanged.
    ``xi = pi/4`` gives the Hadamard walk.
    """
    xi = check_real(xi, "xi")
    shift = check_shift(shift)
    c, s = np.cos(xi), np.sin(xi)
    a = np.array([[c, s], [s, -c]], dtype=complex)
    if shift == "F":
        a = a[::-1].copy()
    return CoinMatrix(1, a, shift, "QW", xi=xi)


def rw_coin(d):
    """Simple symmetric random walk: every entry equals 1/(2d)."""
    try:
        d = check_int(d, "d", minimum=1)
    except ConfigError as exc:
        raise DimensionError(str(exc)) from None
    return CoinMatrix(d, np.full((2 * d, 2 * d), 1.0 / (2 * d)), "M", "RW")


def _swap_pairs(a):
    perm = np.arange(a.shape[0]).reshape(-1, 2)[:, ::-1].ravel()
    return a[perm]


def to_flip_flop(coin):
    """Return (I_d kron sigma) A, the flip-flop version of an M-type coin."""
    if coin.shift_type != "M":
        raise StateError("coin is already F-type")
    return CoinMatrix(coin.d, _swap_pairs(coin.entries), "F", coin.class_hint, xi=coin.xi)


def to_moving(coin):
    """Inverse of :func:`to_flip_flop` (sigma is an involution)."""
    if coin.shift_type != "F":
        raise StateError("coin is already M-type")
    return CoinMatrix(coin.d, _swap_pairs(coin.entries), "M", coin.class_hint, xi=coin.xi)


def phase_vector(k):
    """Row phases for momenta ``k`` of shape (..., d): (e^{ik_1}, e^{-ik_1}, ...)."""
    k = np.asarray(k, dtype=float)
    ph = np.empty(k.shape[:-1] + (2 * k.shape[-1],), dtype=complex)
    ph[..., 0::2] = np.exp(1j * k)
    ph[..., 1::2] = np.exp(-1j * k)
    return ph


def momentum_matrices(coin, ks):
    """Stack of M(k) for ``ks`` of shape (n, d); returns (n, 2d, 2d)."""
    ks = np.asarray(ks, dtype=float)
    if ks.ndim != 2 or ks.shape[1] != coin.d:
        raise DimensionError(f"momenta must have shape (n, {coin.d}), got {ks.shape}")
    # row r of M(k) is row r of A times its phase; no projector matrices needed
    return phase_vector(ks)[:, :, None] * coin.entries[None, :, :]


def build_momentum_matrix(coin, k):
    k = as_real_vector(k, coin.d)
    return MomentumMatrix(k, momentum_matrices(coin, k[None, :])[0], coin)


def char_dets(coin, ks, u):
    """det(I - u M(k)) for each row of ``ks`` via LU elimination."""
    u = check_real(u, "u")
    mats = momentum_matrices(coin, ks)
    n = coin.size
    return np.linalg.det(np.eye(n)[None, :, :] - u * mats)


def char_det(coin, k, u):
    k = as_real_vector(k, coin.d)
    return complex(char_dets(coin, k[None, :], u)[0])


def momentum_eigenvalues(coin, k):
    """Eigenvalues of M(k); test oracle only, limited to 2d <= 64."""
    if coin.size > MAX_EIG_SIZE:
        raise DimensionError(f"eigenvalues limited to 2d <= {MAX_EIG_SIZE}")
    return np.linalg.eigvals(build_momentum_matrix(coin, k).matrix)
