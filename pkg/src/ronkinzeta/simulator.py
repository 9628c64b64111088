"""Site-space evolution of walks on tori and on the lattice Z^d.

One step applies the coin at every site and then moves component 2j-2
(zero-based) to the neighbour in the -e_j direction and component 2j-1 to
the neighbour in the +e_j direction:

    Psi'(x) = sum_j P_{2j-1} A Psi(x + e_j) + P_{2j} A Psi(x - e_j).

On the lattice the state lives on a window [-R, R]^d that grows by one
site per step, so nothing ever wraps.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import check_int
from .errors import CapExceededError, ConfigError, DimensionError
from .walk import TorusSpec

__all__ = [
    "WalkState",
    "MatrixWeightField",
    "delta_state",
    "evolve",
    "run",
    "matrix_weight",
    "return_trace",
    "measure",
    "total_measure",
    "site_operator",
    "fold_to_torus",
    "state_csv",
    "measure_csv",
    "MATRIX_WEIGHT_CAP",
]

MATRIX_WEIGHT_CAP = 20


@dataclass(frozen=True, eq=False)
class WalkState:
    """Psi_n as a dense array of shape (L,)*d + (2d,).

    ``torus`` is set for periodic states (L = N); otherwise the state is a
    lattice window of radius ``radius`` (L = 2 radius + 1, origin at index
    ``radius``).
    """

    d: int
    values: np.ndarray
    torus: Optional[TorusSpec] = None
    radius: int = 0
    step: int = 0

    @property
    def on_torus(self):
        return self.torus is not None

    def sites(self):
        """Integer coordinates of every site, shape (L^d, d), C order."""
        L = self.values.shape[0]
        idx = np.indices((L,) * self.d).reshape(self.d, -1).T
        return idx if self.on_torus else idx - self.radius

    def at(self, x):
        x = np.asarray(x, dtype=int)
        if self.on_torus:
            return self.values[tuple(x % self.torus.N)]
        if np.any(np.abs(x) > self.radius):
            return np.zeros(2 * self.d, dtype=complex)
        return self.values[tuple(x + self.radius)]


@dataclass(frozen=True, eq=False)
class MatrixWeightField:
    """Phi_n on the window [-n, n]^d (or on a torus), shape (L,)*d + (2d, 2d)."""

    d: int
    n: int
    values: np.ndarray
    torus: Optional[TorusSpec] = None

    @property
    def radius(self):
        return 0 if self.torus is not None else (self.values.shape[0] - 1) // 2

    def at(self, x):
        x = np.asarray(x, dtype=int).reshape(self.d)
        if self.torus is not None:
            return self.values[tuple(x % self.torus.N)]
        if np.any(np.abs(x) > self.radius):
            return np.zeros((2 * self.d, 2 * self.d), dtype=complex)
        return self.values[tuple(x + self.radius)]


def delta_state(d, vector, torus=None):
    """delta_0 tensor ``vector`` on a torus or on the lattice."""
    d = check_int(d, "d", minimum=1)
    v = np.asarray(vector, dtype=complex)
    if v.shape != (2 * d,):
        raise DimensionError(f"initial vector must have length {2 * d}")
    if torus is not None:
        if torus.d != d:
            raise DimensionError("torus dimension does not match")
        vals = np.zeros((torus.N,) * d + (2 * d,), dtype=complex)
        vals[(0,) * d] = v
        return WalkState(d, vals, torus, 0, 0)
    vals = v.reshape((1,) * d + (2 * d,)).copy()
    return WalkState(d, vals, None, 0, 0)


def _step(field, A, d, periodic):
    """One walk step for an array of shape (L,)*d + (2d,) or (L,)*d + (2d, 2d)."""
    if not periodic:
        field = np.pad(field, [(1, 1)] * d + [(0, 0)] * (field.ndim - d))
    # coin at every site: A acts on the first state axis
    coined = np.moveaxis(np.tensordot(A, field, axes=([1], [d])), 0, d)
    out = np.empty_like(coined)
    head = (slice(None),) * d
    for j in range(d):
        # zero-based row 2j comes from x + e_j, row 2j + 1 from x - e_j
        out[head + (2 * j,)] = np.roll(coined[head + (2 * j,)], -1, axis=j)
        out[head + (2 * j + 1,)] = np.roll(coined[head + (2 * j + 1,)], 1, axis=j)
    return out


def evolve(state, coin):
    """Psi_{n+1} from Psi_n (periodic on tori, window grows by one on Z^d)."""
    if coin.d != state.d:
        raise DimensionError(f"coin dimension {coin.d} does not match state dimension {state.d}")
    vals = _step(state.values, coin.entries, state.d, state.on_torus)
    radius = state.radius if state.on_torus else state.radius + 1
    return WalkState(state.d, vals, state.torus, radius, state.step + 1)


def run(state, coin, steps):
    """Yield the states after 1, ..., ``steps`` steps."""
    for _ in range(check_int(steps, "steps", minimum=0)):
        state = evolve(state, coin)
        yield state


def matrix_weight(coin, n, cap=MATRIX_WEIGHT_CAP, torus=None):
    """Matrix weight Phi_n by the recursion
    Phi_{n+1}(x) = sum_j P_{2j-1} A Phi_n(x + e_j) + P_{2j} A Phi_n(x - e_j),
    starting from Phi_0 = I at the origin."""
    n = check_int(n, "n", minimum=0)
    if n > cap:
        raise CapExceededError(f"matrix weights are capped at n <= {cap}, got {n}")
    d, size = coin.d, coin.size
    if torus is not None:
        if torus.d != d:
            raise DimensionError("torus dimension does not match")
        field = np.zeros((torus.N,) * d + (size, size), dtype=complex)
    else:
        field = np.zeros((1,) * d + (size, size), dtype=complex)
    field[(0,) * d] = np.eye(size)
    for _ in range(n):
        field = _step(field, coin.entries, d, torus is not None)
    return MatrixWeightField(d, n, field, torus)


def return_trace(coin, r, cap=MATRIX_WEIGHT_CAP):
    """Tr Phi_r(0) on the lattice."""
    r = check_int(r, "r", minimum=1)
    tr = complex(np.trace(matrix_weight(coin, r, cap).at(np.zeros(coin.d, dtype=int))))
    return tr.real if abs(tr.imag) <= 1e-13 * max(1.0, abs(tr.real)) else tr


def _default_p(coin):
    if coin is None:
        return None
    return {"QW": 2, "RW": 1, "CRW": 1}.get(coin.class_hint)


def measure(state, p=None, coin=None):
    """mu(x) = sum_j |Psi^j(x)|^p, shape (L,)*d.

    ``p`` defaults to 1 for RW/CRW coins and 2 for QW coins.
    """
    if p is None:
        p = _default_p(coin)
        if p is None:
            raise ConfigError("pass p explicitly (1 or 2) for general coins or when no coin is given")
    if p not in (1, 2):
        raise ConfigError(f"p must be 1 or 2, got {p!r}")
    return np.sum(np.abs(state.values) ** p, axis=-1)


def total_measure(state, p=None, coin=None):
    mu = measure(state, p, coin)
    return float(np.sum(mu))


def site_operator(coin, torus):
    """The walk operator on the torus as an explicit 2d N^d square matrix.

    Basis order is site-major (site index in C order, then component).
    """
    if torus.d != coin.d:
        raise DimensionError("torus dimension does not match coin dimension")
    N, d, size = torus.N, coin.d, coin.size
    # (S f)(x) = f(x + e) on the cycle
    S = np.roll(np.eye(N), 1, axis=1)
    eye = np.eye(N)
    total = np.zeros((N**d * size, N**d * size), dtype=complex)
    for j in range(d):
        fwd = np.array([[1.0]])
        bwd = np.array([[1.0]])
        for axis in range(d):
            fwd = np.kron(fwd, S if axis == j else eye)
            bwd = np.kron(bwd, S.T if axis == j else eye)
        lo = np.zeros((size, size))
        lo[2 * j, 2 * j] = 1.0
        hi = np.zeros((size, size))
        hi[2 * j + 1, 2 * j + 1] = 1.0
        total += np.kron(fwd, lo @ coin.entries) + np.kron(bwd, hi @ coin.entries)
    return total


def fold_to_torus(field, N):
    """Sum a lattice matrix-weight field over residues mod N."""
    N = check_int(N, "N", minimum=1)
    d, R = field.d, field.radius
    out = np.zeros((N,) * d + field.values.shape[d:], dtype=complex)
    for idx in np.ndindex(*field.values.shape[:d]):
        site = tuple((i - R) % N for i in idx)
        out[site] += field.values[idx]
    return MatrixWeightField(d, field.n, out, TorusSpec(d, N))


def _site_label(site):
    return ":".join(str(int(c)) for c in site)


def state_csv(state):
    """CSV text with header site,component_index,re,im."""
    lines = ["site,component_index,re,im"]
    flat = state.values.reshape(-1, 2 * state.d)
    for site, vec in zip(state.sites(), flat):
        label = _site_label(site)
        for c, z in enumerate(vec):
            lines.append(f"{label},{c},{z.real + 0.0:.17g},{z.imag + 0.0:.17g}")
    return "\n".join(lines) + "\n"


def measure_csv(state, p=None, coin=None):
    """CSV text with header site,value."""
    mu = measure(state, p, coin).ravel()
    lines = ["site,value"]
    for site, v in zip(state.sites(), mu):
        lines.append(f"{_site_label(site)},{v + 0.0:.17g}")
    return "\n".join(lines) + "\n"
