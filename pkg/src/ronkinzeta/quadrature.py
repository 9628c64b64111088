"""Tensor-product periodic trapezoidal rule on [0, 2 pi)^d with node doubling.

The n-node rule on a period is the finite-torus average over K_N with N = n,
so a quadrature value at n nodes *is* the finite-N sum.  For analytic
periodic integrands the error decays geometrically in n; for trigonometric
polynomials of degree < n the rule is exact.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_int, check_real
from .errors import AccuracyError, ConfigError

__all__ = ["QuadratureSpec", "grid_points", "evaluate_on_grid", "refine"]

CHUNK = 1 << 15


@dataclass(frozen=True)
class QuadratureSpec:
    """Node count and stopping tolerance for periodic quadrature.

    ``nodes_per_dim`` is the starting node count; :func:`refine` doubles it
    until two successive values differ by less than ``tolerance``.
    """

    nodes_per_dim: int = 16
    tolerance: float = 1e-11
    max_nodes_per_dim: int = 1 << 16
    max_total_nodes: int = 1 << 22

    def __post_init__(self):
        check_int(self.nodes_per_dim, "nodes_per_dim", minimum=2)
        tol = check_real(self.tolerance, "tolerance")
        if tol <= 0:
            raise ConfigError("tolerance must be positive")
        check_int(self.max_nodes_per_dim, "max_nodes_per_dim", minimum=2)
        check_int(self.max_total_nodes, "max_total_nodes", minimum=2)

    def allows(self, n, d):
        return n <= self.max_nodes_per_dim and n**d <= self.max_total_nodes


def grid_points(n, d, start=0, stop=None):
    """Rows ``start:stop`` of the lexicographic n^d grid of angles 2 pi j / n."""
    total = n**d
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop)
    multi = np.stack(np.unravel_index(idx, (n,) * d), axis=-1) if d > 1 else idx[:, None]
    return 2.0 * np.pi * multi / n


def evaluate_on_grid(func, n, d, chunk=CHUNK):
    """Evaluate ``func`` (points (m, d) -> values (m,)) on the n^d grid.

    Returns an array of shape (n,)*d in lexicographic order.  Chunking keeps
    memory bounded; chunk boundaries do not affect the values.
    """
    total = n**d
    parts = [np.asarray(func(grid_points(n, d, s, s + chunk))) for s in range(0, total, chunk)]
    return np.concatenate(parts).reshape((n,) * d)


def fixed_order_mean(values):
    """Mean with a summation order that depends only on the array shape."""
    flat = np.ravel(values)
    partial = [np.sum(flat[s:s + CHUNK]) for s in range(0, flat.size, CHUNK)]
    total = partial[0]
    for p in partial[1:]:
        total = total + p
    return total / flat.size


def refine(mean_at, d, quad, start=None):
    """Double the node count until successive means agree within tolerance.

    ``mean_at(n)`` returns the n-node quadrature value.  Returns
    ``(value, nodes, delta)`` where ``value`` is the finer of the last two
    values.  Raises :class:`AccuracyError` when the caps are reached first.
    """
    n = quad.nodes_per_dim if start is None else start
    prev = mean_at(n)
    while True:
        n2 = 2 * n
        if not quad.allows(n2, d):
            raise AccuracyError(
                f"quadrature did not reach tolerance {quad.tolerance:g} before the node cap "
                f"(last nodes/dim {n})"
            )
        cur = mean_at(n2)
        delta = abs(cur - prev)
        if delta < quad.tolerance:
            return cur, n2, float(delta)
        prev, n = cur, n2
