"""Brute-force reference computations.

These are exponential or dense-matrix versions of quantities the library
computes by faster routes.  They exist so that the verification suite (and
the tests) can compare two independent evaluations.
"""

import cmath
import math
from itertools import product

import numpy as np

from ._validation import check_int, check_real
from .errors import CapExceededError, PoleError
from .simulator import site_operator

__all__ = ["explicit_zeta", "path_sum_weight", "PATH_SUM_CAP"]

PATH_SUM_CAP = 10


def explicit_zeta(coin, torus, u):
    """det(I - u M_A)^(-1/N^d) from the full 2d N^d site matrix.

    The principal branch is used: the argument of the determinant is taken
    in (-pi, pi] before dividing by N^d.
    """
    u = check_real(u, "u")
    M = site_operator(coin, torus)
    det = complex(np.linalg.det(np.eye(M.shape[0]) - u * M))
    if abs(det) < 1e-300:
        raise PoleError(f"det(I - u M_A) vanishes for u={u}")
    n = torus.n_sites
    arg = cmath.phase(det)
    if arg == -math.pi:
        arg = math.pi
    value = cmath.exp(-complex(math.log(abs(det)), arg) / n)
    return value.real if abs(value.imag) <= 1e-13 * max(1.0, abs(value.real)) else value


def path_sum_weight(coin, n, x):
    """Phi_n(x) as the sum over all words in {P_1 A, ..., P_{2d} A} of length n.

    Letter 2j-1 (one-based) moves by -e_j and letter 2j by +e_j; a word
    contributes when its total displacement is x.  Cost is (2d)^n.
    """
    n = check_int(n, "n", minimum=0)
    if n > PATH_SUM_CAP:
        raise CapExceededError(f"path-sum enumeration capped at n <= {PATH_SUM_CAP}")
    d, size = coin.d, coin.size
    x = np.asarray(x, dtype=int).reshape(d)
    letters = []
    for i in range(size):
        P = np.zeros((size, size))
        P[i, i] = 1.0
        move = np.zeros(d, dtype=int)
        move[i // 2] = -1 if i % 2 == 0 else 1
        letters.append((P @ coin.entries, move))
    total = np.zeros((size, size), dtype=complex)
    for word in product(range(size), repeat=n):
        if not np.array_equal(sum((letters[w][1] for w in word), np.zeros(d, dtype=int)), x):
            continue
        mat = np.eye(size, dtype=complex)
        for w in word:
            # later steps multiply on the left
            mat = letters[w][0] @ mat
        total += mat
    return total
