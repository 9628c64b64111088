import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ronkinzeta.closed_forms import qw_log_zeta_closed
from ronkinzeta.errors import ConfigError, DomainError
from ronkinzeta.oracles import explicit_zeta
from ronkinzeta.walk import CoinMatrix, TorusSpec, qw_coin, rw_coin
from ronkinzeta.zeta import (
    admissible_u_range,
    c_r_finite,
    c_r_limit,
    c_r_sequence,
    finite_zeta,
    log_zeta,
    series_log_zeta,
)

from test_walk import random_unitary

HADAMARD = qw_coin(math.pi / 4)


def rw_closed(u):
    return math.log((1 + math.sqrt(1 - u * u)) / 2)


@pytest.mark.parametrize("coin", [rw_coin(1), rw_coin(2), HADAMARD])
def test_finite_zeta_at_u_zero(coin):
    assert finite_zeta(coin, TorusSpec(coin.d, 3), 0.0).value == 1.0


def test_finite_zeta_two_point_torus():
    # momenta {0, pi}: determinants 1 - u and 1 + u
    assert abs(finite_zeta(rw_coin(1), TorusSpec(1, 2), 0.5).value - 0.75 ** -0.5) < 1e-15


def test_finite_zeta_hadamard_against_site_matrix():
    torus = TorusSpec(1, 3)
    assert abs(finite_zeta(HADAMARD, torus, -0.3).value - explicit_zeta(HADAMARD, torus, -0.3)) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2), st.integers(1, 4), st.integers(0, 10_000), st.sampled_from([0.3, -0.3, 0.5, -0.5, 0.8]))
def test_finite_zeta_matches_site_matrix(d, N, seed, u):
    coin = CoinMatrix(d, random_unitary(d, seed), "MF"[seed % 2], "QW")
    torus = TorusSpec(d, N)
    ref = explicit_zeta(coin, torus, u)
    assert abs(finite_zeta(coin, torus, u).value - ref) < 1e-9 * max(1.0, abs(ref))


def test_large_torus_approaches_log_zeta():
    u = 0.5
    z = finite_zeta(rw_coin(1), TorusSpec(1, 64), u).value
    assert abs(-math.log(z) - log_zeta(rw_coin(1), u).value) < 1e-12


def test_log_zeta_rw():
    assert abs(log_zeta(rw_coin(1), 0.5).value - rw_closed(0.5)) < 1e-8
    assert abs(log_zeta(rw_coin(1), 0.5).value - -0.06933) < 1e-5


def test_log_zeta_hadamard():
    value = log_zeta(HADAMARD, -0.5).value
    assert abs(value - math.log((0.75 + math.sqrt(1.0625)) / 2)) < 1e-10
    assert abs(value - -0.11610) < 1e-5


@pytest.mark.parametrize("coin", [rw_coin(1), HADAMARD, qw_coin(0.3, "F")])
def test_log_zeta_at_u_zero(coin):
    assert log_zeta(coin, 0.0).value == 0.0


def test_log_zeta_domains():
    with pytest.raises(DomainError):
        log_zeta(rw_coin(1), 1.0)
    with pytest.raises(DomainError):
        log_zeta(HADAMARD, 0.2)
    with pytest.raises(DomainError):
        log_zeta(qw_coin(0.5, "F"), 0.1)
    lo, hi = admissible_u_range(HADAMARD)
    assert abs(lo - (math.sqrt(2) / 2 - math.sqrt(1.5))) < 1e-15 and hi == 0.0
    assert admissible_u_range(CoinMatrix(1, random_unitary(1, 0), "M", "QW")) is None


def test_log_zeta_general_coin_positivity_check():
    # a general coin whose determinant has winding number one on the circle
    coin = CoinMatrix(1, [[2.0, 0.0], [0.0, 0.0]])
    with pytest.raises(DomainError):
        log_zeta(coin, 1.0)


def test_c_r_finite_examples():
    assert abs(c_r_finite(rw_coin(1), TorusSpec(1, 4), 1)) < 1e-15
    assert abs(c_r_finite(rw_coin(1), TorusSpec(1, 8), 2) - 0.5) < 1e-15
    with pytest.raises(ConfigError):
        c_r_finite(rw_coin(1), TorusSpec(1, 4), 0)


def test_c_r_of_momentum_independent_trace():
    # zero diagonal: Tr M(k) = 0 and Tr M(k)^2 = 2 a12 a21 for every k
    swap = CoinMatrix(1, [[0, 1], [1, 0]])
    assert c_r_finite(swap, TorusSpec(1, 5), 1) == 0
    assert abs(c_r_finite(swap, TorusSpec(1, 5), 2) - 2) < 1e-14
    assert abs(c_r_limit(swap, 2) - 2) < 1e-14


def test_c_r_limit_values():
    assert abs(c_r_limit(rw_coin(1), 2) - 0.5) < 1e-15
    assert abs(c_r_limit(rw_coin(1), 4) - 3 / 8) < 1e-15
    assert abs(c_r_limit(HADAMARD, 2) - 1) < 1e-14
    assert abs(c_r_limit(HADAMARD, 4) + 0.5) < 1e-14


@pytest.mark.parametrize("xi", [0.2, math.pi / 4, 1.2])
@pytest.mark.parametrize("shift", ["M", "F"])
def test_odd_c_r_vanish_for_qw(xi, shift):
    cs = c_r_sequence(qw_coin(xi, shift), 11)
    assert max(abs(c) for c in cs[0::2]) < 1e-14


def test_series_log_zeta():
    assert abs(series_log_zeta(rw_coin(1), 0.5, 40).value - log_zeta(rw_coin(1), 0.5).value) < 1e-8
    s = series_log_zeta(HADAMARD, -0.3, 60)
    assert abs(s.value - qw_log_zeta_closed(math.pi / 4, -0.3)) < 1e-8
    assert series_log_zeta(rw_coin(2), 0.0, 10).value == 0.0
