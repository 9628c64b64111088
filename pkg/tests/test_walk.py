import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ronkinzeta.errors import ConfigError, DimensionError, StateError
from ronkinzeta.walk import (
    CoinMatrix,
    TorusSpec,
    build_momentum_matrix,
    char_det,
    momentum_eigenvalues,
    qw_coin,
    rw_coin,
    to_flip_flop,
    to_moving,
)

R2 = math.sqrt(2) / 2


def random_unitary(d, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(2 * d, 2 * d)) + 1j * rng.normal(size=(2 * d, 2 * d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_hadamard_coin():
    np.testing.assert_allclose(qw_coin(math.pi / 4).entries, [[R2, R2], [R2, -R2]], atol=1e-15)


def test_qw_coin_at_zero_angle():
    np.testing.assert_array_equal(qw_coin(0.0).entries, [[1, 0], [0, -1]])


def test_flip_flop_hadamard_swaps_rows():
    np.testing.assert_allclose(qw_coin(math.pi / 4, "F").entries, [[R2, -R2], [R2, R2]], atol=1e-15)


@pytest.mark.parametrize("d", [1, 2])
def test_rw_coin_is_uniform(d):
    np.testing.assert_array_equal(rw_coin(d).entries, np.full((2 * d, 2 * d), 1 / (2 * d)))


def test_rw_coin_columns_sum_to_one():
    np.testing.assert_allclose(rw_coin(3).entries.sum(axis=0), np.ones(6), atol=1e-15)


def test_flip_flop_swaps_rows_of_general_coin():
    a = np.array([[0.1, 0.2], [0.3, 0.4]])
    f = to_flip_flop(CoinMatrix(1, a))
    np.testing.assert_array_equal(f.entries, a[::-1])
    assert f.shift_type == "F"


def test_flip_flop_of_identity():
    np.testing.assert_array_equal(to_flip_flop(CoinMatrix(1, np.eye(2))).entries, [[0, 1], [1, 0]])
    sigma = np.array([[0, 1], [1, 0]])
    np.testing.assert_array_equal(to_flip_flop(CoinMatrix(2, np.eye(4))).entries, np.kron(np.eye(2), sigma))


def test_flip_flop_twice_raises():
    with pytest.raises(StateError):
        to_flip_flop(qw_coin(0.3, "F"))
    with pytest.raises(StateError):
        to_moving(qw_coin(0.3, "M"))


@given(st.integers(1, 3), st.integers(0, 10_000))
def test_flip_flop_is_an_involution(d, seed):
    coin = CoinMatrix(d, random_unitary(d, seed), "M", "QW")
    np.testing.assert_array_equal(to_moving(to_flip_flop(coin)).entries, coin.entries)


def test_momentum_matrix_at_zero_is_the_coin():
    coin = CoinMatrix(2, random_unitary(2, 1), "M", "QW")
    np.testing.assert_allclose(build_momentum_matrix(coin, [0, 0]).matrix, coin.entries)


@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_momentum_matrix_in_one_dimension(theta, xi):
    a = qw_coin(xi).entries
    expected = np.array([[np.exp(1j * theta) * a[0, 0], np.exp(1j * theta) * a[0, 1]],
                         [np.exp(-1j * theta) * a[1, 0], np.exp(-1j * theta) * a[1, 1]]])
    np.testing.assert_allclose(build_momentum_matrix(qw_coin(xi), [theta]).matrix, expected, atol=1e-15)


def test_hadamard_momentum_matrix_at_quarter_turn():
    m = build_momentum_matrix(qw_coin(math.pi / 4), [math.pi / 2]).matrix
    np.testing.assert_allclose(m, [[1j * R2, 1j * R2], [-1j * R2, 1j * R2]], atol=1e-15)


def test_char_det_at_u_zero():
    assert char_det(CoinMatrix(2, random_unitary(2, 3), "F", "QW"), [0.4, 1.1], 0.0) == 1.0


@given(st.floats(0.01, 1.5), st.floats(0, 2 * math.pi), st.floats(-0.99, 0.99))
def test_char_det_of_qw_m_type(xi, w, u):
    expected = 1 - 2j * math.cos(xi) * math.sin(w) * u - u * u
    assert abs(char_det(qw_coin(xi), [w], u) - expected) < 1e-13


@given(st.floats(0, 2 * math.pi), st.floats(-0.99, 0.99))
def test_char_det_of_rw(k, u):
    assert abs(char_det(rw_coin(1), [k], u) - (1 - u * math.cos(k))) < 1e-13


@settings(max_examples=40)
@given(st.integers(1, 2), st.integers(0, 10_000), st.floats(-0.95, 0.95))
def test_char_det_is_product_over_eigenvalues(d, seed, u):
    rng = np.random.default_rng(seed)
    coin = CoinMatrix(d, random_unitary(d, seed), "MF"[seed % 2], "QW")
    k = rng.uniform(0, 2 * math.pi, d)
    lam = momentum_eigenvalues(coin, k)
    assert abs(np.prod(1 - u * lam) - char_det(coin, k, u)) < 1e-12
    # unitary coins give unimodular eigenvalues
    np.testing.assert_allclose(np.abs(lam), 1.0, atol=1e-12)


def test_coin_validation():
    with pytest.raises(DimensionError):
        CoinMatrix(2, np.eye(2))
    with pytest.raises(ConfigError):
        CoinMatrix(1, [[1, 1], [0, 1]], class_hint="QW")
    with pytest.raises(ConfigError):
        CoinMatrix(1, [[0.5, 0.2], [0.5, 0.8]], class_hint="RW")
    with pytest.raises(ConfigError):
        CoinMatrix(1, [[0.5, 0.2], [0.6, 0.8]], class_hint="CRW")
    with pytest.raises(ConfigError):
        CoinMatrix(1, np.eye(2), shift_type="X")
    CoinMatrix(1, [[0.5, 0.2], [0.5, 0.8]], class_hint="CRW")


def test_coin_json_round_trip():
    coin = CoinMatrix(1, qw_coin(0.7).entries * 1j, "F", "QW")
    back = CoinMatrix.from_json(coin.to_json())
    np.testing.assert_array_equal(back.entries, coin.entries)
    assert (back.shift_type, back.class_hint) == ("F", "QW")
    with pytest.raises(ConfigError):
        CoinMatrix.from_json({"d": 1})


def test_torus_momenta():
    t = TorusSpec(2, 3)
    assert t.n_sites == 9
    assert t.momenta().shape == (9, 2)
    np.testing.assert_allclose(t.momenta()[5], [2 * np.pi / 3, 4 * np.pi / 3])
    with pytest.raises(ConfigError):
        TorusSpec(1, 0)
