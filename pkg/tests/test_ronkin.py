import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate

from ronkinzeta.errors import ConfigError, DegeneracyError
from ronkinzeta.laurent import LaurentPolynomial
from ronkinzeta.quadrature import QuadratureSpec
from ronkinzeta.ronkin import (
    correspondence_check,
    p_qw,
    p_rw,
    p_simplified,
    qw_ronkin_closed,
    ronkin_eval,
    ronkin_gradient,
)

LOG_BRANCH = math.log(2 + math.sqrt(3))


def mean_log_abs_shifted_cos(a):
    """(1/2pi) int log|a - cos t| dt."""
    a = abs(a)
    return math.log((a + math.sqrt(a * a - 1)) / 2) if a >= 1 else -math.log(2)


def rw1_oracle(u, x):
    # P(e^{x + it}) = 1 - (u/2)(e^{x+it} + e^{-x-it}); for x = 0 this is 1 - u cos t
    assert x == 0.0
    if u == 0:
        return 0.0
    return math.log(abs(u)) + mean_log_abs_shifted_cos(1 / u)


def scipy_ronkin_1d(P, x):
    f = lambda t: math.log(abs(P.on_torus([x], np.array([[t]]))[0]))
    val, _ = integrate.quad(f, 0, 2 * math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val / (2 * math.pi)


def scipy_ronkin_2d(P, x):
    f = lambda t2, t1: math.log(abs(P.on_torus(x, np.array([[t1, t2]]))[0]))
    val, _ = integrate.dblquad(f, 0, 2 * math.pi, 0, 2 * math.pi, epsabs=1e-11, epsrel=1e-11)
    return val / (4 * math.pi**2)


@pytest.mark.parametrize("c", [1.0, 2.5, -0.3j])
def test_constant_polynomial(c):
    P = LaurentPolynomial(2, {(0, 0): c})
    assert abs(ronkin_eval(P, [0.7, -1.2]).value - math.log(abs(c))) < 1e-15


def test_monomial_is_linear():
    P = LaurentPolynomial(2, {(2, -1): 3.0})
    assert abs(ronkin_eval(P, [0.5, 0.25]).value - (math.log(3) + 1 - 0.25)) < 1e-14


@pytest.mark.parametrize("u", [0.5, 0.9, -0.7, 1.5, -3.0])
def test_rw1_at_origin(u):
    assert abs(ronkin_eval(p_rw(1, u), [0.0]).value - rw1_oracle(u, 0.0)) < 1e-12


def test_rw1_examples():
    assert abs(ronkin_eval(p_rw(1, 0.5), [0.0]).value - -0.06933) < 1e-5
    # x = log 3 lies in the middle complement component, where R is flat
    assert abs(ronkin_eval(p_rw(1, 0.5), [math.log(3)]).value - ronkin_eval(p_rw(1, 0.5), [0.0]).value) < 1e-12
    # the log(3/4) value belongs to u = 1.5 at the origin
    assert abs(ronkin_eval(p_rw(1, 1.5), [0.0]).value - math.log(0.75)) < 1e-12


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@given(st.floats(-3, 3), st.floats(-2, 2))
def test_one_variable_against_scipy(x, u):
    P = p_rw(1, u)
    if abs(abs(x) - math.acosh(2 / abs(u)) if abs(u) > 1e-3 else 1) < 1e-3:
        return
    assert abs(ronkin_eval(P, [x]).value - scipy_ronkin_1d(P, x)) < 1e-9


@pytest.mark.parametrize("x", [(0.0, 0.0), (2.0, -0.5), (-1.5, 2.5)])
def test_two_variables_against_scipy(x):
    P = p_rw(2, 0.9)
    assert abs(ronkin_eval(P, list(x)).value - scipy_ronkin_2d(P, x)) < 1e-8


def amoeba_distance(P, x1, x2, n=2000):
    """Smallest |log|z2| - x2| over roots of P(e^{x1 + i t}, z2) on a grid of t."""
    w = x1 + 1j * np.linspace(0, 2 * math.pi, n, endpoint=False)
    c = {b: np.zeros(n, complex) for b in (-1, 0, 1)}
    for (a, b), coef in P.terms.items():
        c[b] += coef.value * np.exp(a * w)
    return min(np.min(np.abs(np.log(np.abs(np.roots([c[1][i], c[0][i], c[-1][i]]))) - x2)) for i in range(n))


@settings(max_examples=15, deadline=None)
@given(st.floats(-2.5, 2.5), st.floats(-2.5, 2.5))
def test_tensor_and_jensen_routes_agree(x1, x2):
    P = p_rw(2, 0.9)
    # on or near the amoeba the integrand has a log singularity and the tensor trapezoid stalls
    assume(amoeba_distance(P, x1, x2) > 0.05)
    a = ronkin_eval(P, [x1, x2])
    b = ronkin_eval(P, [x1, x2], QuadratureSpec(tolerance=1e-7), method="tensor")
    assert abs(a.value - b.value) < 1e-5


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_midpoint_convexity(c):
    P = p_rw(2, 0.9)
    a, b = np.array(c[:2]), np.array(c[2:])
    mid = ronkin_eval(P, (a + b) / 2).value
    assert mid <= (ronkin_eval(P, a).value + ronkin_eval(P, b).value) / 2 + 1e-8


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_symmetry_of_rw2(x1, x2):
    P = p_rw(2, 0.6)
    r = ronkin_eval(P, [x1, x2]).value
    for y in ([-x1, x2], [x2, x1], [-x2, -x1]):
        assert abs(ronkin_eval(P, y).value - r) < 1e-10


def test_symmetry_of_rw3_on_the_amoeba():
    # the two orderings put different variables in the exact inner solve
    P = p_rw(3, 0.9)
    a = ronkin_eval(P, [0.9, -0.1, 0.6])
    b = ronkin_eval(P, [-0.6, 0.1, 0.9])
    assert a.singular_flag and b.singular_flag
    assert abs(a.value - b.value) < 1e-9


def test_gradients_match_newton_vertices():
    P = p_rw(2, 0.9)
    for x, v in (([2.5, 0], [1, 0]), ([0, -2.5], [0, -1]), ([0, 0], [0, 0])):
        np.testing.assert_allclose(ronkin_gradient(P, x), v, atol=1e-6)
    np.testing.assert_allclose(ronkin_gradient(p_rw(1, 0.5), [-2.0]), [-1], atol=1e-8)


def test_singular_flag_on_amoeba():
    P = p_rw(1, 0.5)
    assert ronkin_eval(P, [LOG_BRANCH]).singular_flag
    assert not ronkin_eval(P, [0.0]).singular_flag


def test_p_rw_terms():
    assert p_rw(1, 1.0).terms == LaurentPolynomial(1, {0: 1, 1: -0.5, -1: -0.5}).terms
    P2 = p_rw(2, 1.0)
    assert len(P2) == 5
    assert P2 == LaurentPolynomial(2, {(0, 0): 1, (1, 0): -0.25, (-1, 0): -0.25, (0, 1): -0.25, (0, -1): -0.25})
    assert p_rw(3, 0.0) == LaurentPolynomial(3, {(0, 0, 0): 1.0})


def test_p_qw_terms():
    c = math.sqrt(2) / 4
    M = p_qw(math.pi / 4, -0.5, "M")
    assert {e[0]: complex(v.value) for e, v in M.terms.items()} == pytest.approx({1: c, -1: -c, 0: 0.75})
    F = p_qw(math.pi / 4, -0.5, "F")
    assert {e[0]: complex(v.value) for e, v in F.terms.items()} == pytest.approx({1: c, -1: c, 0: 1.25})
    assert p_qw(0.3, 0.0, "F") == LaurentPolynomial(1, {0: 1.0})


def test_p_simplified():
    assert p_simplified("RWd", 2) == LaurentPolynomial(2, {(1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1, (0, 0): -4})
    m = p_simplified("QWm", math.pi / 4)
    assert m.terms[(0,)].value == pytest.approx(-math.sqrt(2))
    f = p_simplified("QWf", math.pi / 3)
    assert f.terms[(0,)].value == pytest.approx(-2 / math.sqrt(3))
    with pytest.raises(DegeneracyError):
        p_simplified("QWm", math.pi / 2)
    with pytest.raises(ConfigError):
        p_simplified("XX", 1)


def test_qw_ronkin_closed():
    assert abs(qw_ronkin_closed(math.pi / 4, -0.5) - -0.11610) < 1e-5
    assert qw_ronkin_closed(0.4, 0.0) == 0.0
    u = 0.4
    a = 1 - 2 * 0.75 * u * u + u**4
    b = 2 * 0.25 * u * u
    closed = 0.5 * math.log((a + math.sqrt(a * a - b * b)) / 2)
    assert abs(qw_ronkin_closed(math.pi / 3, u) - closed) < 1e-15
    assert abs(closed - ronkin_eval(p_qw(math.pi / 3, u, "M"), [0.0]).value) < 1e-8


def test_correspondence_examples():
    assert correspondence_check("rw", {"d": 1}, 0.5).difference < 1e-8
    assert correspondence_check("rw", {"d": 2}, 0.9).difference < 1e-7
    assert correspondence_check("qw-m", {"xi": math.pi / 4}, -0.5).difference < 1e-8
    with pytest.raises(ConfigError):
        correspondence_check("qw-m", {}, -0.5)
