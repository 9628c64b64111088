import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ronkinzeta.amoeba import (
    AmoebaResolutionWarning,
    amoeba_complement_components,
    amoeba_slice,
)
from ronkinzeta.errors import ConfigError, UnsupportedDimensionError
from ronkinzeta.laurent import LaurentPolynomial
from ronkinzeta.ronkin import p_rw, p_simplified
from ronkinzeta.svg import amoeba_svg


def direct_slice_logs(P, w1):
    """log|z2| over the roots of P(e^{w1}, z2), from np.roots on the raw terms."""
    c = {-1: 0j, 0: 0j, 1: 0j}
    for (a, b), coef in P.terms.items():
        c[b] += coef.value * np.exp(a * w1)
    return sorted(np.log(np.abs(np.roots([c[1], c[0], c[-1]]))))


def test_rwd2_slice_through_the_origin():
    s = amoeba_slice(p_simplified("RWd", 2), [0.0], [0.0])
    np.testing.assert_allclose(s.points, [[0.0, 0.0], [0.0, 0.0]], atol=1e-7)
    assert s.skipped == 0


def test_rw2_slice_matches_quadratic():
    # at z1 = 1 the equation is z2^2 - (0.55 / 0.225) z2 + 1 = 0
    b = 0.55 / 0.225
    t = math.log((b + math.sqrt(b * b - 4)) / 2)
    s = amoeba_slice(p_rw(2, 0.9), [0.0], [0.0])
    np.testing.assert_allclose(sorted(s.points[:, 1]), [-t, t], atol=1e-13)
    np.testing.assert_allclose(s.points[:, 0], 0.0)


def test_rw1_amoeba_points():
    s = amoeba_slice(p_rw(1, 0.5))
    t = math.log(2 + math.sqrt(3))
    np.testing.assert_allclose(sorted(s.points[:, 0]), [-t, t], atol=1e-13)


def test_slice_rejects_other_shapes():
    with pytest.raises(ConfigError):
        amoeba_slice(LaurentPolynomial(1, {2: 1.0, 0: 1.0}))
    with pytest.raises(UnsupportedDimensionError):
        amoeba_slice(p_rw(3, 0.5), [0.0], [0.0])


def test_vanishing_lead_is_skipped():
    # the z2 coefficient is 1 + z1, which vanishes at z1 = -1
    P = LaurentPolynomial(2, {(0, 1): 1.0, (1, 1): 1.0, (0, -1): 1.0, (0, 0): 3.0})
    s = amoeba_slice(P, [0.0], [0.0, math.pi])
    assert s.skipped == 1 and len(s.points) == 2


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(0, 2 * math.pi), st.floats(0.1, 1.0))
def test_slice_roots_against_direct_roots(x1, th1, u):
    P = p_rw(2, u)
    got = sorted(amoeba_slice(P, [x1], [th1]).points[:, 1])
    np.testing.assert_allclose(got, direct_slice_logs(P, complex(x1, th1)), atol=1e-9)


def test_rw2_has_five_components():
    r = amoeba_complement_components(p_rw(2, 0.9), resolution=300)
    assert r.count == 5
    assert r.fpt_bounds == (4, 5)
    centre = r.component_at((0.0, 0.0))
    assert centre.bounded
    np.testing.assert_allclose(centre.gradient, [0, 0], atol=1e-3)
    outer = {tuple(np.round(c.gradient).astype(int)) for c in r.components if not c.bounded}
    assert outer == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert r.warning == ""


def test_monomial_amoeba_is_empty():
    r = amoeba_complement_components(LaurentPolynomial(2, {(1, -1): 2.0}), resolution=20)
    assert r.count == 1 and not r.membership.any()
    np.testing.assert_allclose(r.components[0].gradient, [1, -1], atol=1e-6)


def test_coarse_raster_warns():
    # a small box around the bounded component alone leaves no outer components
    with pytest.warns(AmoebaResolutionWarning):
        amoeba_complement_components(p_rw(2, 0.9), box=(-0.5, 0.5), resolution=16, gradients=False)


def test_box_validation():
    with pytest.raises(ConfigError):
        amoeba_complement_components(p_rw(2, 0.9), box=(1.0, -1.0))
    with pytest.raises(UnsupportedDimensionError):
        amoeba_complement_components(p_rw(1, 0.5))


def test_outputs_are_deterministic():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AmoebaResolutionWarning)
        a = amoeba_complement_components(p_rw(2, 0.9), resolution=60, gradients=False)
        b = amoeba_complement_components(p_rw(2, 0.9), resolution=60, gradients=False)
    assert a.to_pgm() == b.to_pgm()
    # NaN gradients (gradients=False) only compare equal once serialised
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert amoeba_svg(a) == amoeba_svg(b)
    pgm = a.to_pgm().splitlines()
    assert pgm[:3] == ["P2", "60 60", "255"] and len(pgm) == 63
    assert amoeba_svg(a).startswith("<svg")
