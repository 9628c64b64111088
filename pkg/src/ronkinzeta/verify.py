"""The invariant suite behind ``ronkinzeta verify``.

Each check has a stable identifier ``module.name`` and returns whether it
passed plus the worst deviation seen.  Checks use reduced sample sizes so
that the whole suite runs in well under a minute.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .amoeba import amoeba_complement_components
from .closed_forms import qw_c2l, qw_log_zeta_closed, qw_u_lower_bound, rw_log_series, rw_log_zeta_closed
from .errors import RonkinZetaError
from .oracles import explicit_zeta, path_sum_weight
from .polytope import direction_polytope, newton_polytope, perpendicularity_check, valid_signed_sets
from .quadrature import QuadratureSpec
from .ronkin import correspondence_check, p_qw, p_rw, p_simplified, qw_ronkin_closed, ronkin_eval
from .simulator import delta_state, fold_to_torus, matrix_weight, return_trace, run, total_measure
from .tropical import direction_graph, duality_check, trop_hypersurface, tropicalize
from .walk import CoinMatrix, TorusSpec, char_det, momentum_eigenvalues, qw_coin, rw_coin, to_flip_flop, to_moving
from .zeta import c_r_finite, c_r_limit, finite_zeta, log_zeta

__all__ = ["CheckResult", "CHECKS", "run_checks", "random_qw_coin", "random_rw_like_coin"]

XIS = (math.pi / 6, math.pi / 4, math.pi / 3)


@dataclass(frozen=True)
class CheckResult:
    id: str
    passed: bool
    worst: float
    detail: str = ""


def random_qw_coin(d, rng, shift="M"):
    """Haar-like random unitary coin from a QR decomposition."""
    z = rng.normal(size=(2 * d, 2 * d)) + 1j * rng.normal(size=(2 * d, 2 * d))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return CoinMatrix(d, q, shift, "QW")


def random_rw_like_coin(d, rng, shift="M"):
    """Random column-stochastic (CRW) coin."""
    a = rng.uniform(0.05, 1.0, size=(2 * d, 2 * d))
    return CoinMatrix(d, a / a.sum(axis=0), shift, "CRW")


def _walk_eigen_product():
    rng = np.random.default_rng(11)
    worst = 0.0
    for d in (1, 2):
        for coin in (random_qw_coin(d, rng), random_rw_like_coin(d, rng), rw_coin(d)):
            for _ in range(5):
                k = rng.uniform(0, 2 * math.pi, d)
                u = rng.uniform(-0.9, 0.9)
                lam = momentum_eigenvalues(coin, k)
                worst = max(worst, abs(np.prod(1 - u * lam) - char_det(coin, k, u)))
    return worst < 1e-10, worst


def _walk_qw_unimodular():
    rng = np.random.default_rng(12)
    worst = 0.0
    for d in (1, 2):
        coin = random_qw_coin(d, rng)
        for _ in range(5):
            lam = momentum_eigenvalues(coin, rng.uniform(0, 2 * math.pi, d))
            worst = max(worst, float(np.max(np.abs(np.abs(lam) - 1))), abs(abs(np.prod(lam)) - 1))
    return worst < 1e-10, worst


def _walk_flip_flop_involution():
    rng = np.random.default_rng(13)
    worst = 0.0
    for d in (1, 2, 3):
        coin = random_qw_coin(d, rng)
        back = to_moving(to_flip_flop(coin))
        worst = max(worst, float(np.max(np.abs(back.entries - coin.entries))))
    return worst == 0.0, worst


def _walk_char_det_polynomial():
    rng = np.random.default_rng(14)
    worst = 0.0
    for d in (1, 2):
        coin = random_qw_coin(d, rng)
        k = rng.uniform(0, 2 * math.pi, d)
        us = np.linspace(-1, 1, 2 * d + 3)
        vals = np.array([char_det(coin, k, u) for u in us])
        coef = np.polynomial.polynomial.polyfit(us, vals, 2 * d + 2)
        worst = max(worst, abs(coef[0] - 1), float(np.max(np.abs(coef[2 * d + 1:]))))
    return worst < 1e-9, worst


def _zeta_finite_vs_explicit():
    rng = np.random.default_rng(21)
    worst = 0.0
    for d, N in ((1, 3), (2, 2)):
        for coin in (random_qw_coin(d, rng), rw_coin(d)):
            for u in (0.3, -0.5):
                diff = abs(finite_zeta(coin, TorusSpec(d, N), u).value - explicit_zeta(coin, TorusSpec(d, N), u))
                worst = max(worst, diff)
    return worst < 1e-9, worst


def _zeta_u_zero():
    coin = rw_coin(2)
    a = finite_zeta(coin, TorusSpec(2, 3), 0.0).value
    b = log_zeta(coin, 0.0).value
    ok = a == 1.0 and b == 0.0
    return ok, max(abs(a - 1.0), abs(b))


def _zeta_cr_exact():
    worst = 0.0
    for coin in (rw_coin(1), qw_coin(math.pi / 5)):
        for r in range(1, 7):
            worst = max(worst, abs(c_r_finite(coin, TorusSpec(1, r + 1), r) - c_r_limit(coin, r)))
    return worst < 1e-12, worst


def _closed_qw_log_zeta():
    worst = 0.0
    for xi in XIS:
        lo = qw_u_lower_bound(xi)
        for shift, us in (("M", (0.5 * lo, 0.9 * lo)), ("F", (-0.4, -1.5))):
            for u in us:
                worst = max(worst, abs(log_zeta(qw_coin(xi, shift), u).value - qw_log_zeta_closed(xi, u, shift)))
    return worst < 1e-8, worst


def _closed_rw_series():
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for u in (-0.5, 0.3, 0.9):
            closed = rw_log_zeta_closed(1, u)
            series = -math.fsum(rw_log_series(1, u, 60))
            quad = log_zeta(rw_coin(1), u).value
            worst = max(worst, abs(closed - series), abs(closed - quad))
            worst = max(worst, abs(rw_log_zeta_closed(2, u) - log_zeta(rw_coin(2), u).value))
    return worst < 1e-7, worst


def _closed_c2l_chain():
    worst = 0.0
    for xi in XIS:
        for shift in ("M", "F"):
            coin = qw_coin(xi, shift)
            for l in range(1, 6):
                a = qw_c2l(xi, l, shift)
                worst = max(worst, abs(a - c_r_limit(coin, 2 * l)), abs(a - return_trace(coin, 2 * l)))
            worst = max(worst, abs(c_r_limit(coin, 3)), abs(return_trace(coin, 3)))
    return worst < 1e-9, worst


def _ronkin_correspondence():
    worst = 0.0
    for d in (1, 2):
        for u in (0.5, -0.9):
            worst = max(worst, correspondence_check("rw", {"d": d}, u).difference)
    for xi in XIS:
        worst = max(worst, correspondence_check("qw-m", {"xi": xi}, 0.5 * qw_u_lower_bound(xi)).difference)
        worst = max(worst, correspondence_check("qw-f", {"xi": xi}, -0.7).difference)
    return worst < 1e-7, worst


def _ronkin_qw_closed():
    worst = 0.0
    for xi in XIS:
        for u in (-0.3, 0.6):
            worst = max(worst, abs(qw_ronkin_closed(xi, u) - ronkin_eval(p_qw(xi, u, "M"), [0.0]).value))
    return worst < 1e-10, worst


def _ronkin_convexity():
    rng = np.random.default_rng(31)
    P = p_rw(2, 0.9)
    quad = QuadratureSpec(tolerance=1e-10)
    worst = 0.0
    for _ in range(40):
        a, b = rng.uniform(-2.5, 2.5, (2, 2))
        mid = ronkin_eval(P, 0.5 * (a + b), quad).value
        chord = 0.5 * (ronkin_eval(P, a, quad).value + ronkin_eval(P, b, quad).value)
        worst = max(worst, mid - chord)
    return worst < 1e-8, max(worst, 0.0)


def _trop_newton_direction():
    polys = [p_simplified("RWd", d) for d in (1, 2, 3)] + [p_simplified("QWm", 0.7), p_simplified("QWf", 0.7)]
    ok = all(newton_polytope(P) == direction_polytope(P.k) for P in polys)
    return ok, 0.0 if ok else 1.0


def _trop_direction_graph():
    ok = all(trop_hypersurface(tropicalize(p_simplified("RWd", d))) == direction_graph(d) for d in (1, 2, 3))
    return ok, 0.0 if ok else 1.0


def _trop_cone_membership():
    rep = duality_check(p_rw(2, 0.9), samples=2500)
    return rep.passed, float(rep.mismatches + rep.cone_failures)


def _trop_perpendicularity():
    worst = 0.0
    ok = True
    for d in (1, 2, 3):
        for S in valid_signed_sets(d):
            good, w = perpendicularity_check(S, d, return_max=True)
            ok = ok and good
            worst = max(worst, w)
    return ok, worst


def _amoeba_components():
    raster = amoeba_complement_components(p_rw(2, 0.9), (-3, 3), 300)
    origin = raster.component_at((0.0, 0.0))
    lo, hi = raster.fpt_bounds
    ok = raster.count == 5 and lo <= raster.count <= hi and origin is not None and origin.bounded
    worst = float(np.max(np.abs(origin.gradient))) if origin is not None else math.inf
    return ok and worst < 1e-3, worst


def _sim_conservation():
    rng = np.random.default_rng(41)
    worst = 0.0
    for d in (1, 2):
        for coin, vec in ((rw_coin(d), np.full(2 * d, 1 / (2 * d))), (random_qw_coin(d, rng), np.eye(2 * d)[0])):
            state = delta_state(d, vec)
            for state in run(state, coin, 20):
                pass
            worst = max(worst, abs(total_measure(state, coin=coin) - 1.0))
    return worst < 1e-12, worst


def _sim_path_sum():
    worst = 0.0
    for shift in ("M", "F"):
        coin = qw_coin(0.6, shift)
        for n in range(7):
            field = matrix_weight(coin, n)
            for x in range(-n, n + 1):
                worst = max(worst, float(np.max(np.abs(field.at([x]) - path_sum_weight(coin, n, [x])))))
    return worst < 1e-12, worst


def _sim_trace_bridge():
    worst = 0.0
    coins = [rw_coin(1), rw_coin(2)] + [qw_coin(xi, s) for xi in XIS for s in ("M", "F")]
    for coin in coins:
        for r in range(1, 11 if coin.d == 1 else 7):
            worst = max(worst, abs(return_trace(coin, r) - c_r_limit(coin, r)))
    return worst < 1e-10, worst


def _sim_torus_fold():
    rng = np.random.default_rng(42)
    coin = random_qw_coin(2, rng)
    n = 3
    folded = fold_to_torus(matrix_weight(coin, n), 2 * n + 1)
    direct = matrix_weight(coin, n, torus=TorusSpec(2, 2 * n + 1))
    worst = float(np.max(np.abs(folded.values - direct.values)))
    return worst < 1e-12, worst


CHECKS = {
    "walk.eigen_product": _walk_eigen_product,
    "walk.qw_unimodular": _walk_qw_unimodular,
    "walk.flip_flop_involution": _walk_flip_flop_involution,
    "walk.char_det_polynomial": _walk_char_det_polynomial,
    "zeta.finite_vs_explicit": _zeta_finite_vs_explicit,
    "zeta.u_zero": _zeta_u_zero,
    "zeta.cr_exact_rule": _zeta_cr_exact,
    "closed.qw_log_zeta": _closed_qw_log_zeta,
    "closed.rw_series": _closed_rw_series,
    "closed.c2l_chain": _closed_c2l_chain,
    "ronkin.correspondence": _ronkin_correspondence,
    "ronkin.qw_closed": _ronkin_qw_closed,
    "ronkin.convexity": _ronkin_convexity,
    "tropical.newton_direction": _trop_newton_direction,
    "tropical.direction_graph": _trop_direction_graph,
    "tropical.cone_membership": _trop_cone_membership,
    "tropical.perpendicularity": _trop_perpendicularity,
    "amoeba.components": _amoeba_components,
    "sim.conservation": _sim_conservation,
    "sim.path_sum": _sim_path_sum,
    "sim.trace_bridge": _sim_trace_bridge,
    "sim.torus_fold": _sim_torus_fold,
}


def run_checks(ids=None, map_fn=map):
    """Run the selected checks (all by default) and return their results in order.

    ``map_fn`` may be an ordered parallel map; results keep the order of ``ids``.
    """
    ids = list(CHECKS) if ids is None else list(ids)
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check ids: {unknown}")

    def one(cid):
        try:
            ok, worst = CHECKS[cid]()
            return CheckResult(cid, bool(ok), float(worst))
        except RonkinZetaError as exc:
            return CheckResult(cid, False, math.inf, f"{type(exc).__name__}: {exc}")

    return list(map_fn(one, ids))
