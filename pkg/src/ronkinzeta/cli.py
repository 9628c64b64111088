"""Command-line interface: ``ronkinzeta <command> [--flags]``.

Every command writes one text artifact (CSV, JSON, SVG or PGM) to ``--out``
or standard output.  Errors are a single JSON line on standard error with
exit code 2 (configuration), 3 (domain) or 4 (accuracy).  Warnings are
reported the same way but do not change the exit code.
"""

import argparse
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .amoeba import amoeba_complement_components, amoeba_slice
from .closed_forms import qw_log_zeta_closed, rw_log_zeta_closed
from .errors import ConfigError, DomainError, RonkinZetaError
from .laurent import LaurentPolynomial
from .polytope import newton_polytope
from .quadrature import QuadratureSpec
from .ronkin import correspondence_check, p_qw, p_rw, p_simplified, ronkin_eval
from .simulator import delta_state, measure_csv, run, state_csv
from .svg import amoeba_svg, newton_svg, tropical_svg
from .tropical import trop_hypersurface, tropicalize
from .verify import CHECKS, run_checks
from .walk import CoinMatrix, TorusSpec, qw_coin, rw_coin
from .zeta import c_r_finite, c_r_sequence, finite_zeta, log_zeta

__all__ = ["main", "build_parser"]

MODELS = ("rw", "qw-m", "qw-f", "coin", "laurent")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _fmt(v):
    """17 significant digits; complex values as a+bj; -0.0 printed as 0."""
    if v is None:
        return ""
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real + 0.0:.17g}{v.imag + 0.0:+.17g}j"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v) + 0.0:.17g}"


def _csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(c if isinstance(c, str) else _fmt(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _json_safe(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real) + 0.0, "im": float(obj.imag) + 0.0}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v + 0.0 if math.isfinite(v) else repr(v)
    return obj


def _json(obj):
    return json.dumps(_json_safe(obj), sort_keys=True) + "\n"


def _float_list(text, name):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"--{name} expects comma-separated numbers, got {text!r}") from None


def _threads():
    raw = os.environ.get("RZ_THREADS", "")
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"RZ_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"RZ_THREADS must be a positive integer, got {raw!r}")
    return n


def _ordered_map(fn, items):
    """Map in input order with at most RZ_THREADS workers."""
    items = list(items)
    workers = min(_threads(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _read_json(path):
    if not path:
        raise ConfigError("this model needs --input FILE")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None


def _quad(args):
    kw = {}
    if getattr(args, "nodes", None) is not None:
        kw["nodes_per_dim"] = args.nodes
    if getattr(args, "tol", None) is not None:
        kw["tolerance"] = args.tol
    return QuadratureSpec(**kw)


def _need_xi(args):
    if args.xi is None:
        raise ConfigError(f"--model {args.model} needs --xi")
    return args.xi


def _coin(args):
    if args.model == "rw":
        return rw_coin(args.d)
    if args.model in ("qw-m", "qw-f"):
        return qw_coin(_need_xi(args), "M" if args.model == "qw-m" else "F")
    if args.model == "coin":
        return CoinMatrix.from_json(_read_json(args.input))
    raise ConfigError("this command needs a walk model (rw, qw-m, qw-f or coin)")


def _single_u(args):
    us = _float_list(args.u, "u") if args.u else []
    if len(us) != 1:
        raise ConfigError("this command needs exactly one --u value")
    return us[0]


def _polynomial(args, family=False):
    """Laurent polynomial of the model; ``family`` uses the u-free rescaled form."""
    if args.model == "laurent":
        return LaurentPolynomial.from_json(_read_json(args.input))
    if args.model == "coin":
        raise ConfigError("polynomial commands take --model rw, qw-m, qw-f or laurent")
    if family:
        if args.model == "rw":
            return p_simplified("RWd", args.d)
        return p_simplified("QWm" if args.model == "qw-m" else "QWf", _need_xi(args))
    u = _single_u(args)
    if args.model == "rw":
        return p_rw(args.d, u)
    return p_qw(_need_xi(args), u, "M" if args.model == "qw-m" else "F")


def _cmd_zeta(args):
    if args.N is None:
        raise ConfigError("zeta needs --N")
    coin = _coin(args)
    torus = TorusSpec(coin.d, args.N)
    us = _float_list(args.u or "", "u")
    if not us:
        raise ConfigError("zeta needs --u")
    results = _ordered_map(lambda u: finite_zeta(coin, torus, u), us)
    rows = [(args.model, coin.d, torus.N, r.u, r.value, r.nodes, r.delta) for r in results]
    header = ["model", "d", "N", "u", "value", "diag_nodes", "diag_err"]
    if args.format == "json":
        return _json({"rows": [dict(zip(header, row)) for row in rows]})
    return _csv(header, rows)


def _closed_form(coin, u):
    try:
        if coin.class_hint == "RW" and coin.d in (1, 2):
            return rw_log_zeta_closed(coin.d, u)
        if coin.class_hint == "QW" and coin.d == 1 and coin.xi is not None:
            return qw_log_zeta_closed(coin.xi, u, coin.shift_type)
    except DomainError:
        return None
    return None


def _cmd_logzeta(args):
    coin = _coin(args)
    quad = _quad(args)
    us = _float_list(args.u or "", "u")
    if not us:
        raise ConfigError("logzeta needs --u")
    results = _ordered_map(lambda u: log_zeta(coin, u, quad), us)
    rows = [(args.model, coin.d, "inf", r.u, r.value, r.nodes, r.delta, _closed_form(coin, r.u)) for r in results]
    header = ["model", "d", "N", "u", "value", "diag_nodes", "diag_err", "closed_form"]
    if args.format == "json":
        return _json({"rows": [dict(zip(header, row)) for row in rows]})
    return _csv(header, rows)


def _cmd_cr(args):
    coin = _coin(args)
    if args.r_max is None:
        raise ConfigError("cr needs --r-max")
    limits = c_r_sequence(coin, args.r_max, _quad(args))
    torus = TorusSpec(coin.d, args.N) if args.N is not None else None
    rows = []
    for r, lim in enumerate(limits, start=1):
        fin = c_r_finite(coin, torus, r) if torus is not None else None
        rows.append((r, fin, lim))
    header = ["r", "finite", "limit"]
    if args.format == "json":
        return _json({"model": args.model, "d": coin.d, "N": args.N, "rows": [dict(zip(header, row)) for row in rows]})
    return _csv(header, rows)


def _points(args, k):
    if args.x is not None and args.grid is not None:
        raise ConfigError("give either --x or --grid, not both")
    if args.grid is not None:
        try:
            lo, hi, n = args.grid.split(":")
            axis = np.linspace(float(lo), float(hi), int(n))
        except ValueError:
            raise ConfigError(f"--grid expects lo:hi:n, got {args.grid!r}") from None
        mesh = np.meshgrid(*([axis] * k), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)
    x = _float_list(args.x, "x") if args.x is not None else [0.0] * k
    if len(x) != k:
        raise ConfigError(f"--x needs {k} coordinates, got {len(x)}")
    return np.array([x])


def _cmd_ronkin(args):
    P = _polynomial(args)
    quad = _quad(args)
    pts = _points(args, P.k)
    evals = _ordered_map(lambda x: ronkin_eval(P, x, quad, args.method), pts)
    rows = [(":".join(_fmt(c) for c in e.x), e.value, e.nodes, e.delta, e.singular_flag) for e in evals]
    header = ["x", "value", "diag_nodes", "diag_err", "singular"]
    if args.format == "json":
        return _json({"rows": [dict(zip(header, row)) for row in rows]})
    return _csv(header, rows)


def _cmd_correspond(args):
    if args.model not in ("rw", "qw-m", "qw-f"):
        raise ConfigError("correspond takes --model rw, qw-m or qw-f")
    params = {"d": args.d} if args.model == "rw" else {"xi": _need_xi(args)}
    quad = _quad(args)
    us = _float_list(args.u or "", "u")
    if not us:
        raise ConfigError("correspond needs --u")
    reps = _ordered_map(lambda u: correspondence_check(args.model, params, u, quad), us)
    header = ["model", "param", "u", "log_zeta", "ronkin_origin", "difference", "log_zeta_nodes", "ronkin_nodes"]
    param = args.d if args.model == "rw" else params["xi"]
    rows = [(r.model, param, r.u, r.log_zeta, r.ronkin, r.difference, r.log_zeta_nodes, r.ronkin_nodes) for r in reps]
    if args.format == "json":
        return _json({"rows": [dict(zip(header, row)) for row in rows]})
    return _csv(header, rows)


def _box(args):
    vals = _float_list(args.box, "box")
    if len(vals) == 2:
        return (tuple(vals), tuple(vals))
    if len(vals) == 4:
        return ((vals[0], vals[1]), (vals[2], vals[3]))
    raise ConfigError("--box expects lo,hi or xlo,xhi,ylo,yhi")


def _cmd_amoeba(args):
    P = _polynomial(args)
    if P.k == 1:
        sl = amoeba_slice(P)
        if args.format == "svg":
            raise ConfigError("SVG amoeba output needs a polynomial in two variables")
        if args.format == "json":
            return _json({"points": sl.points, "skipped": sl.skipped})
        return _csv(["x"], [(p[0],) for p in sl.points])
    box = _box(args)
    res = args.resolution or 600
    raster = amoeba_complement_components(P, box, res, quad=_quad(args))
    if args.format == "svg":
        return amoeba_svg(raster)
    if args.format == "pgm":
        return raster.to_pgm()
    if args.format == "json":
        return _json(raster.to_json())
    # point cloud of amoeba slices along the raster columns
    thetas = 2 * np.pi * np.arange(64) / 64
    sl = amoeba_slice(P, raster.xs, thetas)
    (y0, y1) = box[1]
    pts = sl.points[(sl.points[:, 1] >= y0) & (sl.points[:, 1] <= y1)]
    return _csv(["x1", "x2"], [tuple(p) for p in pts])


def _cmd_tropical(args):
    cx = trop_hypersurface(tropicalize(_polynomial(args, family=args.u is None)))
    if args.format == "svg":
        box = _box(args) if args.box else None
        return tropical_svg(cx, extent=max(abs(v) for r in box for v in r) if box else 3.0)
    if args.format == "csv":
        raise ConfigError("tropical output is json or svg")
    return _json(cx.to_json())


def _cmd_newton(args):
    poly = newton_polytope(_polynomial(args, family=args.u is None))
    if args.format == "svg":
        return newton_svg(poly)
    if args.format == "csv":
        return _csv([f"e{j + 1}" for j in range(poly.d)] + ["vertex"], [
            tuple(int(c) for c in p) + (tuple(p) in poly.vertex_set(),) for p in poly.lattice_points
        ])
    return _json(poly.to_json())


def _init_vector(args, coin):
    if args.init is None:
        if coin.class_hint in ("RW", "CRW"):
            return np.full(coin.size, 1.0 / coin.size)
        return np.eye(coin.size)[0]
    try:
        return np.array([complex(t.replace(" ", "")) for t in args.init.split(",")])
    except ValueError:
        raise ConfigError(f"--init expects comma-separated complex numbers, got {args.init!r}") from None


def _cmd_simulate(args):
    coin = _coin(args)
    if args.steps is None:
        raise ConfigError("simulate needs --steps")
    torus = TorusSpec(coin.d, args.N) if args.N is not None else None
    state = delta_state(coin.d, _init_vector(args, coin), torus)
    for state in run(state, coin, args.steps):
        pass
    if args.format == "json":
        raise ConfigError("simulate output is csv")
    if args.dump == "state":
        return state_csv(state)
    p = {"1": 1, "2": 2}.get(args.p) if args.p else None
    return measure_csv(state, p, coin)


def _cmd_verify(args):
    ids = args.only.split(",") if args.only else None
    if ids:
        bad = [i for i in ids if i not in CHECKS]
        if bad:
            raise ConfigError(f"unknown check ids: {bad}")
    results = run_checks(ids, _ordered_map)
    failing = [r.id for r in results if not r.passed]
    if args.format == "json":
        text = _json({"passed": not failing, "failing": failing, "checks": [r.__dict__ for r in results]})
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'} {r.id} worst={r.worst:.3e}{' ' + r.detail if r.detail else ''}" for r in results]
        lines.append(f"{len(results) - len(failing)}/{len(results)} passed")
        if failing:
            lines.append("failing: " + ",".join(failing))
        text = "\n".join(lines) + "\n"
    return text, (0 if not failing else 1)


COMMANDS = {
    "zeta": (_cmd_zeta, "finite-torus zeta over a list of u"),
    "logzeta": (_cmd_logzeta, "logarithmic zeta by quadrature, with the closed form when known"),
    "cr": (_cmd_cr, "table of C_r on a torus and in the limit"),
    "ronkin": (_cmd_ronkin, "Ronkin function at a point or on a grid"),
    "correspond": (_cmd_correspond, "log-zeta against the Ronkin value at the origin"),
    "amoeba": (_cmd_amoeba, "amoeba point cloud, raster and complement components"),
    "tropical": (_cmd_tropical, "tropical hypersurface as a polyhedral complex"),
    "newton": (_cmd_newton, "Newton polytope"),
    "simulate": (_cmd_simulate, "site-space walk evolution dumps"),
    "verify": (_cmd_verify, "run the invariant suite; exit 0 iff every check passes"),
}


def build_parser():
    parser = _Parser(prog="ronkinzeta", description="Walk zeta functions, Ronkin functions and tropical geometry.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--model", choices=MODELS, default="rw")
        p.add_argument("--input", help="coin or Laurent polynomial JSON for --model coin|laurent")
        p.add_argument("--d", type=int, default=1)
        p.add_argument("--N", type=int)
        p.add_argument("--u", help="comma-separated u values")
        p.add_argument("--xi", type=float)
        p.add_argument("--r-max", dest="r_max", type=int)
        p.add_argument("--nodes", type=int, help="starting quadrature nodes per dimension")
        p.add_argument("--tol", type=float, help="quadrature tolerance")
        p.add_argument("--x", help="comma-separated evaluation point")
        p.add_argument("--grid", help="lo:hi:n grid on every axis")
        p.add_argument("--method", choices=("jensen", "tensor"), default="jensen")
        p.add_argument("--box", default="-3,3")
        p.add_argument("--resolution", type=int)
        p.add_argument("--steps", type=int)
        p.add_argument("--init", help="initial internal state, comma-separated complex")
        p.add_argument("--dump", choices=("state", "measure"), default="measure")
        p.add_argument("--p", choices=("1", "2"), help="measure exponent (default by coin class)")
        p.add_argument("--only", help="comma-separated check ids for verify")
        p.add_argument("--out", help="output file (default: standard output)")
        p.add_argument("--format", choices=("csv", "json", "svg", "pgm"), default=None)
    return parser


VALUE_FLAGS = ("--u", "--x", "--grid", "--box", "--init", "--xi")


def _join_negative_values(argv):
    """Let list values such as ``--u -0.5,-0.3`` start with a minus sign."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def _default_format(command):
    return {"tropical": "json", "newton": "json", "verify": "text"}.get(command, "csv")


def _emit_warning(message, category, filename, lineno, file=None, line=None):
    sys.stderr.write(json.dumps({"warning": category.__name__, "message": str(message)}) + "\n")


def main(argv=None):
    """Run one command; returns the process exit code."""
    try:
        args = build_parser().parse_args(_join_negative_values(sys.argv[1:] if argv is None else argv))
        if args.command is None:
            raise ConfigError("missing command; choose one of " + ", ".join(COMMANDS))
        args.format = args.format or _default_format(args.command)
        if args.format == "svg" and args.command not in ("amoeba", "tropical", "newton"):
            raise ConfigError(f"{args.command} has no SVG output")
        if args.format == "pgm" and args.command != "amoeba":
            raise ConfigError("pgm output is only for amoeba")
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _emit_warning
            out = COMMANDS[args.command][0](args)
        code = 0
        if isinstance(out, tuple):
            out, code = out
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        return code
    except RonkinZetaError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}) + "\n")
        return exc.exit_code
    except OSError as exc:
        err = ConfigError(f"cannot write output: {exc}")
        sys.stderr.write(json.dumps({"error": "ConfigError", "message": str(err), "exit_code": 2}) + "\n")
        return 2
