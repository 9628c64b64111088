import csv
import io
import json
import math
import subprocess
import sys

import pytest

from ronkinzeta.cli import main
from ronkinzeta.closed_forms import qw_log_zeta_closed


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_zeta_at_u_zero(capsys):
    code, out, _ = run_cli(capsys, "zeta", "--model", "rw", "--d", "1", "--N", "2", "--u", "0")
    assert code == 0
    r = rows(out)
    assert len(r) == 1 and float(r[0]["value"]) == 1.0


def test_logzeta_reports_closed_form(capsys):
    code, out, _ = run_cli(capsys, "logzeta", "--model", "qw-m", "--xi", str(math.pi / 4), "--u", "-0.5,-0.3")
    assert code == 0
    r = rows(out)
    assert [float(x["u"]) for x in r] == [-0.5, -0.3]
    for x in r:
        assert abs(float(x["value"]) - float(x["closed_form"])) < 1e-8
    assert abs(float(r[0]["closed_form"]) - qw_log_zeta_closed(math.pi / 4, -0.5)) < 1e-15


def test_correspond_json(capsys):
    code, out, _ = run_cli(capsys, "correspond", "--model", "rw", "--d", "2", "--u", "0.5", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["rows"][0]["difference"] < 1e-7


def test_ronkin_grid_accepts_negative_bounds(capsys):
    code, out, _ = run_cli(capsys, "ronkin", "--model", "rw", "--d", "1", "--u", "0.5", "--grid", "-1:1:3")
    assert code == 0
    r = rows(out)
    assert [x["x"] for x in r] == ["-1", "0", "1"]


def test_cr_table(capsys):
    code, out, _ = run_cli(capsys, "cr", "--model", "rw", "--d", "1", "--r-max", "4", "--N", "8")
    assert code == 0
    r = rows(out)
    assert abs(float(r[1]["finite"]) - 0.5) < 1e-15 and abs(float(r[1]["limit"]) - 0.5) < 1e-12


def test_newton_and_tropical_json(capsys):
    _, out, _ = run_cli(capsys, "newton", "--model", "rw", "--d", "2")
    assert sorted(map(tuple, json.loads(out)["vertices"])) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    _, out, _ = run_cli(capsys, "tropical", "--model", "rw", "--d", "2")
    assert len(json.loads(out)["rays"]) == 4


def test_svg_outputs(capsys):
    for cmd in ("newton", "tropical"):
        code, out, _ = run_cli(capsys, cmd, "--model", "rw", "--d", "2", "--format", "svg")
        assert code == 0 and out.startswith("<svg")


def test_amoeba_pgm_and_one_variable_points(capsys):
    code, out, _ = run_cli(capsys, "amoeba", "--model", "rw", "--d", "2", "--u", "0.9", "--resolution", "80", "--format", "pgm")
    assert code == 0 and out.startswith("P2\n80 80\n")
    code, out, _ = run_cli(capsys, "amoeba", "--model", "rw", "--d", "1", "--u", "0.5")
    xs = sorted(float(x["x"]) for x in rows(out))
    t = math.log(2 + math.sqrt(3))
    assert abs(xs[0] + t) < 1e-12 and abs(xs[1] - t) < 1e-12


def test_simulate_measure(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--model", "qw-m", "--xi", str(math.pi / 4), "--steps", "1")
    assert code == 0
    r = {x["site"]: float(x["value"]) for x in rows(out)}
    assert abs(r["-1"] - 0.5) < 1e-15 and r["0"] == 0 and abs(r["1"] - 0.5) < 1e-15


def test_simulate_state_dump_on_torus(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--model", "rw", "--d", "2", "--N", "3", "--steps", "2", "--dump", "state")
    assert code == 0
    assert out.splitlines()[0] == "site,component_index,re,im"
    assert len(out.splitlines()) == 1 + 9 * 4


def test_file_inputs(tmp_path, capsys):
    coin = tmp_path / "coin.json"
    half = {"re": 0.5, "im": 0.0}
    coin.write_text(json.dumps({"d": 1, "shift": "M", "class": "RW", "entries": [[half, half], [half, half]]}))
    code, out, _ = run_cli(capsys, "zeta", "--model", "coin", "--input", str(coin), "--N", "2", "--u", "0.5")
    assert code == 0 and abs(float(rows(out)[0]["value"]) - 0.75 ** -0.5) < 1e-15
    poly = tmp_path / "p.json"
    poly.write_text(json.dumps({"k": 1, "terms": [{"exp": [0], "re": 1.0, "im": 0.0}]}))
    code, out, err = run_cli(capsys, "ronkin", "--model", "laurent", "--input", str(poly), "--x", "0.3")
    assert code == 0, err
    assert float(rows(out)[0]["value"]) == 0.0


def test_output_file_and_reruns_are_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["ronkin", "--model", "rw", "--d", "2", "--u", "0.9", "--grid", "-1:1:3"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_threads_do_not_change_output(monkeypatch, capsys):
    args = ["logzeta", "--model", "rw", "--d", "2", "--u", "0.1,0.3,0.5,0.7"]
    _, serial, _ = run_cli(capsys, *args)
    monkeypatch.setenv("RZ_THREADS", "3")
    _, threaded, _ = run_cli(capsys, *args)
    assert serial == threaded
    monkeypatch.setenv("RZ_THREADS", "zero")
    code, _, err = run_cli(capsys, *args)
    assert code == 2 and json.loads(err)["error"] == "ConfigError"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["zeta", "--model", "rw", "--u", "0.5"], 2),
        (["zeta", "--bogus"], 2),
        ([], 2),
        (["logzeta", "--model", "rw", "--d", "1", "--u", "1.0"], 3),
        (["logzeta", "--model", "qw-m", "--xi", "0.7", "--u", "0.3"], 3),
        (["ronkin", "--model", "rw", "--d", "2", "--u", "0.9", "--x", "0,1", "--method", "tensor", "--tol", "1e-30"], 4),
        (["simulate", "--model", "rw", "--steps", "1", "--format", "json"], 2),
        (["verify", "--only", "nope"], 2),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    got, out, err = run_cli(capsys, *argv)
    assert got == code
    assert out == ""
    line = err.strip().splitlines()[-1]
    assert json.loads(line)["exit_code"] == code


def test_unwritable_output(tmp_path, capsys):
    code, _, err = run_cli(capsys, "newton", "--model", "rw", "--d", "2", "--out", str(tmp_path / "missing" / "x.json"))
    assert code == 2 and json.loads(err)["error"] == "ConfigError"


def test_verify_subset(capsys):
    code, out, _ = run_cli(capsys, "verify", "--only", "walk.eigen_product,sim.conservation")
    assert code == 0
    assert out.splitlines()[-1] == "2/2 passed"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ronkinzeta", "verify", "--format", "json"], capture_output=True, text=True, timeout=300
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["passed"] is True
