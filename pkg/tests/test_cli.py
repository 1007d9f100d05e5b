import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from toeplitz_dyn.cli import main, parse_complex, parse_tri, UsageError
from toeplitz_dyn.export import validate

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_CASES = {
    "classify_tri_2_0_0.5.json": ["classify", "--tri", "2,0,0.5"],
    "spectrum_tri_2_10_0.5_grid64.json": ["spectrum", "--tri", "2,10,0.5", "--grid", "64"],
    "eigen_tri_2_0_0.5_z0_0_2.json": ["eigen", "--tri", "2,0,0.5", "--z0", "0:2"],
}


def run(argv):
    buf = io.StringIO()
    code = main(argv, stdout=buf)
    return code, buf.getvalue()


def test_parsers():
    assert parse_complex("1.5") == 1.5
    assert parse_complex("0:2") == 2j
    assert parse_complex("0,2") == 2j
    assert parse_tri("2,0:1,0.5") == parse_tri("2, 0:1, 0.5")
    with pytest.raises(UsageError):
        parse_complex("x")


@pytest.mark.parametrize(
    "argv,code,status",
    [
        (["classify", "--tri", "2,0,0.5"], 0, "Hypercyclic"),
        (["classify", "--coeffs", '{"-1":[0.5,0]}'], 1, "NotHypercyclic"),
        (["classify", "--tri", "1,0,1"], 1, "NotHypercyclic"),
        (["classify", "--coeffs", '{"-1":1}'], 2, "Indeterminate"),
        (["classify", "--coeffs", '{"-2":1,"1":1}'], 3, "Unsupported"),
    ],
)
def test_classify_exit_codes(argv, code, status):
    c, out = run(argv)
    body = json.loads(out)
    assert c == code and body["status"] == status
    validate(body, "verdict")


def test_classify_reason_codes():
    _, out = run(["classify", "--coeffs", '{"-1":[0.5,0]}'])
    assert {"CONTRACTION", "GS_CONDITION"} <= {r["code"] for r in json.loads(out)["reasons"]}
    _, out = run(["classify", "--tri", "1,0,1"])
    assert json.loads(out)["reasons"][0]["code"] == "HYPONORMAL"


def test_symbol_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"a": [2, 0], "b": [0, 0], "c": [0.5, 0]}))
    assert run(["classify", "--symbol", str(p)])[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["classify"],
        ["classify", "--tri", "2,0"],
        ["classify", "--coeffs", "{bad"],
        ["classify", "--tri", "2,0,0.5", "--coeffs", '{"1":1}'],
        ["nosuch"],
        ["orbit", "--coeffs", '{"-1":2}', "--x", "e5000", "--dim", "16"],
        ["eigen", "--tri", "2,0,0.5"],
        ["classify", "--tri", "2,0,0.5", "--dim", "x"],
    ],
)
def test_usage_errors(argv, capsys):
    code, out = run(argv)
    assert code == 64 and out == ""
    assert "usage error" in capsys.readouterr().err


def test_module_errors_exit_65():
    code, out = run(["eigen", "--tri", "2,0,0.5", "--z0", "4.5"])
    assert code == 65
    body = json.loads(out)
    validate(body, "error")
    assert body["error"] == "OUT_OF_ANNULUS"


def test_spectrum_outputs():
    code, out = run(["spectrum", "--coeffs", '{"1":[1,0]}', "--grid", "64"])
    body = json.loads(out)
    validate(body, "spectrum")
    assert len(body["components"]) == 1 and body["components"][0]["winding"] == 1
    _, out = run(["spectrum", "--tri", "2,0,0.5", "--grid", "32"])
    assert [c["winding"] for c in json.loads(out)["components"]] == [-1]
    _, out = run(["spectrum", "--tri", "2,10,0.5", "--grid", "64"])
    assert json.loads(out)["components"][0]["intersects_unit_circle"] is False
    _, out = run(["spectrum", "--tri", "2,0,0.5", "--grid", "16", "--format", "csv"])
    lines = out.splitlines()
    assert lines[0] == "x,y,class,winding" and len(lines) == 1 + 16 * 16


def test_eigen_residual():
    _, out = run(["eigen", "--tri", "2,0,0.5", "--z0", "0,2", "--dim", "64"])
    body = json.loads(out)
    validate(body, "eigen")
    assert body["residual"] <= 1e-12
    _, out = run(["eigen", "--coeffs", '{"-1":2}', "--lam", "0.3", "--dim", "64"])
    assert json.loads(out)["eigenvalue"][0] == pytest.approx(0.6)
    _, out = run(["eigen", "--tri", "2,0,0.5", "--mu", "0", "--dim", "32", "--format", "csv"])
    assert out.splitlines()[1].startswith("0,0.25")


def test_orbit_and_norm():
    _, out = run(["orbit", "--coeffs", '{"-1":[2,0]}', "--x", "e5", "--steps", "5"])
    body = json.loads(out)
    validate(body, "orbit")
    assert body["norms"] == [1, 2, 4, 8, 16, 32]
    _, out = run(["orbit", "--coeffs", '{"-1":[2,0]}', "--x", "e5", "--steps", "2", "--format", "csv"])
    assert out == "step,norm\n0,1.0\n1,2.0\n2,4.0\n"
    _, out = run(["norm", "--tri", "2,0,0.5", "--dim", "1024"])
    body = json.loads(out)
    validate(body, "norm")
    assert abs(body["norm"] - 2.5) < 1e-2


def test_winding_ellipse_witness():
    _, out = run(["winding", "--tri", "2,0,0.5", "--point", "0", "--point", "3", "--point", "2.5"])
    body = json.loads(out)
    validate(body, "winding")
    assert [p["winding"] for p in body["points"]] == [-1, 0, None]
    _, out = run(["ellipse", "--tri", "2,0,0.5", "--point", "0"])
    body = json.loads(out)
    validate(body, "ellipse")
    assert body["intersection"]["relation"] == "Intersects"
    assert body["point"]["annulus_param"]["r0"] == pytest.approx(2)
    _, out = run(["witness", "--coeffs", '{"-1":2}', "--small", "0.2", "--large", "0.8", "--steps", "30", "--dim", "256"])
    body = json.loads(out)
    validate(body, "witness")
    assert body["approach"] < 1e-11


def test_out_path(tmp_path):
    p = tmp_path / "v.json"
    code, out = run(["classify", "--tri", "2,0,0.5", "--out", str(p)])
    assert code == 0 and out == "" and json.loads(p.read_text())["status"] == "Hypercyclic"


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name):
    argv = GOLDEN_CASES[name]
    first = run(argv)[1]
    assert first == run(argv)[1]
    assert first == (GOLDEN / name).read_text()


def test_console_entry_point_subprocess():
    r = subprocess.run(
        [sys.executable, "-m", "toeplitz_dyn.cli", "classify", "--tri", "1,0,1"], capture_output=True, text=True
    )
    assert r.returncode == 1 and json.loads(r.stdout)["status"] == "NotHypercyclic"
