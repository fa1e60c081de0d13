import io
import json
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from herglotz.cli import main


def run(capsys, monkeypatch, argv, payload=None, raw=None):
    text = raw if raw is not None else ("" if payload is None else json.dumps(payload))
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


IDENTITY = {"alpha": 0, "atoms": [{"loc": "inf", "mass": 1}]}
SHIFT = [[1, [0, 1]], [0, 1]]


def atomic(s):
    return {"a": s, "b": 1, "c": -1, "d": s}


def test_eval_identity(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["eval"], {"phi": IDENTITY, "z": [2, 3]})
    assert code == 0 and out == {"value": [2.0, 3.0]}
    code, out, _ = run(capsys, monkeypatch, ["eval", "--z", "2+3j"], IDENTITY)
    assert code == 0 and out == {"value": [2.0, 3.0]}
    code, out, _ = run(capsys, monkeypatch, ["eval"], {"phi": IDENTITY, "z": [[1, 1], "0+2j"]})
    assert out == {"values": [[1.0, 1.0], [0.0, 2.0]]}


def test_classify(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["classify"], {"matrix": SHIFT})
    assert code == 0 and out == {"class": "contact-line", "kappa": 1, "offset": 1.0}


def test_not_an_endomatrix_is_a_domain_error(capsys, monkeypatch):
    code, out, err = run(capsys, monkeypatch, ["classify"], {"matrix": [[1, [0, -1]], [0, 1]]})
    assert code == 1 and out is None and "NotEndomatrix" in err


def test_malformed_json(capsys, monkeypatch):
    code, out, err = run(capsys, monkeypatch, ["eval"], raw='{\n  "phi": [1,\n}')
    assert code == 2 and "line" in err


def test_malformed_fields(capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, ["transform"], {"phi": IDENTITY})
    assert code == 2 and "matrix" in err
    code, _, err = run(capsys, monkeypatch, ["eval"], {"phi": IDENTITY})
    assert code == 2
    assert run(capsys, monkeypatch, ["no-such-command"])[0] == 2


def test_semigroup_check(capsys, monkeypatch, tmp_path):
    path = tmp_path / "plot.json"
    payload = {"M": atomic(0.5), "N": atomic(-1.2), "f": "cauchy"}
    code, out, _ = run(capsys, monkeypatch, ["semigroup-check", "--nodes", "50", "--emit-grid", str(path)], payload)
    assert code == 0 and out["max_deviation"] <= 1e-8 and out["points"] == 51
    plot = json.loads(path.read_text())
    assert len(plot["s"]) == len(plot["lambda_f"]) == 51 and plot["s"][-1] == "inf"
    code, _, err = run(capsys, monkeypatch, ["semigroup-check"], dict(payload, f="sin"))
    assert code == 2 and "unknown test function" in err


def test_transform(capsys, monkeypatch, tmp_path):
    # the identity function under J: z -> -1/z, a unit atom at 0
    path = tmp_path / "d.json"
    code, out, _ = run(capsys, monkeypatch, ["transform", "--emit-grid", str(path)],
                       {"phi": IDENTITY, "matrix": [[0, 1], [-1, 0]]})
    assert code == 0 and out["alpha"] == pytest.approx(0, abs=1e-15)
    assert out["atoms"] == [{"loc": 0.0, "mass": 1.0}]
    plot = json.loads(path.read_text())
    assert len(plot["x"]) == 101 and max(plot["density"]) == 0


def test_invert(capsys, monkeypatch):
    phi = {"alpha": 0, "atoms": [{"loc": 0.5, "mass": 1}], "density": {"kind": "rational", "num": [1 / math.pi], "den": [1, 0, 1]}}
    code, out, _ = run(capsys, monkeypatch, ["invert", "--grid-min", "-2", "--grid-max", "2", "--nodes", "9"], {"phi": phi})
    assert code == 0
    assert out["atoms"][0]["mass"] == pytest.approx(1.0, rel=1e-9)
    x = np.array([p["x"] for p in out["density"]])
    got = np.array([p["density"] for p in out["density"]])
    assert np.max(np.abs(got - 1 / (math.pi * (1 + x * x)))) < 1e-8
    code, out, _ = run(capsys, monkeypatch, ["invert"], {"builtin": {"kind": "affine", "a": 2, "b": [0, 1]}})
    assert out["mass_at_infinity"] == pytest.approx(2.0, rel=1e-9)
    code, _, err = run(capsys, monkeypatch, ["invert"], {"builtin": "bessel"})
    assert code == 2 and "unknown builtin" in err


def test_check_rational(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["check-rational"], {"num": [[-1, 0]], "den": [[0, 1], [1, 0]]})
    assert code == 0 and out["verdict"] is True and out["verified"] is True
    # z + 1/z: refuted, still exit 0
    code, out, _ = run(capsys, monkeypatch, ["check-rational"], {"num": [[1, 0], [0, 0], [1, 0]], "den": [[0, 0], [1, 0]]})
    assert code == 0 and out["verdict"] is False and out["witness"]["im_f"] < 0


def test_check_positivity(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["check-positivity"], {"linear_fractional": {"a": 1, "b": [0, 1], "c": [0, 1]}})
    assert out == {"form": "a/(z+c)+b", "endofunction": True, "quadratic_form": True}
    code, out, _ = run(capsys, monkeypatch, ["check-positivity"], {"affine": {"a": -1}})
    assert out["endofunction"] is False
    code, out, _ = run(capsys, monkeypatch, ["check-positivity", "--grid", "50"], {"builtin": {"kind": "atomic", "s": 0.3}})
    assert code == 0 and out["passed"] is True and out["support"]["heuristic"] is True
    code, out, _ = run(capsys, monkeypatch, ["check-positivity", "--grid", "50"],
                       {"builtin": {"kind": "affine", "a": -1}, "support": ["inf"]})
    assert out["passed"] is False and out["witness"] is not None


def test_cayley(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["cayley"], {"points": [[0, 0]]})
    assert out["points"] == [[0.0, 1.0]]
    code, out, _ = run(capsys, monkeypatch, ["cayley"], {"points": [[0, 1]], "direction": "to-disk"})
    assert np.allclose(out["points"][0], [0, 0])
    code, out, _ = run(capsys, monkeypatch, ["cayley"], {"measure": {"atoms": [{"t": math.pi, "mass": 2 * math.pi}]}})
    assert out["atoms"][0]["loc"] == "inf" and out["atoms"][0]["mass"] == pytest.approx(1.0)
    code, _, err = run(capsys, monkeypatch, ["cayley"], {"points": [[0, 0]], "direction": "sideways"})
    assert code == 2


def test_input_file_and_determinism(capsys, monkeypatch, tmp_path):
    f = tmp_path / "in.json"
    f.write_text(json.dumps({"num": [[1, 0], [0, 1]], "den": [[1, 1], [1, 0]]}))
    a = run(capsys, monkeypatch, ["check-rational", "--input", str(f)])
    b = run(capsys, monkeypatch, ["check-rational", "--input", str(f)])
    assert a == b
    code, _, err = run(capsys, monkeypatch, ["eval", "--input", str(tmp_path / "missing.json")])
    assert code == 2 and "cannot read" in err


def test_selftest(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["selftest"])
    assert code == 0 and out["passed"] is True and len(out["checks"]) >= 5


def test_console_script():
    exe = shutil.which("herglotz")
    cmd = [exe] if exe else [sys.executable, "-m", "herglotz"]
    proc = subprocess.run(cmd + ["classify"], input=json.dumps({"matrix": SHIFT}),
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0 and json.loads(proc.stdout)["class"] == "contact-line"
