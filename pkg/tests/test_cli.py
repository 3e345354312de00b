import csv
import io
import json
import math
import subprocess
import sys

import jsonschema
import pytest

from grauert import __version__
from grauert.cli import (
    EXIT_CLAIM, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main, parse_complex_list,
)
from grauert.curvature import kappa_closed_on_S, leaf_density
from grauert.geometry import DiagonalField, GrauertPunctured, sample_S
from grauert.radial import find_eta_threshold

NUM = {"type": ["number", "null"]}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["n", "N", "alpha", "w", "t_min", "t_max", "steps", "radius_list", "seed", "tol", "format"],
    "properties": {
        "n": {"type": "integer"}, "N": {"type": "integer"}, "alpha": {"type": "number"},
        "w": {"type": "array", "items": {"type": "array", "items": {"type": "number"},
                                         "minItems": 2, "maxItems": 2}},
        "seed": {"type": "integer"}, "steps": {"type": "integer"},
        "format": {"enum": ["csv", "json"]},
    },
}


def rows_schema(fields):
    return {
        "type": "object",
        "required": ["version", "config", "rows"],
        "additionalProperties": False,
        "properties": {
            "version": {"const": __version__},
            "config": CONFIG_SCHEMA,
            "rows": {"type": "array", "items": {
                "type": "object", "required": fields, "additionalProperties": False,
                "properties": {f: NUM for f in fields}}},
        },
    }


CLAIMS_SCHEMA = {
    "type": "object",
    "required": ["version", "config", "claims"],
    "additionalProperties": False,
    "properties": {
        "version": {"type": "string"},
        "config": CONFIG_SCHEMA,
        "claims": {"type": "array", "minItems": 12, "items": {
            "type": "object",
            "required": ["id", "description", "computed", "threshold", "status"],
            "additionalProperties": False,
            "properties": {
                "id": {"type": "string", "pattern": "^C([1-9]|1[0-2])$"},
                "description": {"type": "string"},
                "computed": {"type": "object", "additionalProperties": NUM},
                "threshold": {"type": "number"},
                "status": {"enum": ["pass", "fail"]},
            }}},
    },
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_profiles_csv_format(capsys):
    code, out, _ = run(capsys, "profiles", "--t-min", "1e-6", "--t-max", "100", "--steps", "9")
    assert code == EXIT_OK
    assert "\r" not in out and out.endswith("\n")
    lines = out.splitlines()
    assert lines[0] == "t,u,v,eta,f_cn,f_cstar,f_ball"
    assert len(lines) == 10
    rows = table(out)
    # 17 significant digits on every numeric cell
    assert rows[2]["t"] == f"{float(rows[2]['t']):.17g}"
    at_one = rows[6]
    assert float(at_one["t"]) == pytest.approx(1.0)
    assert float(at_one["v"]) == pytest.approx(1.3862944, abs=1e-7)
    assert float(at_one["f_cn"]) < 0
    first = rows[0]
    assert float(first["f_cn"]) > 0
    # convergence to -4 is logarithmic, so t = 1e-6 is only within a few percent
    assert float(first["f_cstar"]) == pytest.approx(-4, abs=0.1)
    # the ball profile is only defined below r^2 = 1
    assert rows[-1]["f_ball"] == "" and rows[0]["f_ball"] != ""


def test_profiles_deterministic(capsys, tmp_path):
    argv = ["profiles", "--steps", "20", "--seed", "3"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    out = tmp_path / "p.csv"
    assert main([*argv, "--out", str(out)]) == EXIT_OK
    assert out.read_bytes() == a.encode()


def test_profiles_json_schema(capsys):
    code, out, _ = run(capsys, "profiles", "--steps", "5", "--format", "json", "--N", "3",
                       "--w", "0.1:0.2")
    assert code == EXIT_OK
    doc = json.loads(out)
    jsonschema.validate(doc, rows_schema(["t", "u", "v", "eta", "f_cn", "f_cstar", "f_ball"]))
    assert doc["config"]["w"] == [[0, 0], [0, 0], [0.1, 0.2]]


@pytest.mark.parametrize("argv", [
    ["profiles", "--t-min", "0"],
    ["profiles", "--t-min", "5", "--t-max", "1"],
    ["profiles", "--alpha", "1"],
    ["profiles", "--n", "3", "--N", "2"],
    ["profiles", "--w", "0.1,0.2,0.3"],
    ["profiles", "--w", "1.0", "--N", "3"],
    ["profiles", "--steps", "1"],
    ["scan", "--radius-list", ""],
    ["flow", "--base", "0,0"],
    ["nosuch"],
    ["profiles", "--format", "xml"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err


def test_numeric_failure_is_reported(capsys, monkeypatch):
    from grauert import radial
    monkeypatch.setattr(radial, "REL_ACCEPT", 0.0)
    radial._v_cached.cache_clear()
    try:
        code, _, err = run(capsys, "profiles", "--steps", "3", "--tol", "1e-300")
    finally:
        radial._v_cached.cache_clear()
    assert code == EXIT_NUMERIC and "numerical failure" in err


def test_parse_complex_list():
    assert parse_complex_list("0.1:0.2, 0.3") == (0.1 + 0.2j, 0.3 + 0j)
    assert parse_complex_list("1+2j,-0.5j") == (1 + 2j, -0.5j)
    assert parse_complex_list("") == ()


@pytest.fixture(scope="module")
def claims_doc():
    import contextlib
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main(["claims", "--format", "json"])
    return code, json.loads(buf.getvalue())


def test_claims_json(claims_doc):
    code, doc = claims_doc
    jsonschema.validate(doc, CLAIMS_SCHEMA)
    status = {c["id"]: c["status"] for c in doc["claims"]}
    assert list(status) == [f"C{i}" for i in range(1, 13)]
    # the exit code reflects the registry
    assert code == (EXIT_OK if all(s == "pass" for s in status.values()) else EXIT_CLAIM)
    c1 = next(c for c in doc["claims"] if c["id"] == "C1")
    assert c1["computed"]["v1"] == pytest.approx(1.3863, abs=1e-4)
    c7 = next(c for c in doc["claims"] if c["id"] == "C7")
    assert abs(c7["computed"]["N2_r2_1_f_edge"] + 2) < 1e-3


def test_claims_failure_lists_ids(capsys, monkeypatch):
    from grauert import claims
    from grauert.claims import ClaimResult
    monkeypatch.setattr(claims, "REGISTRY", {
        "C1": lambda cfg: ClaimResult("C1", "ok", {}, 0.0, "pass"),
        "C2": lambda cfg: ClaimResult("C2", "bad", {"x": 1.0}, 0.0, "fail"),
    })
    code, out, err = run(capsys, "claims")
    assert code == EXIT_CLAIM and "C2" in err and "C1" not in err
    rows = table(out)
    assert [r["status"] for r in rows] == ["pass", "fail"]
    assert json.loads(rows[1]["computed"]) == {"x": 1.0}

    monkeypatch.setattr(claims, "REGISTRY", {"C1": lambda cfg: ClaimResult("C1", "ok", {}, 0.0, "pass")})
    code, _, _ = run(capsys, "claims")
    assert code == EXIT_OK


def test_scan(capsys):
    tR = find_eta_threshold()
    code, out, _ = run(capsys, "scan", "--radius-list", f"1e-4,1,1,{4 * tR}", "--samples", "64",
                       "--refine-iters", "20")
    assert code == EXIT_OK
    rows = table(out)
    assert list(rows[0]) == ["t", "kappa_leaf", "k_minus", "k_plus"]
    assert float(rows[0]["k_plus"]) > 0
    assert float(rows[3]["k_minus"]) < 0
    # same radius, different seeds
    for key in ("k_minus", "k_plus"):
        a, b = float(rows[1][key]), float(rows[2][key])
        assert abs(a - b) <= 1e-3 * max(1.0, abs(a))


def test_scan_json(capsys):
    code, out, _ = run(capsys, "scan", "--radius-list", "0.5", "--samples", "16", "--refine-iters",
                       "2", "--format", "json")
    assert code == EXIT_OK
    jsonschema.validate(json.loads(out), rows_schema(["t", "kappa_leaf", "k_minus", "k_plus"]))


def test_flow_grauert(capsys):
    code, out, _ = run(capsys, "flow", "--t-min", "-0.5", "--t-max", "0.5", "--steps", "5",
                       "--radius", "0.7", "--alpha", "-2")
    assert code == EXIT_OK
    rows = table(out)
    assert list(rows[0])[:4] == ["T_re", "T_im", "Z1_re", "Z1_im"]
    mid = rows[2]
    assert float(mid["T_re"]) == 0.0
    F = DiagonalField(2, -2.0)
    z = sample_S(F, 0.7, 42)
    kind = GrauertPunctured(2)
    assert float(mid["h"]) == pytest.approx(leaf_density(kind, F, z, 0.0), rel=1e-15)
    assert float(mid["Z1_re"]) == pytest.approx(z[0].real, rel=1e-15)
    assert float(mid["kappa_fd"]) == pytest.approx(kappa_closed_on_S(kind, F, z), rel=1e-3)
    assert all(r["status"] == "ok" for r in rows)


def test_flow_ball_keeps_slice_and_truncates(capsys):
    code, out, err = run(capsys, "flow", "--metric", "ball", "--N", "3", "--w", "0.4:0.1",
                         "--t-min", "0", "--t-max", "3", "--steps", "13", "--radius", "0.5")
    assert code == EXIT_OK
    rows = table(out)
    assert rows[-1]["status"] == "left-domain"
    assert "truncated" in err
    inside = [r for r in rows if r["status"] == "ok"]
    assert inside
    assert {(r["Z3_re"], r["Z3_im"]) for r in inside} == {(f"{0.4:.17g}", f"{0.1:.17g}")}


def test_flow_imaginary_time_is_periodic(capsys):
    code, out, _ = run(capsys, "flow", "--imaginary", "--t-min", "0", "--t-max", str(2 * math.pi),
                       "--steps", "3")
    assert code == EXIT_OK
    rows = table(out)
    assert float(rows[0]["h"]) == pytest.approx(float(rows[-1]["h"]), rel=1e-12)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "grauert", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == __version__
    proc = subprocess.run([sys.executable, "-m", "grauert", "profiles", "--t-min", "-1"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_USAGE
