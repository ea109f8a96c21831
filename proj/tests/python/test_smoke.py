import json
import os
import subprocess

import jsonschema
import pytest

import deckmap

CLI = os.environ.get("DECKMAP_CLI")
SCHEMA_PATH = os.environ.get("DECKMAP_SCHEMA")


@pytest.fixture(scope="module")
def schema():
    if not SCHEMA_PATH:
        pytest.skip("DECKMAP_SCHEMA not set")
    with open(SCHEMA_PATH) as fh:
        return json.load(fh)


def run_cli(*args):
    if not CLI:
        pytest.skip("DECKMAP_CLI not set")
    proc = subprocess.run([CLI, "--json", "-", *args], capture_output=True, text=True, timeout=300)
    return proc.returncode, json.loads(proc.stdout), proc.stderr


def test_parse_roundtrip():
    text = deckmap.parse_map("(z^2 - 1)/(z^2 + 1)")
    assert deckmap.maps_equal(text, "(z^2-1)/(z^2+1)")
    assert deckmap.parse_map("c*z^2", {"c": "1/2+i"}) == deckmap.parse_map("(1/2+i)*z^2")


def test_parse_errors_carry_kind():
    with pytest.raises(deckmap.DeckmapError) as exc:
        deckmap.parse_map("z^2 +")
    assert exc.value.args[0] == "syntax-error"
    with pytest.raises(deckmap.DeckmapError) as exc:
        deckmap.parse_map("c*z^2")
    assert exc.value.args[0] == "unbound-parameter"


def test_compose_iterate():
    f = "(z^2-1)/(z^2+1)"
    assert deckmap.maps_equal(deckmap.iterate(f, 2), deckmap.compose(f, f))


def test_analyze_coalescing():
    rep = deckmap.analyze("(z^2-1)/(z^2+1)")
    assert rep["critical_data"]["critically_coalescing"] is True
    assert rep["postcritical_orbit"]["postcritically_finite"] is True


def test_deck_group_of_iterate():
    rep = deckmap.deck("(z^2-1)/(z^2+1)", k=2)
    assert rep["deck"]["group"]["iso_type"] == "V4"
    assert rep["deck"]["iso_type_confirmed"]


def test_detect_quadratic():
    F = deckmap.iterate("(3/5)*(z + 1/z)", 2)
    rep = deckmap.detect(F, 2)
    det = rep["detection"]
    assert det["case"] == "quadratic-cyclic"
    assert sorted(p["exact"] for p in det["critical_points"]) == ["-1", "1"]
    assert sorted(p["exact"] for p in det["critical_values"]) == ["-6/5", "6/5"]


def test_shared_iterate():
    rep = deckmap.shared("(3/5)*(z + 1/z)", "(-3/5)*(z + 1/z)", max_k=4)
    sh = rep["shared"]
    assert sh["minimal_k"] == 2
    assert sh["cv_cp_agree"] and not sh["agreement_violation"]
    assert sh["mu_is_involution"] and sh["mu_commutes_with_f"]


def test_mobius_factor_and_cross_ratio():
    mu = deckmap.mobius_factor("(3/5)*(z + 1/z)", "(-3/5)*(z + 1/z)")
    assert deckmap.maps_equal(deckmap.compose(mu, "(3/5)*(z + 1/z)"), "(-3/5)*(z + 1/z)")
    cr = deckmap.cross_ratio("0", "inf", "1", "-1")
    assert cr["equals_minus_one"] and cr["in_lattes_set"]
    assert cr["value"]["exact"] == "-1"


def test_render_deterministic():
    a, meta_a = deckmap.render("param_fa", width=32, height=32, workers=1)
    b, meta_b = deckmap.render("param_fa", width=32, height=32, workers=2)
    assert a == b
    assert a.startswith(b"P6\n32 32\n255\n")
    assert meta_a["classes"] == meta_b["classes"]


def test_cli_reports_validate(schema, tmp_path):
    cases = [
        ("analyze", "(z^2-1)/(z^2+1)"),
        ("deck", "(z^2-1)/(z^2+1)", "--k", "2"),
        ("detect", "(z^2-1)/(z^2+1)", "--k", "3", "--iterate"),
        ("shared", "(z^3-1)/(z^3+1)", "-(z^3-1)/(z^3+1)", "--max-k", "4"),
        ("sample", "--deg", "3"),
    ]
    for args in cases:
        code, rep, err = run_cli(*args)
        assert code == 0, err
        jsonschema.validate(rep, schema)
        assert rep["command"] == args[0]
    out = tmp_path / "rabbit.ppm"
    code, rep, err = run_cli("render", "julia", "z^2 + c", "--param", "c=-0.1226+0.7449i",
                             "--width", "24", "--height", "24", "--out", str(out))
    assert code == 0, err
    jsonschema.validate(rep, schema)
    assert out.read_bytes().startswith(b"P6")
    assert sorted(c["period"] for c in rep["render"]["atlas"]) == [1, 3]


def test_cli_error_exit(schema):
    code, rep, err = run_cli("analyze", "z^2 +")
    assert code == 1
    jsonschema.validate(rep, schema)
    assert rep["error"]["kind"] == "syntax-error"
    code, rep, err = run_cli("detect", "z^3", "--k", "2")
    assert code == 1
    assert rep["error"]["kind"] == "invalid-argument"
