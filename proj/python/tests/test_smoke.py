import json
import math
import os

import pytest

import orbitlink as ol


def test_golden_mean_pressure():
    assert ol.pressure(ol.fixture("golden-mean")) == pytest.approx(math.log((1 + 5**0.5) / 2), abs=1e-10)


def test_fixture_registry_and_system_json():
    names = ol.fixtures()
    assert "symmetric-mixing" in names
    sys = ol.fixture("symmetric-mixing")
    assert (sys.edges, sys.vertices, sys.betti) == (4, 1, 1)
    back = ol.parse_system(sys.to_json())
    assert back.roof == sys.roof
    with pytest.raises(ValueError):
        ol.fixture("nope")


def test_prime_orbits_match_moebius():
    sys = ol.fixture("full-two-shift")
    orbits = ol.prime_orbits(sys, 8)
    for n in range(1, 9):
        assert sum(1 for w, *_ in orbits if len(w.split(".")) == n) == ol.moebius_prime_count(sys, n)


def test_beta_on_symmetric_fixture():
    b = ol.beta(ol.fixture("symmetric"))
    assert abs(b["xi"][0]) < 1e-9
    assert b["beta"] == pytest.approx(math.log(2), abs=1e-10)
    assert b["hessian"][0] == pytest.approx(1.0, abs=1e-4)


def test_class_count_is_near_prediction():
    c = ol.class_count(ol.fixture("symmetric-mixing"), [0], 12.0)
    assert 0.75 < c["observed"] / c["predicted"] < 1.25


def test_linking():
    exact, gauss, pair, ll = ol.hopf(400)
    assert exact == 1 and abs(gauss - 1) < 1e-6
    assert abs(pair - 1 / ll) < 1e-5
    exact, gauss, _ = ol.link_words("0.1", "0.0.1")
    assert exact == round(gauss) == ol.template_linking("0.1", "0.0.1")


def test_helicity_and_scan():
    h = ol.helicity_abc()
    assert h["value"] == pytest.approx(3.0, rel=1e-3)
    s = ol.lambda_scan(pairs=5000)
    assert len(s["decades"]) == 3 and s["K_emp"] > 0


def test_study_small_grid():
    r = ol.study([5, 6, 7], lambda_pairs=5000)
    assert len(r["rows"]) == 3
    assert r["reference"] == pytest.approx(0.125, abs=0.01)


def test_run_config(tmp_path):
    cfg = {"fixture": "golden-mean", "operation": "pressure", "verify": {"expected": 0.481211825059603}}
    r = ol.run(cfg, out_dir=str(tmp_path), verify=True)
    assert r["exit_code"] == 0
    assert r["files"] == ["pressure.csv"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"] == "ok"
    assert manifest["files"][0]["sha256"] == r["checksums"][0]
    with pytest.raises(ValueError):
        ol.run({"fixture": "golden-mean", "operation": "pressure", "bogus": 1})


def test_shipped_configs_validate(tmp_path):
    root = os.environ.get("ORBITLINK_CONFIGS", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))
    cfg = os.path.join(root, "helicity_abc.json")
    r = ol.run(cfg, out_dir=str(tmp_path), verify=True)
    assert r["exit_code"] == 0, r["error"]
