import json

import numpy as np
import pytest

import tripletsim


def small(preset_id, n=8):
    cfg = json.loads(tripletsim.preset(preset_id))
    cfg["grid"]["n"] = n
    return json.dumps(cfg)


def test_preset_round_trip():
    text = tripletsim.preset("B")
    cfg = json.loads(text)
    assert cfg["pumps"]["P2"]["pulse_energy_pj"] == 36.7
    tripletsim.validate(text)
    with pytest.raises(ValueError):
        tripletsim.preset("Z")


def test_simulate_returns_normalized_state():
    r = tripletsim.simulate(small("C", 10))
    psi = r["psi"]
    assert psi.shape == (10, 10, 10)
    w1, w2, w3 = r["weights"]
    norm = np.einsum("i,j,k,ijk->", w1, w2, w3, np.abs(psi) ** 2)
    assert abs(norm - 1.0) < 1e-9
    assert r["results"]["sigma2"] > 0.0
    p = tripletsim.purity(psi, w1, w2, w3)
    assert p["purity"] == pytest.approx(r["results"]["purity"], abs=1e-12)
    assert p["purity"] == pytest.approx(p["purity_trace"], abs=1e-12)


def test_bundle_matches_manifest(tmp_path):
    manifest = tripletsim.run(small("A"), str(tmp_path / "a"))
    b = tripletsim.read_manifest(tmp_path / "a")
    assert b.results["sigma2"] == manifest["results"]["sigma2"]
    for name in b.names:
        assert b[name].shape == tuple(b.entry(name)["shape"])
    x = (b["x1"], b["x2"], b["x3"])
    ours = tripletsim.marginals(b["density"], x)
    for i in range(3):
        np.testing.assert_allclose(ours[i], b[f"marginal_{i + 1}"], rtol=1e-9, atol=1e-12)
    mask = b["isosurface_mask"].astype(bool)
    assert np.array_equal(mask, b["density"] >= b.manifest["isosurface_threshold"] * b["density"].max())


def test_errors_map_to_python():
    cfg = json.loads(small("A"))
    cfg["grid"]["idler_rule"] = "quadrature"
    cfg["epsilon_linewidths"] = 0.5
    with pytest.raises(tripletsim.ConvergenceError):
        tripletsim.simulate(json.dumps(cfg))
    cfg["surprise"] = 1
    with pytest.raises(tripletsim.ConfigError):
        tripletsim.simulate(json.dumps(cfg))


def test_rate():
    rate, detected = tripletsim.triplet_rate(1.54e-5, (0.5, 0.5, 0.5), 1e7, (3.0, 3.0, 3.0))
    assert rate == pytest.approx(19.25)
    assert detected == pytest.approx(19.25 * 10 ** -0.9)
