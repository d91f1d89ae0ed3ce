import json
import math

import pytest

import klein_systolic as ks


def test_isosystolic_constant():
    c = ks.constant("sigma-v", 2 * math.log(math.tan(3 * math.pi / 8)))
    assert abs(c["C"] - math.pi / (2 * math.sqrt(2))) < 1e-12
    assert c["regime"] == "spherical"


def test_b0_and_gd():
    b0 = ks.b0()
    assert abs(math.tan(b0) - 2 * b0) < 1e-12
    assert abs(ks.gd(ks.gd_inverse(0.7)) - 0.7) < 1e-14
    assert ks.threshold("sigma-v-h") is None


def test_extremal_systoles_round_trip():
    e = ks.extremal("sigma-v", 4.0)
    r = ks.systoles(e["metric"])
    assert abs(r["l_sigma"] - math.pi) < 1e-12
    assert abs(r["l_v"] - 4 * e["spec"]["b"]) < 1e-12
    g = ks.systoles(e["metric"], n_u=64, classes="v", graph=True)
    assert abs(g["l_v"] - 4 * e["spec"]["b"]) / (4 * e["spec"]["b"]) < 0.02


def test_certificate():
    c = ks.certify("sigma-v-h", 1.5)
    assert c["valid"]
    assert c["eps_mass"] < 1e-10


def test_errors_map_to_python_exceptions():
    with pytest.raises(ks.DomainError):
        ks.constant("sigma-v", -1.0)
    with pytest.raises(ks.RegimeError):
        ks.solve("b-thm2", 1.0)


def test_cli_entry_point():
    code, out, _ = ks.run_cli(["constants", "--theorem", "sigma-n-v", "--beta", "3", "--json"])
    assert code == 0
    assert json.loads(out)["result"]["C"] < 2
    code, _, err = ks.run_cli(["constants", "--theorem", "sigma-v"])
    assert code == 2
    assert err


def test_small_sweep():
    r = ks.verify_inequality("sigma-v-h", 1.0, samples=4, seed=3, n_u=64)
    assert r["pass"]
    assert r["violations"] == 0
