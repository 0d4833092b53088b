import math

import numpy as np
import pytest

import rmom


def test_curvature_constants():
    c = rmom.curvature_constants(-1.0, 0.0, 0.1)
    assert c["zeta"] == pytest.approx(0.1 / math.tanh(0.1), rel=1e-14)
    assert c["delta"] == 1.0
    assert c["rgd_dominance"]
    flat = rmom.curvature_constants(0.0, 0.0, 3.0)
    assert flat["discrepancy"] == 0.0
    assert math.isinf(flat["horizon"])


def test_sphere_round_trip():
    s = rmom.Sphere(5)
    x = s.random_point(1)
    y = s.random_point(2)
    v = s.log(x, y)
    assert v.shape == (5,)
    assert np.allclose(s.exp(x, v), y, atol=1e-12)
    assert s.dist(x, y) == pytest.approx(math.sqrt(s.inner(x, v, v)))


def test_spd_transport_is_isometric():
    m = rmom.Spd(3)
    x = m.random_point(3)
    y = m.random_point(4)
    u = m.log(x, m.random_point(5))
    tu = m.transport(x, y, u)
    assert tu.shape == (3, 3)
    assert m.inner(y, tu, tu) == pytest.approx(m.inner(x, u, u), rel=1e-10)


def test_run_rayleigh():
    out = rmom.run({"d": 30, "n": 40, "iters": 80, "no-timing": True})
    f_x = out["trace"]["f_x"]
    assert len(f_x) == len(out["metric"]) - 1
    assert np.all(np.diff(f_x) <= 1e-12)
    assert out["metric"][-1] < 1e-6
    assert out["csv"].startswith("k,f_x,f_y")
    assert out["verdict"] is None


def test_run_certified():
    out = rmom.run({"d": 20, "n": 25, "iters": 50, "certify": True, "no-timing": True})
    assert out["verdict"] is True


def test_config_errors():
    with pytest.raises(rmom.ConfigError):
        rmom.run({"problem": "scaling", "optimizer": "ragd", "mu": 1.0})
    with pytest.raises(ValueError):
        rmom.run({"bogus": 1})


def test_compare_and_instances():
    res = rmom.compare([
        {"d": 30, "n": 40, "iters": 200, "optimizer": o, "no-timing": True}
        for o in ("ragdsdr", "rgd")
    ])
    counts = dict(res["iterations_to_threshold"])
    assert set(counts) == {"ragdsdr", "rgd"}
    assert 0 < counts["ragdsdr"] < counts["rgd"]
    text = rmom.generate_instance({"problem": "karcher", "m": 3, "d": 4})
    assert '"kind":"karcher"' in text.replace(" ", "")
    assert "cond" in rmom.config_keys()
