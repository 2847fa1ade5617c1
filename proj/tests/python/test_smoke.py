import numpy as np
import pytest

import dnpsolve


def test_presets_listed():
    names = dnpsolve.preset_names()
    assert "heat" in names and "fast-diffusion" in names
    assert "[domain]" in dnpsolve.preset_text("heat")


def test_heat_run_passes_every_monitor():
    res = dnpsolve.run("heat")
    assert res["exit_code"] == 0
    u = res["trajectory"]["u"]
    assert u.shape == (101, 63)
    assert all(m["passed"] for m in res["monitors"])
    # the eigenmode decays monotonically
    peaks = np.abs(u).max(axis=1)
    assert np.all(np.diff(peaks) < 0)


def test_run_from_ini_text():
    text = dnpsolve.preset_text("porous-medium").replace("N = 100", "N = 20")
    res = dnpsolve.run(text)
    assert res["trajectory"]["steps"] == 20
    assert max(res["trajectory"]["residuals"]) <= 1e-9


def test_comparison_pair():
    res = dnpsolve.run("comparison")
    assert "second" in res
    assert all(m["passed"] for m in res["comparison"])


def test_graph_vectorized():
    g = dnpsolve.Graph("power", q=3.0)
    s = np.linspace(-2.0, 2.0, 9)
    b = g.beta(s)
    np.testing.assert_allclose(g.inverse(b), s, atol=1e-14)
    np.testing.assert_allclose(g.j(s) + g.conjugate(b), s * b, rtol=1e-12, atol=1e-14)


def test_errors_map_to_python_exceptions():
    with pytest.raises(dnpsolve.ConfigError):
        dnpsolve.run("[domain]\nbogus = 1\n")
    with pytest.raises(dnpsolve.InvalidParameter):
        dnpsolve.Graph("power", q=1.0)
    with pytest.raises(dnpsolve.DomainError):
        dnpsolve.Graph("tan").beta(2.0)


def test_study_orders():
    s = dnpsolve.study("heat", levels=3, target="time")
    assert len(s["rows"]) == 3
    assert abs(s["observed_order"] - 1.0) < 0.2
