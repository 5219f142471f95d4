import math

import numpy as np
import pytest

import kellerscope as ks


def test_operators_match_hand_values():
    d = ks.Domain.interval(3.0, 3)
    assert ks.laplacian_neumann(np.array([0.0, 1.0, 0.0]), d).tolist() == [1.0, -2.0, 1.0]
    assert ks.chemotactic_divergence([1.0, 2.0, 2.0], [0.0, 1.0, 1.0], 1.0, d).tolist() == [1.0, -1.0, 0.0]
    assert ks.integrate([1.0, 2.0, 3.0], ks.Domain.interval(1.5, 3)) == 3.0


def test_two_dimensional_fields_are_row_major():
    d = ks.Domain.rectangle(1.0, 2.0, 4, 5)
    f = np.random.default_rng(0).random((5, 4))
    lap = ks.laplacian_neumann(f, d)
    assert lap.shape == (5, 4)
    assert abs(ks.integrate(lap, d)) < 1e-12 * np.abs(lap).sum()


def test_theta0_golden():
    t = ks.theta0(3.0, 1.0, 2.0)
    assert t["eta_star"] == pytest.approx(1.5 ** 0.25, rel=1e-14)
    assert t["theta0"] == pytest.approx(0.6777015, rel=1e-6)
    assert ks.theta0_row(3, 1, 2).startswith("3,1,2,1.10668191")
    assert ks.c2_constant() == 0.25
    with pytest.raises(ValueError):
        ks.theta0(1.0, 1.0, 1.0)


def test_logistic_run():
    d = ks.Domain.interval(1.0, 8)
    p = ks.ModelParams()
    p.a, p.mu = 2.0, 1.0
    cfg = ks.StepperConfig()
    cfg.dt_max = 1e-3
    cfg.t_end = 1.0
    r = ks.run(d, np.ones(8), np.ones(8), p, cfg)
    assert r["status"] == "finished"
    exact = 2 * math.exp(2) / (1 + math.exp(2))
    assert np.max(np.abs(r["u"] - exact)) < 1e-3
    assert r["series"][0]["t"] == 0.0


def test_config_entry_points():
    text = "[domain]\ndim = 2\ncells = 8, 8\n[model]\na = 1\n[stepper]\nt_end = 0.2\n[initial]\nkind = constant\nrelative = true\n"
    assert ks.run_config(text)["outcome"] == "Bounded"
    assert all(passed for _, passed, _ in ks.check_config(text))
    records, regime = ks.sweep_config(text + "[sweep]\nchi = 1, 2\n", 2)
    assert records.count("\n") == 3
    assert regime.startswith("chi,mu,p,replicas")
    with pytest.raises(ValueError, match="mu"):
        ks.parse_config("[model]\nmu = -1\n")
