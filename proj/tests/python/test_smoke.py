import math

import pytest

import volint


def test_es_with_unit_lambda_is_moving_average():
    y = [0.1 * math.sin(i) for i in range(100)]
    assert volint.exp_smooth(y, 80, 1.0, 20) == pytest.approx(volint.moving_average(y, 80, 20), abs=1e-15)


def test_iid_variance_closed_form():
    lam, n, s2 = 0.94, 52, 0.04
    ln = lam**n
    closed = 2 * s2 * s2 * (1 - lam) * (1 + ln) / ((1 + lam) * (1 - ln))
    assert volint.es_variance(s2, lam, n)["var_hat"] == pytest.approx(closed, rel=1e-12)


def test_simulators_and_returns():
    levels = volint.simulate_cir(300, seed=1)
    assert len(levels) == 300 and min(levels) > 0
    y = volint.to_returns(levels, 1 / 52)
    assert y[0] == pytest.approx((levels[1] - levels[0]) * math.sqrt(52))
    sv = volint.simulate_sv(50, seed=2)
    assert len(sv["returns"]) == len(sv["variance"]) == 50
    assert len(volint.simulate_gbm(10)) == 10


def test_state_variance_and_weights():
    levels = volint.simulate_cir(900, seed=3)
    y = volint.to_returns(levels, 1 / 52)
    est = volint.state_variance(levels[:-1], y, 0.0857)
    assert est["sigma2_hat"] > 0 and est["var_hat"] >= 0
    s, w = volint.integrate_dynamic(0.02, 1.0, 0.04, 3.0)
    assert w == 0.75 and s == pytest.approx(0.025)
    with pytest.raises(volint.NoCoverage):
        volint.state_variance(levels[:-1], y, 10.0)


def test_measures():
    assert volint.imade([0.1, 0.2], [0.3, 0.1]) == pytest.approx(0.15)
    assert volint.score([[1, 2, 3], [1, 5, 6]]) == [1.0, 0.0, 0.0]
    assert volint.normal_quantile(0.05) == pytest.approx(-1.6448536, abs=1e-6)


def test_small_study_is_deterministic():
    cfg = volint.default_config("cir")
    cfg.update(n_reps=2, series_len=420, in_sample_len=360, threads=1)
    a = volint.run_study(cfg)
    b = volint.run_study(cfg)
    assert a["report_csv"] == b["report_csv"]
    assert set(a["summary"]) == {"Hist", "RiskM", "SemiProxy", "NonBay", "Integ"}
    assert a["failures"] == []


def test_unknown_config_key_is_rejected():
    with pytest.raises(Exception):
        volint.run_study({"no_such_key": 1})
