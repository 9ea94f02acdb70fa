import math

import numpy as np
import pytest

import scalemix

MOVINGMAX = {"base": "movingmax", "alpha": 1, "factor": {"law": "frechet", "xi": 2}}


def test_simulate_shape_and_determinism():
    a = scalemix.simulate(MOVINGMAX, 1000, seed=3)
    b = scalemix.simulate(MOVINGMAX, 1000, seed=3)
    assert a.shape == (1000, 1)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, scalemix.simulate(MOVINGMAX, 1000, seed=4))


def test_theta_closed_forms():
    assert scalemix.theta_movingmax_frechet(1.0, 2.0) == pytest.approx(2 ** -0.5, abs=1e-12)
    assert scalemix.theta_armax_marginal(0.8, 2.0) == pytest.approx(0.36, abs=1e-12)
    mc = scalemix.theta(MOVINGMAX)
    assert abs(mc["value"] - 2 ** -0.5) <= 4 * mc["value_se"] + 1e-12


def test_parmax_eta_rule():
    model = {"base": "parmax", "c": 0.8, "alpha": 2, "factor": {"law": "uniform01"}}
    assert scalemix.eta(model, 1) == pytest.approx(0.8)
    assert scalemix.eta(model, 3) == pytest.approx(0.512)


def test_hill_on_pareto():
    x = scalemix.simulate({"base": "iid", "beta": 2}, 20000, seed=1)[:, 0]
    assert scalemix.hill(x, 1000) == pytest.approx(0.5, abs=0.05)
    assert math.isfinite(scalemix.moments_estimator(x, 1000))


def test_depfn_constraints():
    x = scalemix.simulate({"base": "crossmax", "beta": [1, 1], "factor": {"law": "bernoulli", "p": 0.7}}, 20000)
    est = scalemix.depfn(scalemix.block_maxima(x[:, 0], 10), scalemix.block_maxima(x[:, 1], 10))
    for key in ("pickands", "cfg", "ht", "lr"):
        a = np.asarray(est[key])
        w = np.asarray(est["w"])
        assert a[0] == 1.0 and a[-1] == 1.0
        assert np.all(a <= 1.0) and np.all(a >= np.maximum(w, 1 - w))
        assert np.array_equal(a, a[::-1])


def test_fit_and_errors():
    x = scalemix.simulate({"base": "parmax", "c": 0.8, "alpha": 1.82, "factor": {"law": "uniform01"}}, 7731, seed=7)
    fit = scalemix.fit_prarmax(x[:, 0])
    assert fit["failed_step"] in (0, 1, 5)
    short = scalemix.fit_prarmax(np.ones(10))
    assert short["failed_step"] == 1 and short["message"].startswith("step 1:")
    with pytest.raises(Exception):
        scalemix.simulate({"base": "nope"}, 10)


def test_run_experiment():
    rep = scalemix.run_experiment({"model": MOVINGMAX, "n": 20000, "replications": 3})
    assert rep["theory"]["value"] == pytest.approx(2 ** -0.5, abs=1e-9)
