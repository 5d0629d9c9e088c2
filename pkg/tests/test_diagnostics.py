import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alarmtaxis import State, build_grid, convergence_verdict, equilibrium, example_params, fit_decay_rate
from alarmtaxis.errors import AbortedTrajectory, AllBelowFloor, TooFewSamples

# fitted on the 52x52 CI runs and frozen as regression baselines
BASELINE_RATES = {"5.1": 0.2151, "5.2": 0.5003, "5.3": 0.9932, "5.4": 0.7251}


def test_recovers_synthetic_exponential():
    t = np.linspace(0, 10, 101)
    fit = fit_decay_rate(zip(t, 5 * np.exp(-2 * t)))
    assert abs(fit.rate - 2.0) < 1e-9
    assert fit.intercept == pytest.approx(math.log(5), abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.window == (5.0, 10.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 20), st.floats(1e-3, 1e3), st.integers(6, 200))
def test_recovers_any_clean_rate(rate, amp, n):
    t = np.linspace(0, 1, n)
    fit = fit_decay_rate(zip(t, amp * np.exp(-rate * t)), window_fraction=1.0)
    assert fit.rate == pytest.approx(rate, rel=1e-8, abs=1e-10)


def test_growth_clamps_to_zero_and_flat_has_zero_r2():
    t = np.arange(10.0)
    assert fit_decay_rate(zip(t, np.exp(0.3 * t))).rate == 0.0
    flat = fit_decay_rate(zip(t, np.full(10, 0.5)))
    assert flat.rate == 0.0 and flat.r_squared == 0.0


def test_floor_and_short_windows():
    t = np.arange(10.0)
    with pytest.raises(AllBelowFloor):
        fit_decay_rate(zip(t, np.full(10, 1e-16)))
    with pytest.raises(TooFewSamples):
        fit_decay_rate([(0, 1.0), (1, 0.5), (2, 0.25)])
    d = np.exp(-t)
    d[7:] = 0.0
    with pytest.raises(TooFewSamples):
        fit_decay_rate(zip(t, d))
    with pytest.raises(ValueError):
        fit_decay_rate(zip(t, d), window_fraction=0)


def test_floor_drops_underflowed_samples():
    t = np.arange(20.0)
    d = np.exp(-t)
    d[-3:] = 1e-20
    assert fit_decay_rate(zip(t, d)).rate == pytest.approx(1.0)


def _traj(state, status="ReachedTEnd"):
    return SimpleNamespace(final_state=state, status=SimpleNamespace(value=status))


def test_verdict():
    p = example_params("5.1")
    g = build_grid(1, 4, 0, 1)
    target = equilibrium(p, "coexistence")
    near = State.uniform(g, 9 / 7 + 0.01, 3 / 7, 1 / 7, 2 / 7 - 0.015)
    v = convergence_verdict(_traj(near), target, 2e-2)
    assert v.passed and v.distances[3] == pytest.approx(0.015)
    assert not convergence_verdict(_traj(near), target, 1e-2).passed
    assert "PASS" in v.format()
    with pytest.raises(AbortedTrajectory):
        convergence_verdict(_traj(near, "Aborted"), target)


@pytest.mark.parametrize("example", sorted(BASELINE_RATES))
def test_fitted_rates_match_baselines(runs, example):
    cfg, kind, traj = runs.get(example)
    fit = fit_decay_rate(traj.distance_series())
    assert fit.rate > 0 and fit.r_squared > 0.9
    assert fit.rate == pytest.approx(BASELINE_RATES[example], rel=2e-3)
