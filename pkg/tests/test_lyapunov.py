import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from alarmtaxis import EnergyKind, EnergyTag, Field, State, build_grid, decay_monitor, equilibrium, eval_energy, \
    eval_f, example_params
from alarmtaxis.errors import KindMismatch, MissingSamples, NegativeField
from alarmtaxis.lyapunov import LOG_FLOOR, energy_density

PAIRS = [("e1", "5.1"), ("e2", "5.2"), ("e3", "5.3"), ("e4", "5.4")]
GRID = build_grid(2, 6, -0.5, 0.5)


def uniform(u, v, w, z, grid=GRID):
    return State.uniform(grid, u, v, w, z)


def series(values, tag="E1_Coexistence"):
    return SimpleNamespace(samples=[SimpleNamespace(energy=e) for e in values], energy_tag=tag)


def e1_by_hand(p, state):
    # independent transcription of the coexistence functional for uniform states
    us, vs, ws, zs = equilibrium(p, "coexistence").components
    u, v, w, z = (float(f.values.flat[0]) for f in state.fields)
    ent = lambda x, xe: x - xe - xe * math.log(x / xe)
    return GRID.volume * (ent(u, us) + p.gamma1 * ent(v, vs) + p.gamma2 * ent(w, ws) + 0.5 * (z - zs) ** 2)


@pytest.mark.parametrize("tag, example", PAIRS)
def test_energy_vanishes_at_own_equilibrium(tag, example):
    p = example_params(example)
    kind = EnergyKind.for_params(tag, p)
    assert abs(eval_energy(uniform(*kind.equilibrium.components), kind, p)) < 1e-12
    assert eval_f(uniform(*kind.equilibrium.components), kind) == 0.0


def test_e1_matches_hand_formula():
    p = example_params("5.1")
    kind = EnergyKind.for_params("E1", p)
    s = uniform(1.0, 0.6, 0.3, 0.1)
    assert eval_energy(s, kind, p) == pytest.approx(e1_by_hand(p, s), rel=1e-13)


def test_vanishing_species_enter_quadratically():
    p = example_params("5.2")
    kind = EnergyKind.for_params("e2", p)
    s = uniform(1.0, 0.2, 0.4, 0.0)
    want = p.gamma1 * 0.2 + 0.02 + p.gamma2 * 0.4 + 0.08
    assert eval_energy(s, kind, p) == pytest.approx(GRID.volume * want, rel=1e-13)


def test_kind_mismatch():
    p = example_params("5.1")
    with pytest.raises(KindMismatch):
        EnergyKind(EnergyTag.E1, equilibrium(p, "trivial"))
    with pytest.raises(ValueError):
        EnergyTag.parse("e9")
    assert EnergyTag.parse("E3_PreyVanishing") is EnergyTag.E3


def test_negative_field_rejected():
    p = example_params("5.1")
    kind = EnergyKind.for_params("e1", p)
    with pytest.raises(NegativeField):
        eval_energy(uniform(1.0, -0.1, 0.1, 0.1), kind, p)


def test_log_floor_keeps_energy_finite():
    p = example_params("5.1")
    kind = EnergyKind.for_params("e1", p)
    s = uniform(0.0, 0.5, 0.5, 0.5)
    density, floored = energy_density(s, kind, p)
    assert floored == GRID.size
    us = kind.equilibrium.u_e
    assert density.flat[0] == pytest.approx(-us - us * math.log(LOG_FLOOR / us) + (
        p.gamma1 * (0.5 - 3 / 7 - 3 / 7 * math.log(0.5 / (3 / 7)))
        + p.gamma2 * (0.5 - 1 / 7 - 1 / 7 * math.log(0.5 / (1 / 7)))
        + 0.5 * (0.5 - 2 / 7) ** 2), rel=1e-12)


nonneg = st.floats(0.0, 10.0, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PAIRS), nonneg, nonneg, nonneg, nonneg)
def test_energy_nonnegative(pair, u, v, w, z):
    tag, example = pair
    p = example_params(example)
    kind = EnergyKind.for_params(tag, p)
    assert eval_energy(uniform(u, v, w, z), kind, p) >= -1e-12


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PAIRS), st.lists(st.floats(-0.5, 0.5), min_size=4, max_size=4), st.floats(1e-6, 1.0))
def test_zero_only_at_equilibrium(pair, direction, scale):
    tag, example = pair
    p = example_params(example)
    kind = EnergyKind.for_params(tag, p)
    eq = np.array(kind.equilibrium.components)
    d = np.array(direction)
    assume(np.max(np.abs(d)) > 1e-3)
    x = np.maximum(eq + scale * d, 0.0)
    assume(np.max(np.abs(x - eq)) > 1e-8)
    assert eval_energy(uniform(*x), kind, p) > 0.0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.one_of(st.just(0.0), st.floats(1e-4, 1), st.floats(-1, -1e-4)), min_size=4, max_size=4),
       st.floats(0.1, 10))
def test_f_is_quadratic(direction, lam):
    p = example_params("5.1")
    kind = EnergyKind.for_params("e1", p)
    eq = np.array(kind.equilibrium.components)
    d = np.array(direction)
    f1 = eval_f(uniform(*(eq + d)), kind)
    f2 = eval_f(uniform(*(eq + lam * d)), kind)
    assert f2 == pytest.approx(lam**2 * f1, rel=1e-9, abs=1e-300)


def test_e1_quadratic_approximation_near_equilibrium():
    p = example_params("5.1")
    kind = EnergyKind.for_params("e1", p)
    eq = kind.equilibrium.components
    rng = np.random.default_rng(11)
    for _ in range(20):
        fields = [Field(GRID, c + rng.uniform(-9e-4, 9e-4, GRID.shape)) for c in eq]
        s = State(0.0, *fields)
        wts = GRID.weights
        approx = sum(
            0.5 * wgt * np.sum(wts * (f.values - c) ** 2) / c
            for f, c, wgt in zip(fields[:3], eq[:3], (1.0, p.gamma1, p.gamma2))
        ) + 0.5 * np.sum(wts * (fields[3].values - eq[3]) ** 2)
        assert eval_energy(s, kind, p) == pytest.approx(approx, rel=0.05)


def test_decay_monitor_synthetic():
    kind = EnergyKind.for_params("e1", example_params("5.1"))
    r = decay_monitor(series([5.0, 4.0, 2.5, 1.0]), kind)
    assert r.max_violation == 0.0 and r.fraction_nonincreasing == 1.0 and r.n_transitions == 3
    r = decay_monitor(series([1.0] * 6), kind)
    assert r.max_violation == 0.0 and r.fraction_nonincreasing == 1.0
    r = decay_monitor(series([3.0, 2.0, 2.5, 1.0, 0.5]), kind)
    assert r.max_violation == pytest.approx(0.5) and r.fraction_nonincreasing == 0.75
    r = decay_monitor(series([3.0, 4.0, 2.0, 1.0]), kind, start=1)
    assert r.fraction_nonincreasing == 1.0


def test_decay_monitor_errors():
    kind = EnergyKind.for_params("e1", example_params("5.1"))
    with pytest.raises(MissingSamples):
        decay_monitor(series([1.0, None, 0.5]), kind)
    with pytest.raises(MissingSamples):
        decay_monitor(series([1.0]), kind)
    with pytest.raises(KindMismatch):
        decay_monitor(series([2.0, 1.0], tag="E2_SecondaryOnly"), kind)


@pytest.mark.parametrize("tag, example", PAIRS)
def test_energy_decays_on_ci_runs(runs, tag, example):
    cfg, kind, traj = runs.get(example)
    energies = [s.energy for s in traj.samples]
    assert energies[-1] < 1e-3 * energies[1]
    report = decay_monitor(traj, kind, start=1)
    # late-time increases are round-off once the energy sits at machine precision
    assert report.max_violation < 1e-12 * energies[1]
