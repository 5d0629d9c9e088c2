"""Post-processing of trajectories: empirical decay rates and convergence verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AbortedTrajectory, AllBelowFloor, TooFewSamples
from .grid import linf_distance

DISTANCE_FLOOR = 1e-15
DEFAULT_TOL = 2e-2


@dataclass(frozen=True)
class DecayFit:
    rate: float
    intercept: float
    r_squared: float
    window: tuple[float, float]

    def format(self) -> str:
        return (f"rate {self.rate:.6g} per unit time (r^2 = {self.r_squared:.6f}) "
                f"over t in [{self.window[0]:.6g}, {self.window[1]:.6g}]")


def fit_decay_rate(samples, window_fraction: float = 0.5) -> DecayFit:
    """Least-squares fit of ``ln(distance) = intercept - rate * t``.

    Uses the trailing ``window_fraction`` of the samples and drops distances
    at or below 1e-15. A negative slope (growth) is reported as rate 0. A
    flat series has r^2 = 0 by convention.
    """
    if not 0 < window_fraction <= 1:
        raise ValueError(f"window_fraction must lie in (0, 1], got {window_fraction}")
    data = np.asarray(list(samples), dtype=float).reshape(-1, 2)
    n_window = math.ceil(window_fraction * len(data))
    window = data[len(data) - n_window:]
    if len(window) < 3:
        raise TooFewSamples(f"need at least 3 samples in the fit window, got {len(window)}")
    usable = window[window[:, 1] > DISTANCE_FLOOR]
    if len(usable) == 0:
        raise AllBelowFloor("every distance in the window is below 1e-15; rate unresolved")
    if len(usable) < 3:
        raise TooFewSamples(f"only {len(usable)} samples above the floor in the fit window")
    t, y = usable[:, 0], np.log(usable[:, 1])
    tc = t - t.mean()
    yc = y - y.mean()
    sxx = float(tc @ tc)
    if sxx == 0:
        raise TooFewSamples("fit window spans zero time")
    slope = float(tc @ yc) / sxx
    intercept = float(y.mean() - slope * t.mean())
    ss_tot = float(yc @ yc)
    if ss_tot == 0:
        r2 = 0.0
    else:
        resid = yc - slope * tc
        r2 = min(1.0, max(0.0, 1.0 - float(resid @ resid) / ss_tot))
    return DecayFit(max(0.0, -slope), intercept, r2, (float(t[0]), float(t[-1])))


@dataclass(frozen=True)
class Verdict:
    distances: tuple[float, float, float, float]
    tol: float
    passed: bool

    def format(self) -> str:
        d = ", ".join(f"{name}: {x:.3e}" for name, x in zip("uvwz", self.distances))
        return f"{'PASS' if self.passed else 'FAIL'} (tol {self.tol:g}); final L-inf distances {d}"


def convergence_verdict(traj, target, tol: float = DEFAULT_TOL) -> Verdict:
    """Pass when every final per-field L-inf distance to ``target`` is below ``tol``."""
    status = getattr(traj.status, "value", traj.status)
    if status == "Aborted":
        raise AbortedTrajectory("cannot judge convergence of an aborted run")
    final = traj.final_state
    d = tuple(linf_distance(f, c) for f, c in zip(final.fields, target.components))
    return Verdict(d, tol, all(x < tol for x in d))
