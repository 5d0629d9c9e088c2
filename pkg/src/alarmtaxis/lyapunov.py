"""Energy functionals certifying convergence to the four stable targets.

Each functional integrates ``x - x_e - x_e ln(x / x_e)`` for the species
present at the target and plain ``Gamma x + x^2/2`` terms for the ones
that vanish there. All are nonnegative and vanish exactly at their target.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import KindMismatch, MissingSamples, NegativeField
from .model import EquilibriumKind, EquilibriumPoint, Params, equilibrium

LOG_FLOOR = 1e-12


class EnergyTag(enum.Enum):
    E1 = "E1_Coexistence"
    E2 = "E2_SecondaryOnly"
    E3 = "E3_PreyVanishing"
    E4 = "E4_PrimaryVanishing"

    @classmethod
    def parse(cls, text: str) -> EnergyTag:
        key = text.strip()
        for tag in cls:
            if key.lower() in (tag.name.lower(), tag.value.lower()):
                return tag
        raise ValueError(f"unknown energy kind {text!r}; expected one of e1, e2, e3, e4")


EXPECTED_KIND = {
    EnergyTag.E1: EquilibriumKind.COEXISTENCE,
    EnergyTag.E2: EquilibriumKind.SECONDARY_ONLY,
    EnergyTag.E3: EquilibriumKind.PREY_VANISHING,
    EnergyTag.E4: EquilibriumKind.PRIMARY_VANISHING,
}

# which of (u, v, w) enter through the logarithmic term; the rest are quadratic
_LOG_TERMS = {
    EnergyTag.E1: (True, True, True),
    EnergyTag.E2: (True, False, False),
    EnergyTag.E3: (True, True, False),
    EnergyTag.E4: (True, False, True),
}


@dataclass(frozen=True)
class EnergyKind:
    tag: EnergyTag
    equilibrium: EquilibriumPoint

    def __post_init__(self):
        if isinstance(self.tag, str):
            object.__setattr__(self, "tag", EnergyTag.parse(self.tag))
        self.check()

    def check(self):
        want = EXPECTED_KIND[self.tag]
        if self.equilibrium.kind is not want:
            raise KindMismatch(f"{self.tag.value} needs a {want.value} state, got {self.equilibrium.kind.value}")

    @classmethod
    def for_params(cls, tag: EnergyTag | str, p: Params) -> EnergyKind:
        if isinstance(tag, str):
            tag = EnergyTag.parse(tag)
        return cls(tag, equilibrium(p, EXPECTED_KIND[tag]))


def _relative_entropy(x: np.ndarray, xe: float) -> tuple[np.ndarray, int]:
    """``x - xe - xe ln(x/xe)`` with the log argument floored at LOG_FLOOR."""
    low = x < LOG_FLOOR
    xl = np.where(low, LOG_FLOOR, x)
    return x - xe - xe * np.log(xl / xe), int(low.sum())


def energy_density(state, kind: EnergyKind, p: Params) -> tuple[np.ndarray, int]:
    """Pointwise integrand of the energy and the number of floored log arguments."""
    kind.check()
    eq = kind.equilibrium
    total = np.zeros(state.grid.shape)
    floored = 0
    for name, f, xe, wgt, uses_log in zip("uvw", (state.u, state.v, state.w), eq.components[:3],
                                          (1.0, p.gamma1, p.gamma2), _LOG_TERMS[kind.tag]):
        x = f.values
        if (x < 0).any():
            raise NegativeField(f"field {name} has negative values (min {x.min():.3e})")
        if uses_log:
            if not xe > 0:
                raise ValueError(f"{eq.kind.value} level of {name} must be positive, got {xe}")
            term, n = _relative_entropy(x, xe)
            floored += n
            total += wgt * term
        else:
            total += wgt * x + 0.5 * x * x
    total += 0.5 * (state.z.values - eq.z_e) ** 2
    return total, floored


def eval_energy(state, kind: EnergyKind, p: Params) -> float:
    density, _ = energy_density(state, kind, p)
    return float(np.sum(state.grid.weights * density))


def eval_f(state, kind: EnergyKind) -> float:
    """Integrated squared distance of all four fields from the target state."""
    kind.check()
    w = state.grid.weights
    return float(sum(np.sum(w * (f.values - c) ** 2) for f, c in zip(state.fields, kind.equilibrium.components)))


@dataclass(frozen=True)
class DecayReport:
    max_violation: float
    fraction_nonincreasing: float
    n_transitions: int

    def format(self) -> str:
        return (f"transitions: {self.n_transitions}, nonincreasing fraction: {self.fraction_nonincreasing:.6f}, "
                f"largest increase: {self.max_violation:.3e}")


def decay_monitor(traj, kind: EnergyKind, start: int = 0) -> DecayReport:
    """Scan consecutive energy samples from index ``start`` on.

    Ties count as nonincreasing. ``max_violation`` is the largest increase
    between neighbouring samples (0 when the series never goes up).
    """
    values = [s.energy for s in traj.samples[start:]]
    if len(values) < 2 or any(e is None for e in values):
        raise MissingSamples("trajectory has no (or too few) energy samples")
    tag = getattr(traj, "energy_tag", None)
    if tag is not None and tag != kind.tag.value:
        raise KindMismatch(f"trajectory recorded {tag}, monitor asked for {kind.tag.value}")
    jumps = np.diff(np.asarray(values, dtype=float))
    return DecayReport(
        max_violation=float(max(0.0, jumps.max())),
        fraction_nonincreasing=float(np.mean(jumps <= 0.0)),
        n_transitions=int(jumps.size),
    )
