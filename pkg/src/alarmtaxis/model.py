"""Model coefficients, reaction kinetics, steady states and stability conditions.

The system couples a secondary predator ``u``, a primary predator ``v``, a
prey ``w`` and a chemical signal ``z``::

    u_t = d1 Lap u - chi1 div(u grad(v w)) + mu1 u (1 - u + a1 v + a2 w)
    v_t = d2 Lap v - chi2 div(v grad z)    + mu2 v (1 - v - a3 u + a4 w)
    w_t = d3 Lap w + xi   div(w grad z)    + mu3 w (1 - w - a5 u - a6 v)
    z_t = d4 Lap z + alpha v + beta w - gamma z

with zero-flux boundaries. Everything in this module is a pure function of
its arguments.
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import DegenerateDenominator, InadmissibleEquilibrium

DENOMINATOR_FLOOR = 1e-14


@dataclass(frozen=True)
class Params:
    d1: float
    d2: float
    d3: float
    d4: float
    chi1: float
    chi2: float
    xi: float
    mu1: float
    mu2: float
    mu3: float
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    a6: float
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"parameter {f.name} must be positive and finite, got {value!r}")
            object.__setattr__(self, f.name, float(value))

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.names()}

    def with_(self, **changes) -> Params:
        return replace(self, **changes)

    @property
    def gamma1(self) -> float:
        """Weight of the v-terms in the energy functionals, mu1 a1 / (mu2 a3)."""
        return self.mu1 * self.a1 / (self.mu2 * self.a3)

    @property
    def gamma2(self) -> float:
        """Weight of the w-terms in the energy functionals, mu1 a2 / (mu3 a5)."""
        return self.mu1 * self.a2 / (self.mu3 * self.a5)


def example_params(example: str | int) -> Params:
    """Coefficients of the four shipped experiments ("5.1" .. "5.4").

    All experiments share unit diffusion, taxis, growth and production
    rates with decay ``gamma = 2``; only the interaction coefficients vary.
    """
    key = str(example).removeprefix("example").replace("_", ".")
    interactions = {
        # every interaction coefficient 0.5 (a5, a6 included)
        "5.1": dict(a1=0.5, a2=0.5, a3=0.5, a4=0.5, a5=0.5, a6=0.5),
        "5.2": dict(a1=0.01, a2=1.0, a3=1.5, a4=0.01, a5=2.0, a6=2.0),
        "5.3": dict(a1=0.01, a2=1.0, a3=0.01, a4=3.0, a5=2.0, a6=2.0),
        "5.4": dict(a1=0.01, a2=2.0, a3=1.5, a4=0.01, a5=0.5, a6=2.0),
    }
    if key not in interactions:
        raise KeyError(f"unknown example {example!r}; expected one of {sorted(interactions)}")
    return Params(
        d1=1.0, d2=1.0, d3=1.0, d4=1.0,
        chi1=1.0, chi2=1.0, xi=1.0,
        mu1=1.0, mu2=1.0, mu3=1.0,
        alpha=1.0, beta=1.0, gamma=2.0,
        **interactions[key],
    )


def reaction_terms(u, v, w, z, p: Params):
    """Pointwise kinetic rates of the four equations.

    Works on scalars and on numpy arrays alike.
    """
    du = p.mu1 * u * (1.0 - u + p.a1 * v + p.a2 * w)
    dv = p.mu2 * v * (1.0 - v - p.a3 * u + p.a4 * w)
    dw = p.mu3 * w * (1.0 - w - p.a5 * u - p.a6 * v)
    dz = p.alpha * v + p.beta * w - p.gamma * z
    return du, dv, dw, dz


class EquilibriumKind(enum.Enum):
    EXTINCTION = "extinction"
    SECONDARY_ONLY = "secondary-only"
    PRIMARY_ONLY = "primary-only"
    PREY_ONLY = "prey-only"
    SECONDARY_VANISHING = "secondary-vanishing"
    PRIMARY_VANISHING = "primary-vanishing"
    PREY_VANISHING = "prey-vanishing"
    COEXISTENCE = "coexistence"

    @classmethod
    def parse(cls, text: str) -> EquilibriumKind:
        key = text.strip().lower().replace("_", "-")
        if key == "trivial":
            return cls.SECONDARY_ONLY
        for kind in cls:
            if kind.value == key or kind.name.lower().replace("_", "-") == key:
                return kind
        raise ValueError(f"unknown equilibrium kind {text!r}")


@dataclass(frozen=True)
class EquilibriumPoint:
    kind: EquilibriumKind
    u_e: float
    v_e: float
    w_e: float
    z_e: float

    @property
    def admissible(self) -> bool:
        return all(c >= 0.0 for c in self.components)

    @property
    def components(self) -> tuple[float, float, float, float]:
        return (self.u_e, self.v_e, self.w_e, self.z_e)

    def residual(self, p: Params) -> float:
        """Largest absolute kinetic rate at this point."""
        return max(abs(r) for r in reaction_terms(*self.components, p))


def _point(kind, u, v, w, p: Params) -> EquilibriumPoint:
    # z always from the chemical balance so the identity holds bit-for-bit
    return EquilibriumPoint(kind, float(u), float(v), float(w), (p.alpha * v + p.beta * w) / p.gamma)


def _checked(denominator: float, what: str) -> float:
    if abs(denominator) < DENOMINATOR_FLOOR:
        raise DegenerateDenominator(f"{what} denominator {denominator!r} vanishes")
    return denominator


def coexistence_denominator(p: Params) -> float:
    return 1.0 + p.a1 * (p.a3 + p.a4 * p.a5) + p.a4 * p.a6 + p.a2 * (p.a5 - p.a3 * p.a6)


def coexistence_equilibrium(p: Params) -> EquilibriumPoint:
    den = _checked(coexistence_denominator(p), "coexistence")
    a1, a2, a3, a4, a5, a6 = p.a1, p.a2, p.a3, p.a4, p.a5, p.a6
    u = (1.0 + a1 + a2 + a1 * a4 + a6 * (a4 - a2)) / den
    v = (1.0 - a3 * (1.0 + a2) + a4 + a5 * (a2 - a4)) / den
    w = (1.0 + a1 * (a3 - a5) - a5 + a6 * (a3 - 1.0)) / den
    return _point(EquilibriumKind.COEXISTENCE, u, v, w, p)


def semi_coexistence_equilibrium(p: Params, kind: EquilibriumKind) -> EquilibriumPoint:
    """One of the three steady states in which exactly one species is absent."""
    if kind is EquilibriumKind.SECONDARY_VANISHING:
        den = _checked(1.0 + p.a4 * p.a6, "secondary-vanishing")
        return _point(kind, 0.0, (1.0 + p.a4) / den, (1.0 - p.a6) / den, p)
    if kind is EquilibriumKind.PRIMARY_VANISHING:
        # the chemical level uses 1 + a2 a5, the value forced by alpha v + beta w = gamma z
        den = _checked(1.0 + p.a2 * p.a5, "primary-vanishing")
        return _point(kind, (1.0 + p.a2) / den, 0.0, (1.0 - p.a5) / den, p)
    if kind is EquilibriumKind.PREY_VANISHING:
        den = _checked(1.0 + p.a1 * p.a3, "prey-vanishing")
        return _point(kind, (1.0 + p.a1) / den, (1.0 - p.a3) / den, 0.0, p)
    raise ValueError(f"{kind} is not a semi-coexistence state")


def equilibrium(p: Params, kind: EquilibriumKind | str) -> EquilibriumPoint:
    if isinstance(kind, str):
        kind = EquilibriumKind.parse(kind)
    if kind is EquilibriumKind.EXTINCTION:
        return _point(kind, 0.0, 0.0, 0.0, p)
    if kind is EquilibriumKind.SECONDARY_ONLY:
        return _point(kind, 1.0, 0.0, 0.0, p)
    if kind is EquilibriumKind.PRIMARY_ONLY:
        return _point(kind, 0.0, 1.0, 0.0, p)
    if kind is EquilibriumKind.PREY_ONLY:
        return _point(kind, 0.0, 0.0, 1.0, p)
    if kind is EquilibriumKind.COEXISTENCE:
        return coexistence_equilibrium(p)
    return semi_coexistence_equilibrium(p, kind)


def enumerate_equilibria(p: Params) -> list[EquilibriumPoint]:
    """All eight constant steady states, in the fixed order of ``EquilibriumKind``."""
    return [equilibrium(p, kind) for kind in EquilibriumKind]


# ---------------------------------------------------------------------------
# Condition reports


class ConditionTarget(enum.Enum):
    COND01 = "Cond01"
    THM12 = "Thm12"
    THM13 = "Thm13"
    THM14_1 = "Thm14_1"
    THM14_2 = "Thm14_2"


_RELATIONS = {
    "<": operator.lt,
    ">": operator.gt,
    "<=": operator.le,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class Clause:
    """One inequality ``lhs op rhs``.

    Convergence hypotheses are strict (``<``, ``>``); the non-strict forms only
    appear in premises. Comparisons are exact, with no tolerance.
    """

    label: str
    lhs: float
    rhs: float
    op: str = "<"

    def __post_init__(self):
        if self.op not in _RELATIONS:
            raise ValueError(f"unsupported relation {self.op!r}")

    @property
    def satisfied(self) -> bool:
        return _RELATIONS[self.op](self.lhs, self.rhs)

    @property
    def margin(self) -> float:
        """Signed slack: positive inside the strict region, zero on the boundary."""
        return self.rhs - self.lhs if self.op in ("<", "<=") else self.lhs - self.rhs

    def __str__(self):
        mark = "ok  " if self.satisfied else "FAIL"
        return f"[{mark}] {self.label}: {self.lhs:.6g} {self.op} {self.rhs:.6g}  (margin {self.margin:+.6g})"


@dataclass(frozen=True)
class ConditionReport:
    target: ConditionTarget
    gamma1: float
    gamma2: float
    clauses: tuple[Clause, ...]
    # standing assumptions of the theorem (not part of all_satisfied)
    premises: tuple[Clause, ...] = field(default=())

    @property
    def all_satisfied(self) -> bool:
        return all(c.satisfied for c in self.clauses)

    @property
    def premises_hold(self) -> bool:
        return all(c.satisfied for c in self.premises)

    def format(self) -> str:
        lines = [f"{self.target.value}: Gamma1 = {self.gamma1:.6g}, Gamma2 = {self.gamma2:.6g}"]
        if self.premises:
            lines.append("  premises:")
            lines += [f"    {c}" for c in self.premises]
            lines.append("  clauses:")
        lines += [f"    {c}" if self.premises else f"  {c}" for c in self.clauses]
        lines.append(f"  all satisfied: {self.all_satisfied}")
        return "\n".join(lines)


def _coexistence_clauses(p: Params) -> tuple[Clause, ...]:
    a1, a2, a3, a4, a5, a6 = p.a1, p.a2, p.a3, p.a4, p.a5, p.a6
    first = 1.0 + a1 + a2 + a1 * a4 + a4 * a6
    second = (1.0 + a1 * (a3 + a4 * a5) + a4 * a6 + a2 * a5) / a3
    return (
        Clause(f"a2*a6 < min{{{first:.6g}, {second:.6g}}}", a2 * a6, min(first, second)),
        Clause("a3*(1+a2) + a4*a5 < 1 + a4 + a2*a5", a3 * (1.0 + a2) + a4 * a5, 1.0 + a4 + a2 * a5),
        Clause("a5*(1+a1) + a6 < 1 + a3*(a1+a6)", a5 * (1.0 + a1) + a6, 1.0 + a3 * (a1 + a6)),
    )


def check_coexistence_conditions(p: Params) -> ConditionReport:
    """Positivity conditions of the coexistence state (three strict inequalities)."""
    return ConditionReport(ConditionTarget.COND01, p.gamma1, p.gamma2, _coexistence_clauses(p))


def _ge_clause(c: Clause) -> Clause:
    """Non-strict complement ``lhs >= rhs`` of a strict ``lhs < rhs`` clause."""
    return Clause(c.label.replace(" < ", " >= ", 1), c.lhs, c.rhs, ">=")


def _fails_clause(cond: tuple[Clause, ...]) -> Clause:
    # smallest margin <= 0 exactly when at least one coexistence condition fails
    worst = min(c.margin for c in cond)
    return Clause("coexistence conditions fail (min margin <= 0)", worst, 0.0, "<=")


_TARGET_KIND = {
    ConditionTarget.THM12: EquilibriumKind.COEXISTENCE,
    ConditionTarget.THM13: EquilibriumKind.SECONDARY_ONLY,
    ConditionTarget.THM14_1: EquilibriumKind.PREY_VANISHING,
    ConditionTarget.THM14_2: EquilibriumKind.PRIMARY_VANISHING,
}


def check_theorem_conditions(p: Params, target: ConditionTarget | str, sup_v: float, sup_w: float) -> ConditionReport:
    """Evaluate the convergence hypotheses for one of the four target states.

    ``sup_v`` and ``sup_w`` stand in for the sup-norms of ``v`` and ``w``
    over the whole evolution; pass observed running maxima or a priori
    bounds.
    """
    if isinstance(target, str):
        target = ConditionTarget(target)
    if target not in _TARGET_KIND:
        raise ValueError(f"{target} is not a theorem target")
    if not (sup_v > 0 and sup_w > 0):
        raise ValueError("sup_v and sup_w must be positive")
    eq = equilibrium(p, _TARGET_KIND[target])
    if not eq.admissible:
        raise InadmissibleEquilibrium(f"{eq.kind.value} state {eq.components} has a negative component")

    g1, g2 = p.gamma1, p.gamma2
    V2, W2 = sup_v**2, sup_w**2
    chi1_sq = p.chi1**2
    three = 2.0 * p.d2 * p.d3 * p.d4
    ab = Clause("alpha + beta < 2 gamma", p.alpha + p.beta, 2.0 * p.gamma)
    prod_lhs, prod_rhs = p.a1 * p.a4 * p.a5, p.a2 * p.a3 * p.a6
    cond = _coexistence_clauses(p)

    if target is ConditionTarget.THM12:
        us, vs, ws = eq.u_e, eq.v_e, eq.w_e
        m1 = p.d1 * p.d2 * vs * g1 / (us * V2 * W2)
        m2 = p.d1 * p.d3 * ws * g2 / (us * V2 * W2)
        clauses = (
            Clause(f"(i) chi1^2 < min{{{m1:.6g}, {m2:.6g}}}", chi1_sq, min(m1, m2)),
            Clause("(ii) d3 chi2^2 v* G1 + d2 xi^2 w* G2 < 2 d2 d3 d4",
                   p.d3 * p.chi2**2 * vs * g1 + p.d2 * p.xi**2 * ws * g2, three),
            Clause("(iii) mu2 a4 G1 + alpha < 2 mu2 G1 + mu3 a6 G2",
                   p.mu2 * p.a4 * g1 + p.alpha, 2.0 * p.mu2 * g1 + p.mu3 * p.a6 * g2),
            Clause("(iv) mu2 a4 G1 + beta < 2 mu3 G2 + mu3 a6 G2",
                   p.mu2 * p.a4 * g1 + p.beta, 2.0 * p.mu3 * g2 + p.mu3 * p.a6 * g2),
            replace(ab, label="(v) " + ab.label),
            Clause("(vi) a1 a4 a5 > a2 a3 a6", prod_lhs, prod_rhs, ">"),
        )
        premises = cond
    elif target is ConditionTarget.THM13:
        m1, m2 = p.d1 * p.d2 / W2, p.d1 * p.d3 / V2
        clauses = (
            Clause(f"(i) chi1^2 < min{{{m1:.6g}, {m2:.6g}}}", chi1_sq, min(m1, m2)),
            Clause("(ii) d3 chi2^2 |v|^2 + d2 xi^2 |w|^2 < 2 d2 d3 d4",
                   p.d3 * p.chi2**2 * V2 + p.d2 * p.xi**2 * W2, three),
            Clause("(iii.a) mu2 + mu2 a4 |w| + alpha/2 < G1 mu2",
                   p.mu2 + p.mu2 * p.a4 * sup_w + 0.5 * p.alpha, g1 * p.mu2),
            Clause("(iii.b) G1 mu2 < mu1 a1", g1 * p.mu2, p.mu1 * p.a1),
            Clause("(iv.a) mu3 + beta/2 < G2 mu3", p.mu3 + 0.5 * p.beta, g2 * p.mu3),
            Clause("(iv.b) G2 mu3 < mu1 a2", g2 * p.mu3, p.mu1 * p.a2),
            replace(ab, label="(v) " + ab.label),
            Clause("(vi) a1 a4 a5 < a2 a3 a6", prod_lhs, prod_rhs),
        )
        premises = tuple(_ge_clause(c) for c in cond)
    elif target is ConditionTarget.THM14_1:
        ub, vb = eq.u_e, eq.v_e
        m1 = p.d1 * p.d2 * vb * g1 / (ub * V2 * W2)
        m2 = p.d1 * p.d3 / (ub * V2)
        clauses = (
            Clause(f"(i) chi1^2 < min{{{m1:.6g}, {m2:.6g}}}", chi1_sq, min(m1, m2)),
            Clause("(ii) d3 chi2^2 v_bar G1 + d2 xi^2 |w|^2 < 2 d2 d3 d4",
                   p.d3 * p.chi2**2 * vb * g1 + p.d2 * p.xi**2 * W2, three),
            Clause("(iii.a) mu3 + beta/2 < G2 mu3", p.mu3 + 0.5 * p.beta, g2 * p.mu3),
            Clause("(iii.b) G2 mu3 < mu1 a2 u_bar + G1 mu2 a4 v_bar",
                   g2 * p.mu3, p.mu1 * p.a2 * ub + g1 * p.mu2 * p.a4 * vb),
            replace(ab, label="(iv) " + ab.label),
            Clause("(v) a1 a4 a5 < a2 a3 a6", prod_lhs, prod_rhs),
            Clause("(vi) alpha < 2 G1 mu2", p.alpha, 2.0 * g1 * p.mu2),
        )
        premises = (_fails_clause(cond), Clause("a3 < 1", p.a3, 1.0))
    else:
        uh, wh = eq.u_e, eq.w_e
        m1 = p.d1 * p.d2 / (uh * W2)
        m2 = p.d1 * p.d3 * wh * g2 / (uh * V2 * W2)
        clauses = (
            Clause(f"(i) chi1^2 < min{{{m1:.6g}, {m2:.6g}}}", chi1_sq, min(m1, m2)),
            Clause("(ii) d3 chi2^2 |v|^2 + d2 xi^2 w_hat G2 < 2 d2 d3 d4",
                   p.d3 * p.chi2**2 * V2 + p.d2 * p.xi**2 * wh * g2, three),
            Clause("(iii) mu2 + mu2 a4 |w| + alpha/2 < G1 mu2",
                   p.mu2 + p.mu2 * p.a4 * sup_w + 0.5 * p.alpha, g1 * p.mu2),
            Clause("(iv) G1 mu2 + G2 mu3 a6 w_hat < mu1 a1 u_hat",
                   g1 * p.mu2 + g2 * p.mu3 * p.a6 * wh, p.mu1 * p.a1 * uh),
            replace(ab, label="(v) " + ab.label),
            Clause("(vi) a1 a4 a5 < a2 a3 a6", prod_lhs, prod_rhs),
            Clause("(vii) beta < G2 mu3", p.beta, g2 * p.mu3),
        )
        premises = (_fails_clause(cond), Clause("a5 < 1", p.a5, 1.0))
    return ConditionReport(target, g1, g2, clauses, premises)
