import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from alarmtaxis import (ConditionTarget, EquilibriumKind, Params, check_coexistence_conditions,
                        check_theorem_conditions, enumerate_equilibria, equilibrium, example_params,
                        reaction_terms)
from alarmtaxis.errors import DegenerateDenominator, InadmissibleEquilibrium
from alarmtaxis.model import Clause, coexistence_denominator

positive = st.floats(min_value=0.05, max_value=5.0, allow_nan=False)


def oracle_coexistence(p):
    # interior state solves the linear system obtained by dividing out u, v, w
    A = np.array([[1.0, -p.a1, -p.a2], [p.a3, 1.0, -p.a4], [p.a5, p.a6, 1.0]])
    u, v, w = np.linalg.solve(A, np.ones(3))
    return u, v, w, (p.alpha * v + p.beta * w) / p.gamma


@st.composite
def params(draw):
    names = Params.names()
    return Params(**{n: draw(positive) for n in names})


def test_params_reject_nonpositive():
    with pytest.raises(ValueError, match="gamma"):
        example_params("5.1").with_(gamma=-2.0)
    with pytest.raises(ValueError):
        example_params("5.1").with_(d3=0.0)


def test_gamma_ratios():
    p = example_params("5.2")
    assert p.gamma1 == pytest.approx(0.01 / 1.5)
    assert p.gamma2 == pytest.approx(0.5)


def test_example_5_1_coexistence_is_nine_sevenths():
    eq = equilibrium(example_params("5.1"), EquilibriumKind.COEXISTENCE)
    for got, want in zip(eq.components, (9 / 7, 3 / 7, 1 / 7, 2 / 7)):
        assert got == pytest.approx(want, abs=1e-15)


def test_example_5_3_prey_vanishing():
    eq = equilibrium(example_params("5.3"), "prey-vanishing")
    assert eq.components == pytest.approx((1.009899, 0.989901, 0.0, 0.494951), abs=1e-6)
    assert eq.u_e == pytest.approx(1.01 / 1.0001, rel=1e-15)


def test_example_5_4_primary_vanishing():
    eq = equilibrium(example_params("5.4"), "primary-vanishing")
    assert eq.components == pytest.approx((1.5, 0.0, 0.25, 0.125), abs=1e-15)


def test_trivial_aliases_secondary_only():
    p = example_params("5.2")
    assert equilibrium(p, "trivial").components == (1.0, 0.0, 0.0, 0.0)
    assert EquilibriumKind.parse("Prey_Vanishing") is EquilibriumKind.PREY_VANISHING
    with pytest.raises(ValueError):
        EquilibriumKind.parse("nonsense")


def test_enumeration_order_and_admissibility():
    pts = enumerate_equilibria(example_params("5.2"))
    assert [e.kind for e in pts] == list(EquilibriumKind)
    assert pts[2].components == (0.0, 1.0, 0.0, 0.5)
    # coexistence is negative for the trivial-target example
    assert not pts[-1].admissible


def test_degenerate_denominator():
    p = example_params("5.1").with_(a1=0.5, a2=1.0, a3=1.0, a4=0.5, a5=0.5, a6=4.25)
    assert coexistence_denominator(p) == 0.0
    with pytest.raises(DegenerateDenominator):
        equilibrium(p, "coexistence")


@settings(max_examples=200, deadline=None)
@given(params())
def test_coexistence_matches_linear_solve(p):
    assume(abs(coexistence_denominator(p)) > 1e-3)
    got = equilibrium(p, "coexistence").components
    want = oracle_coexistence(p)
    scale = max(1.0, *map(abs, want))
    assert np.allclose(got, want, rtol=0, atol=1e-9 * scale)


@settings(max_examples=200, deadline=None)
@given(params())
def test_admissible_points_are_steady(p):
    assume(abs(coexistence_denominator(p)) > 1e-3)
    for e in enumerate_equilibria(p):
        assert e.z_e == (p.alpha * e.v_e + p.beta * e.w_e) / p.gamma
        if e.admissible:
            assert e.residual(p) < 1e-12 * max(1.0, max(e.components)) ** 2


def test_reaction_terms_broadcast():
    p = example_params("5.1")
    u = np.full((3, 2), 9 / 7)
    r = reaction_terms(u, 3 / 7, 1 / 7, 2 / 7, p)
    assert all(np.max(np.abs(x)) < 1e-15 for x in r)


def test_clause_margins_and_boundary():
    assert Clause("x", 1.0, 2.0).margin == 1.0
    assert Clause("x", 2.0, 1.0, ">").satisfied
    tie = Clause("x", 0.125, 0.125, ">")
    assert not tie.satisfied and tie.margin == 0.0
    with pytest.raises(ValueError):
        Clause("x", 1, 2, "==")


@pytest.mark.parametrize("example, expected", [("5.1", True), ("5.2", False), ("5.3", False), ("5.4", False)])
def test_coexistence_classification(example, expected):
    report = check_coexistence_conditions(example_params(example))
    assert report.all_satisfied is expected
    assert len(report.clauses) == 3


def test_example_5_1_clause_values():
    report = check_coexistence_conditions(example_params("5.1"))
    first, second, third = report.clauses
    assert first.lhs == 0.25 and first.rhs == pytest.approx(min(2.5, 3.75))
    assert second.lhs == pytest.approx(1.0) and second.rhs == pytest.approx(1.75)
    assert third.lhs == pytest.approx(1.25) and third.rhs == pytest.approx(1.5)
    assert "all satisfied: True" in report.format()


def test_theorem_report_example_5_1_product_clause_is_tight():
    # a1 a4 a5 and a2 a3 a6 coincide when every coefficient is 0.5
    r = check_theorem_conditions(example_params("5.1"), ConditionTarget.THM12, 3.0, 2.0)
    vi = r.clauses[-1]
    assert vi.lhs == vi.rhs == 0.125 and not vi.satisfied
    assert r.premises_hold


def test_theorem_report_trivial_premises():
    r = check_theorem_conditions(example_params("5.2"), "Thm13", 3.0, 2.0)
    # a2 a6 = 2 sits just below the 2.0235 bound, so the first premise fails
    assert [c.satisfied for c in r.premises] == [False, True, True]
    assert r.premises[0].lhs == 2.0 and r.premises[0].rhs == pytest.approx(3.0352 / 1.5)
    vi = r.clauses[-1]
    assert vi.lhs == pytest.approx(0.0002) and vi.rhs == pytest.approx(3.0) and vi.satisfied
    assert [c.label.split()[0] for c in r.clauses][:3] == ["(i)", "(ii)", "(iii.a)"]


def test_theorem_report_rejects_inadmissible_target():
    with pytest.raises(InadmissibleEquilibrium):
        check_theorem_conditions(example_params("5.2"), ConditionTarget.THM12, 1.0, 1.0)
    with pytest.raises(ValueError):
        check_theorem_conditions(example_params("5.1"), ConditionTarget.COND01, 1.0, 1.0)


@pytest.mark.parametrize("target, example", [("Thm14_1", "5.3"), ("Thm14_2", "5.4")])
def test_semi_coexistence_premises(target, example):
    r = check_theorem_conditions(example_params(example), target, 3.0, 2.0)
    assert r.premises_hold
    assert math.isfinite(min(c.margin for c in r.clauses))
