# Constant steady states and the algebraic conditions behind them.
#
# Each of the four shipped experiments differs only in its six interaction
# coefficients. Here we list the eight constant states for each one and see
# which of them are admissible (no negative component).

from alarmtaxis import (ConditionTarget, check_coexistence_conditions, check_theorem_conditions,
                        enumerate_equilibria, example_params)

for ex in ("5.1", "5.2", "5.3", "5.4"):
    p = example_params(ex)
    print(f"--- example {ex}: a = {(p.a1, p.a2, p.a3, p.a4, p.a5, p.a6)}")
    for e in enumerate_equilibria(p):
        flag = " " if e.admissible else "x"
        print(f"  {flag} {e.kind.value:<20}" + "".join(f"{c:10.5f}" for c in e.components))

# The coexistence state is positive exactly when three strict inequalities
# hold. Only the first experiment satisfies them.
for ex in ("5.1", "5.2"):
    print()
    print(f"example {ex}")
    print(check_coexistence_conditions(example_params(ex)).format())

# Convergence hypotheses also need bounds on sup|v| and sup|w| over the whole
# run. The Gaussian initial data peak at v = 3 and w = 2, which we use here.
# Note the last clause for example 5.1: both products equal 0.125, so the
# strict inequality fails by a zero margin even though the run converges.
print()
print(check_theorem_conditions(example_params("5.1"), ConditionTarget.THM12, sup_v=3.0, sup_w=2.0).format())

# The trivial target (1, 0, 0, 0) asks for the coexistence conditions to
# fail in all three clauses. For example 5.2 the first clause misses that by
# a hair (a2 a6 = 2 against a bound of about 2.0235).
print()
print(check_theorem_conditions(example_params("5.2"), "Thm13", sup_v=3.0, sup_w=2.0).format())
