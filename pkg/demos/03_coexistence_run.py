# Example 5.1: all three species settle at the coexistence state.
#
# The analytic limit is (9/7, 3/7, 1/7, 2/7). The run below uses a coarse
# grid so it finishes in seconds; pass a node count to refine, e.g.
#   python3 demos/03_coexistence_run.py 102

import sys
from dataclasses import replace

from alarmtaxis import EnergyKind, convergence_verdict, decay_monitor, fit_decay_rate, load_config, simulate
from alarmtaxis.io import config_path

nodes = int(sys.argv[1]) if len(sys.argv) > 1 else 26
cfg = replace(load_config(config_path("example5_1")), nodes=nodes)
kind = EnergyKind.for_params("e1", cfg.params)
print("target:", cfg.target_point().components)

traj = simulate(cfg, energy_kind=kind)
print(f"{traj.n_steps} steps, dt from {traj.dt_first:.3g} to {traj.dt_last:.3g}, {traj.clamp_count} clamps")

print(f"{'t':>5} {'max dist':>11} {'energy':>11} {'sup v':>7}")
for s in traj.samples[::25]:
    print(f"{s.t:5.1f} {s.max_dist:11.3e} {s.energy:11.3e} {s.sup_v:7.3f}")

print(convergence_verdict(traj, traj.target, cfg.tol).format())

# The distance decays exponentially; the slope of its log is the rate
fit = fit_decay_rate(traj.distance_series())
print("decay fit:", fit.format())

# and the energy never goes up after the first sample
print("energy:", decay_monitor(traj, kind, start=1).format())
