"""Finite-difference simulation and stability analysis of a predator-prey
system with chemotaxis and alarm-taxis."""

__version__ = "0.1.0"

from .diagnostics import DecayFit, Verdict, convergence_verdict, fit_decay_rate
from .grid import ATTRACT, REPEL, Field, Grid, build_grid, integrate, laplacian, linf_distance, linf_norm, \
    product_field, taxis_divergence
from .io import config_path, load_config, parse_config, read_snapshot, read_timeseries, write_snapshot, \
    write_timeseries
from .lyapunov import EnergyKind, EnergyTag, decay_monitor, eval_energy, eval_f
from .model import (ConditionReport, ConditionTarget, EquilibriumKind, EquilibriumPoint, Params,
                    check_coexistence_conditions, check_theorem_conditions, coexistence_equilibrium,
                    enumerate_equilibria, equilibrium, example_params, reaction_terms)
from .solver import SimConfig, State, Status, Trajectory, initial_state, simulate, stable_dt, step
