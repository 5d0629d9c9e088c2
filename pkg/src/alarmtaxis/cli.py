"""Command-line entry point.

Exit codes: 0 success, 1 verdict or condition failure, 2 usage or config
error, 3 numerical abort. Reports go to stdout, diagnostics to stderr, data
to files under ``--out``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .diagnostics import convergence_verdict, fit_decay_rate
from .errors import AlarmTaxisError, ConfigError, InadmissibleEquilibrium, IoFailure, NumericalAbort
from .io import load_config, write_manifest, write_snapshot, write_timeseries
from .lyapunov import EXPECTED_KIND, EnergyKind, EnergyTag, decay_monitor
from .model import (ConditionTarget, check_coexistence_conditions, check_theorem_conditions,
                    enumerate_equilibria)
from .solver import simulate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3

CHECK_TARGETS = {
    "coexistence": ConditionTarget.THM12,
    "trivial": ConditionTarget.THM13,
    "prey-vanishing": ConditionTarget.THM14_1,
    "primary-vanishing": ConditionTarget.THM14_2,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="alarmtaxis", description="Predator-prey chemo-alarm-taxis simulator")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    eq = sub.add_parser("equilibria", help="print the eight constant steady states")
    eq.add_argument("config")

    ck = sub.add_parser("check", help="evaluate coexistence and convergence conditions")
    ck.add_argument("config")
    ck.add_argument("--target", required=True, choices=sorted(CHECK_TARGETS))
    ck.add_argument("--sup-v", type=float, help="bound on sup |v| used in the theorem clauses")
    ck.add_argument("--sup-w", type=float, help="bound on sup |w| used in the theorem clauses")

    sm = sub.add_parser("simulate", help="run the solver and write time series, snapshots and manifest")
    sm.add_argument("config")
    sm.add_argument("--out", required=True)

    ly = sub.add_parser("lyapunov", help="run with energy recording and report its decay")
    ly.add_argument("config")
    ly.add_argument("--kind", required=True, choices=["e1", "e2", "e3", "e4"])
    ly.add_argument("--out", required=True)
    ly.add_argument("--min-fraction", type=float, default=0.99,
                    help="required fraction of nonincreasing energy transitions (default 0.99)")
    return ap


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_equilibria(cfg) -> int:
    print(f"{'kind':<20} {'u':>12} {'v':>12} {'w':>12} {'z':>12}  admissible  residual")
    for e in enumerate_equilibria(cfg.params):
        u, v, w, z = e.components
        print(f"{e.kind.value:<20} {u:12.6g} {v:12.6g} {w:12.6g} {z:12.6g}  {str(e.admissible):<10}  "
              f"{e.residual(cfg.params):.1e}")
    return EXIT_OK


def cmd_check(cfg, target: str, sup_v, sup_w) -> int:
    cond = check_coexistence_conditions(cfg.params)
    print(cond.format())
    want_coexistence = target == "coexistence"
    ok = cond.all_satisfied == want_coexistence
    print(f"classification: coexistence conditions {'hold' if cond.all_satisfied else 'fail'}; "
          f"target {target} {'consistent' if ok else 'INCONSISTENT'}")
    if (sup_v is None) != (sup_w is None):
        raise _UsageError("--sup-v and --sup-w must be given together")
    if sup_v is not None:
        try:
            report = check_theorem_conditions(cfg.params, CHECK_TARGETS[target], sup_v, sup_w)
        except InadmissibleEquilibrium as exc:
            print(f"{CHECK_TARGETS[target].value}: {exc}")
            return EXIT_FAIL
        print(report.format())
        ok = ok and report.all_satisfied
    return EXIT_OK if ok else EXIT_FAIL


def _run_and_write(cfg, out: Path, energy_kind=None):
    out.mkdir(parents=True, exist_ok=True)
    traj = simulate(cfg, energy_kind=energy_kind)
    outputs = []
    ts = out / "timeseries.csv"
    write_timeseries(traj, ts)
    outputs.append((str(ts), "timeseries"))
    for name in "uvwz":
        path = out / f"{name}.cats"
        write_snapshot(traj.final_state, name, path)
        outputs.append((str(path), "snapshot"))
    return traj, outputs


def cmd_simulate(cfg, out: Path) -> int:
    traj, outputs = _run_and_write(cfg, out)
    code = EXIT_OK
    if traj.target is not None:
        verdict = convergence_verdict(traj, traj.target, cfg.tol)
        print(f"target {traj.target.kind.value} {traj.target.components}")
        print(verdict.format())
        try:
            print("decay fit: " + fit_decay_rate(traj.distance_series()).format())
        except AlarmTaxisError as exc:
            print(f"decay fit: unresolved ({exc})")
        code = EXIT_OK if verdict.passed else EXIT_FAIL
    else:
        print("no target configured; verdict skipped")
    report = out / "verdict.txt"
    # the report is itself an output; listed before the manifest is written
    _save_stdout_summary(report, traj, cfg)
    outputs.append((str(report), "report"))
    write_manifest(cfg, traj, outputs, out / "manifest.json", __version__)
    return code


def _save_stdout_summary(path: Path, traj, cfg) -> None:
    lines = [f"status {traj.status.value}", f"steps {traj.n_steps}", f"clamps {traj.clamp_count}"]
    if traj.target is not None:
        lines.append(convergence_verdict(traj, traj.target, cfg.tol).format())
    path.write_text("\n".join(lines) + "\n")


def cmd_lyapunov(cfg, kind: str, out: Path, min_fraction: float) -> int:
    tag = EnergyTag.parse(kind)
    energy_kind = EnergyKind.for_params(tag, cfg.params)
    if cfg.target is None:
        cfg = replace(cfg, target=EXPECTED_KIND[tag])
    traj, outputs = _run_and_write(cfg, out, energy_kind)
    report = decay_monitor(traj, energy_kind, start=1)
    print(f"{tag.value}: {report.format()}")
    path = out / "decay.txt"
    path.write_text(report.format() + "\n")
    outputs.append((str(path), "report"))
    write_manifest(cfg, traj, outputs, out / "manifest.json", __version__)
    return EXIT_OK if report.fraction_nonincreasing >= min_fraction else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        if args.command == "equilibria":
            return cmd_equilibria(cfg)
        if args.command == "check":
            return cmd_check(cfg, args.target, args.sup_v, args.sup_w)
        if args.command == "simulate":
            return cmd_simulate(cfg, Path(args.out))
        return cmd_lyapunov(cfg, args.kind, Path(args.out), args.min_fraction)
    except (ConfigError, IoFailure, _UsageError) as exc:
        _err(f"alarmtaxis: {exc}")
        return EXIT_USAGE
    except NumericalAbort as exc:
        _err(f"alarmtaxis: numerical abort: {exc}")
        return EXIT_ABORT
    except (AlarmTaxisError, ValueError) as exc:
        _err(f"alarmtaxis: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
