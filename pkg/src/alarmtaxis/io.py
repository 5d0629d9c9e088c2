"""Run configuration files and the deterministic on-disk output formats.

Config files are line-oriented ``key = value`` text with ``#`` comments.
Numbers are always written as the shortest decimal that round-trips to the
same double, so files re-read bit-exactly and repeat runs are
byte-identical.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import BadValue, ConfigError, IoFailure, MissingKey, UnknownKey
from .grid import Field, Grid
from .model import EquilibriumKind, Params
from .solver import SimConfig, State, Trajectory

PARAM_KEYS = Params.names()
GRID_KEYS = ("ndim", "nodes", "lo", "hi")
REQUIRED_KEYS = PARAM_KEYS + GRID_KEYS + ("t_end",)
OPTIONAL_KEYS = ("dt", "record_every", "target", "stop_tol", "tol")
DEFAULTS = {"dt": 0.0, "record_every": 0.1, "target": None, "stop_tol": None, "tol": 2e-2}

TIMESERIES_HEADER = "t,dist_u,dist_v,dist_w,dist_z,energy,mass_u,mass_v,mass_w,sup_v,sup_w"
SNAPSHOT_MAGIC = "CATS1"


def fmt(x: float) -> str:
    """Shortest round-trip decimal; integral values drop the trailing ``.0``."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _number(key: str, token: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise BadValue(key, token, "not a number") from None
    if not np.isfinite(value):
        raise BadValue(key, token, "not finite")
    return value


def _integer(key: str, token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise BadValue(key, token, "not an integer") from None


def parse_config(text: str) -> SimConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, token = (part.strip() for part in line.partition("="))
        if key not in REQUIRED_KEYS and key not in OPTIONAL_KEYS:
            raise UnknownKey(key)
        if key in raw:
            raise BadValue(key, token, "key given twice")
        raw[key] = token
    for key in REQUIRED_KEYS:
        if key not in raw:
            raise MissingKey(key)

    values = {}
    for key in PARAM_KEYS:
        v = _number(key, raw[key])
        if v <= 0:
            raise BadValue(key, raw[key], "must be positive")
        values[key] = v
    params = Params(**values)

    ndim = _integer("ndim", raw["ndim"])
    if ndim not in (1, 2, 3):
        raise BadValue("ndim", raw["ndim"], "must be 1, 2 or 3")
    nodes = _integer("nodes", raw["nodes"])
    if nodes < 3:
        raise BadValue("nodes", raw["nodes"], "need at least 3 nodes per axis")
    lo, hi = _number("lo", raw["lo"]), _number("hi", raw["hi"])
    if not hi > lo:
        raise BadValue("hi", raw["hi"], "must exceed lo")
    t_end = _number("t_end", raw["t_end"])
    if t_end <= 0:
        raise BadValue("t_end", raw["t_end"], "must be positive")

    opt = dict(DEFAULTS)
    if "dt" in raw:
        token = raw["dt"]
        opt["dt"] = 0.0 if token.lower() == "auto" else _number("dt", token)
        if opt["dt"] < 0:
            raise BadValue("dt", token, "must be 'auto', 0 or positive")
    for key in ("record_every", "tol"):
        if key in raw:
            opt[key] = _number(key, raw[key])
            if opt[key] <= 0:
                raise BadValue(key, raw[key], "must be positive")
    if "stop_tol" in raw and raw["stop_tol"].lower() not in ("none", ""):
        opt["stop_tol"] = _number("stop_tol", raw["stop_tol"])
        if opt["stop_tol"] <= 0:
            raise BadValue("stop_tol", raw["stop_tol"], "must be positive")
    if "target" in raw and raw["target"].lower() not in ("none", ""):
        try:
            opt["target"] = EquilibriumKind.parse(raw["target"])
        except ValueError:
            raise BadValue("target", raw["target"], "unknown equilibrium kind") from None

    return SimConfig(params=params, ndim=ndim, nodes=nodes, lo=lo, hi=hi, t_end=t_end, **opt)


def load_config(path) -> SimConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoFailure(path, exc.strerror or str(exc)) from exc
    return parse_config(text)


def config_path(name: str) -> Path:
    """Path of a bundled experiment config, e.g. ``config_path("example5_1")``."""
    name = name if name.endswith(".cfg") else name + ".cfg"
    path = Path(str(resources.files("alarmtaxis") / "configs" / name))
    if not path.exists():
        raise FileNotFoundError(path)
    return path


def format_config(cfg: SimConfig) -> str:
    """Inverse of ``parse_config`` (canonical key order)."""
    lines = [f"{k} = {fmt(v)}" for k, v in cfg.params.as_dict().items()]
    lines += [f"ndim = {cfg.ndim}", f"nodes = {cfg.nodes}", f"lo = {fmt(cfg.lo)}", f"hi = {fmt(cfg.hi)}",
              f"t_end = {fmt(cfg.t_end)}", f"dt = {'auto' if cfg.dt == 0 else fmt(cfg.dt)}",
              f"record_every = {fmt(cfg.record_every)}", f"tol = {fmt(cfg.tol)}"]
    if cfg.target is not None:
        lines.append(f"target = {cfg.target.value}")
    if cfg.stop_tol is not None:
        lines.append(f"stop_tol = {fmt(cfg.stop_tol)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# time series


def _opt(x) -> str:
    return "" if x is None else fmt(x)


def write_timeseries(traj: Trajectory, path) -> None:
    if not traj.samples:
        raise ValueError("trajectory has no samples")
    lines = [TIMESERIES_HEADER]
    for s in traj.samples:
        dist = s.dist if s.dist is not None else (None,) * 4
        row = [fmt(s.t), *(_opt(d) for d in dist), _opt(s.energy),
               fmt(s.mass_u), fmt(s.mass_v), fmt(s.mass_w), fmt(s.sup_v), fmt(s.sup_w)]
        lines.append(",".join(row))
    _write_text(path, "\n".join(lines) + "\n")


def read_timeseries(path) -> list[dict[str, float | None]]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise IoFailure(path, exc.strerror or str(exc)) from exc
    if not lines or lines[0] != TIMESERIES_HEADER:
        raise ValueError(f"{path}: not a timeseries file (bad header)")
    names = TIMESERIES_HEADER.split(",")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(names):
            raise ValueError(f"{path}: expected {len(names)} columns, got {len(cells)}")
        rows.append({n: (None if c == "" else float(c)) for n, c in zip(names, cells)})
    return rows


# ---------------------------------------------------------------------------
# field snapshots


def write_snapshot(state: State, field_name: str, path) -> None:
    """``CATS1 <ndim> <dims...> <h> <t> <name>`` then one line per grid row."""
    if field_name not in ("u", "v", "w", "z"):
        raise ValueError(f"field_name must be one of u, v, w, z, got {field_name!r}")
    field = getattr(state, field_name)
    write_field(field, state.t, field_name, path)


def write_field(field: Field, t: float, name: str, path) -> None:
    g = field.grid
    header = " ".join([SNAPSHOT_MAGIC, str(g.ndim), *map(str, g.dims), fmt(g.spacing), fmt(t), name])
    rows = field.values.reshape(-1, g.dims[-1])
    body = "\n".join(" ".join(fmt(x) for x in row) for row in rows)
    _write_text(path, header + "\n" + body + "\n")


@dataclass(frozen=True)
class Snapshot:
    field: Field
    t: float
    name: str


def read_snapshot(path) -> Snapshot:
    """Restore a snapshot written by ``write_snapshot``.

    The format carries spacing but not the origin; the grid is placed
    symmetrically about zero, as in every shipped config.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoFailure(path, exc.strerror or str(exc)) from exc
    head, _, body = text.partition("\n")
    parts = head.split()
    if not parts or parts[0] != SNAPSHOT_MAGIC:
        raise ValueError(f"{path}: not a {SNAPSHOT_MAGIC} snapshot")
    ndim = int(parts[1])
    dims = tuple(int(x) for x in parts[2:2 + ndim])
    h, t, name = float(parts[2 + ndim]), float(parts[3 + ndim]), parts[4 + ndim]
    origin = tuple(-0.5 * (n - 1) * h for n in dims)
    values = np.array([float(x) for x in body.split()])
    grid = Grid(dims, h, origin)
    if values.size != grid.size:
        raise ValueError(f"{path}: expected {grid.size} values, found {values.size}")
    return Snapshot(Field(grid, values.reshape(dims)), t, name)


# ---------------------------------------------------------------------------
# manifest


def write_manifest(cfg: SimConfig, traj: Trajectory, outputs: list[tuple[str, str]], path, version: str) -> None:
    """Run metadata; call last, after every listed output exists."""
    for p, _ in outputs:
        if not os.path.exists(p):
            raise IoFailure(p, "listed output was not written")
    config = {k: v for k, v in cfg.params.as_dict().items()}
    config.update(
        ndim=cfg.ndim, nodes=cfg.nodes, lo=cfg.lo, hi=cfg.hi, t_end=cfg.t_end,
        dt="auto" if cfg.dt == 0 else cfg.dt, dt_first=traj.dt_first, dt_last=traj.dt_last,
        record_every=cfg.record_every, target=None if cfg.target is None else cfg.target.value,
        stop_tol=cfg.stop_tol, tol=cfg.tol,
    )
    manifest = {
        "tool": "alarmtaxis",
        "version": version,
        "config": config,
        "status": traj.status.value,
        "steps": traj.n_steps,
        "clamp_count": traj.clamp_count,
        "outputs": [{"path": str(p), "kind": kind} for p, kind in outputs],
    }
    _write_text(path, json.dumps(manifest, indent=2) + "\n")


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(path, exc.strerror or str(exc)) from exc
