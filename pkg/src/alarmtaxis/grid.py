"""Node-centred uniform grids and the discrete operators used by the solver.

Nodes include both endpoints of every axis. Boundary nodes own half a cell
(a quarter in 2D corners, and so on), which makes the mirror-ghost
Laplacian, the zero-flux taxis divergence and the trapezoidal rule one
consistent finite-volume discretisation: both operators integrate to zero
to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadExtent, GridMismatch, TooFewNodes

ATTRACT = -1
REPEL = +1


@dataclass(frozen=True)
class Grid:
    """Axis-aligned box with ``dims[k]`` nodes and spacing ``spacing`` per axis.

    ``build_grid`` is the validated constructor; the dataclass itself also
    accepts degenerate axes with one or two nodes (handy for 0D/1D checks).
    An axis with a single node contributes nothing to the Laplacian and a
    weight of ``spacing`` to quadrature.
    """

    dims: tuple[int, ...]
    spacing: float
    origin: tuple[float, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        origin = tuple(float(o) for o in self.origin)
        if not 1 <= len(dims) <= 3:
            raise ValueError(f"grid dimension must be 1, 2 or 3, got {len(dims)}")
        if len(origin) != len(dims):
            raise ValueError("origin must have one entry per axis")
        if any(n < 1 for n in dims):
            raise TooFewNodes(f"every axis needs at least one node, got {dims}")
        if not self.spacing > 0:
            raise BadExtent(f"spacing must be positive, got {self.spacing}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.dims

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    @property
    def extent(self) -> tuple[float, ...]:
        return tuple((n - 1) * self.spacing for n in self.dims)

    def axis(self, k: int) -> np.ndarray:
        return self.origin[k] + self.spacing * np.arange(self.dims[k])

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Node coordinates, one broadcastable array per axis."""
        return tuple(np.meshgrid(*(self.axis(k) for k in range(self.ndim)), indexing="ij", sparse=True))

    def radius_squared(self) -> np.ndarray:
        r2 = np.zeros(self.shape)
        for x in self.coordinates():
            r2 = r2 + x * x
        return r2

    @cached_property
    def weights(self) -> np.ndarray:
        """Trapezoidal quadrature weights (read-only)."""
        w = np.ones(self.shape)
        for k, n in enumerate(self.dims):
            wk = np.full(n, self.spacing)
            if n > 1:
                wk[0] = wk[-1] = 0.5 * self.spacing
            w = w * wk.reshape([n if j == k else 1 for j in range(self.ndim)])
        w.setflags(write=False)
        return w

    @property
    def volume(self) -> float:
        return float(self.weights.sum())


def build_grid(ndim: int, nodes_per_axis: int, lo: float, hi: float) -> Grid:
    """Endpoint-inclusive grid on ``[lo, hi]**ndim`` with ``h = (hi - lo)/(n - 1)``."""
    if ndim not in (1, 2, 3):
        raise ValueError(f"ndim must be 1, 2 or 3, got {ndim}")
    if not hi > lo:
        raise BadExtent(f"need hi > lo, got lo={lo}, hi={hi}")
    if nodes_per_axis < 3:
        raise TooFewNodes(f"need at least 3 nodes per axis, got {nodes_per_axis}")
    h = (hi - lo) / (nodes_per_axis - 1)
    return Grid((nodes_per_axis,) * ndim, h, (float(lo),) * ndim)


@dataclass
class Field:
    """Scalar nodal values on a grid, stored with the grid's shape (last axis fastest)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            if values.size != self.grid.size:
                raise GridMismatch(f"{values.size} values for a grid of {self.grid.size} nodes")
            values = values.reshape(self.grid.shape)
        self.values = values

    @classmethod
    def constant(cls, grid: Grid, c: float) -> Field:
        return cls(grid, np.full(grid.shape, float(c)))

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def copy(self) -> Field:
        return Field(self.grid, self.values.copy())


def _same_grid(*fs: Field) -> Grid:
    grid = fs[0].grid
    for f in fs[1:]:
        if f.grid != grid:
            raise GridMismatch(f"fields live on different grids: {grid} vs {f.grid}")
    return grid


def _lap_axis(a: np.ndarray, axis: int, h: float) -> np.ndarray:
    n = a.shape[axis]
    out = np.zeros_like(a)
    if n == 1:
        return out
    a = np.moveaxis(a, axis, 0)
    o = np.moveaxis(out, axis, 0)
    if n > 2:
        o[1:-1] = a[2:] - 2.0 * a[1:-1] + a[:-2]
    # mirror ghosts: value beyond the wall equals the first interior neighbour
    o[0] = 2.0 * (a[1] - a[0])
    o[-1] = 2.0 * (a[-2] - a[-1])
    o /= h * h
    return out


def laplacian(f: Field) -> Field:
    """Second-difference Laplacian with homogeneous Neumann closure."""
    g = f.grid
    out = np.zeros(g.shape)
    for k in range(g.ndim):
        out += _lap_axis(f.values, k, g.spacing)
    return Field(g, out)


def face_fluxes(carrier: np.ndarray, potential: np.ndarray, axis: int, h: float, coeff: float = 1.0) -> np.ndarray:
    """Interior face fluxes ``coeff * mean(carrier) * d(potential)/h`` along one axis."""
    c = np.moveaxis(carrier, axis, 0)
    p = np.moveaxis(potential, axis, 0)
    return np.moveaxis(coeff * 0.5 * (c[1:] + c[:-1]) * (p[1:] - p[:-1]) / h, 0, axis)


def taxis_divergence(carrier: Field, potential: Field, sign: int, coeff: float) -> Field:
    """``sign * coeff * div(carrier * grad(potential))`` in conservative flux form.

    ``sign`` is ``ATTRACT`` (-1) for movement up the gradient and ``REPEL``
    (+1) for movement down it. Wall fluxes are zero and boundary nodes
    divide by their half-cell width.
    """
    if sign not in (ATTRACT, REPEL):
        raise ValueError(f"sign must be ATTRACT (-1) or REPEL (+1), got {sign}")
    g = _same_grid(carrier, potential)
    h = g.spacing
    out = np.zeros(g.shape)
    for k, n in enumerate(g.dims):
        if n == 1:
            continue
        F = np.moveaxis(face_fluxes(carrier.values, potential.values, k, h, coeff), k, 0)
        o = np.moveaxis(out, k, 0)
        div = np.zeros((n,) + F.shape[1:])
        div[:-1] += F
        div[1:] -= F
        div[0] *= 2.0
        div[-1] *= 2.0
        o += div / h
    return Field(g, sign * out)


def product_field(a: Field, b: Field) -> Field:
    g = _same_grid(a, b)
    return Field(g, a.values * b.values)


def integrate(f: Field) -> float:
    """Composite trapezoidal rule over the grid."""
    return float(np.sum(f.grid.weights * f.values))


def linf_norm(f: Field) -> float:
    return float(np.max(np.abs(f.values)))


def linf_distance(f: Field, c: float) -> float:
    return float(np.max(np.abs(f.values - c)))
