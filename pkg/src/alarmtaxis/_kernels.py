"""Fused forward-Euler kernel for long runs.

Evaluates the same stencils as ``grid.laplacian`` / ``grid.taxis_divergence``
so a whole block of steps runs without Python overhead. Fields live in 3D
arrays with one ghost layer per side; 1D and 2D grids get leading unit
axes so the innermost loop always runs along the contiguous last axis.

Ghost values mirror the first interior neighbour, which reproduces both
the Neumann Laplacian and the doubled half-cell taxis divergence at walls.
On a unit axis the ghost mirrors the node itself, so that axis contributes
exactly zero.
"""

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

OK, NEGATIVE, NONFINITE = 0, 1, 2
CLAMP_FLOOR = -1e-6
BIG = 1.7976931348623157e308


def _fill_ghosts(a):
    nx, ny, nz = a.shape
    for j in range(ny):
        for k in range(nz):
            a[0, j, k] = a[2, j, k] if nx > 3 else a[1, j, k]
            a[nx - 1, j, k] = a[nx - 3, j, k] if nx > 3 else a[nx - 2, j, k]
    for i in range(nx):
        for k in range(nz):
            a[i, 0, k] = a[i, 2, k] if ny > 3 else a[i, 1, k]
            a[i, ny - 1, k] = a[i, ny - 3, k] if ny > 3 else a[i, ny - 2, k]
    for i in range(nx):
        for j in range(ny):
            a[i, j, 0] = a[i, j, 2] if nz > 3 else a[i, j, 1]
            a[i, j, nz - 1] = a[i, j, nz - 3] if nz > 3 else a[i, j, nz - 2]


def _clamp(x, state):
    # slow path only; state[0]: clamps, state[1]: status
    if not math.isfinite(x):
        state[1] = NONFINITE
        return x
    if x < 0.0:
        if x > CLAMP_FLOOR:
            state[0] += 1
            return 0.0
        if state[1] == OK:
            state[1] = NEGATIVE
    return x


def _advance(u, v, w, z, un, vn, wn, zn, pw, nsteps, dt, h, prm, active):
    d1, d2, d3, d4 = prm[0], prm[1], prm[2], prm[3]
    chi1, chi2, xi = prm[4], prm[5], prm[6]
    mu1, mu2, mu3 = prm[7], prm[8], prm[9]
    a1, a2, a3, a4, a5, a6 = prm[10], prm[11], prm[12], prm[13], prm[14], prm[15]
    alpha, beta, gamma = prm[16], prm[17], prm[18]
    nx, ny, nz = u.shape
    ax0 = active[0]
    ax1 = active[1]
    c_lap = dt / (h * h)
    c_tax = 0.5 * dt / (h * h)
    flags = np.zeros(2, dtype=np.int64)
    done = 0
    for _ in range(nsteps):
        _fill_ghosts(u)
        _fill_ghosts(v)
        _fill_ghosts(w)
        _fill_ghosts(z)
        for i in range(nx):
            for j in range(ny):
                for k in range(nz):
                    pw[i, j, k] = v[i, j, k] * w[i, j, k]
        for i in range(1, nx - 1):
            for j in range(1, ny - 1):
                for k in range(1, nz - 1):
                    uc = u[i, j, k]
                    vc = v[i, j, k]
                    wc = w[i, j, k]
                    zc = z[i, j, k]
                    pc = pw[i, j, k]
                    # last axis (always active)
                    uL = u[i, j, k - 1]
                    uR = u[i, j, k + 1]
                    vL = v[i, j, k - 1]
                    vR = v[i, j, k + 1]
                    wL = w[i, j, k - 1]
                    wR = w[i, j, k + 1]
                    zL = z[i, j, k - 1]
                    zR = z[i, j, k + 1]
                    lu = uL - 2.0 * uc + uR
                    lv = vL - 2.0 * vc + vR
                    lw = wL - 2.0 * wc + wR
                    lz = zL - 2.0 * zc + zR
                    tu = (uc + uR) * (pw[i, j, k + 1] - pc) - (uL + uc) * (pc - pw[i, j, k - 1])
                    tv = (vc + vR) * (zR - zc) - (vL + vc) * (zc - zL)
                    tw = (wc + wR) * (zR - zc) - (wL + wc) * (zc - zL)
                    if ax1:
                        uL = u[i, j - 1, k]
                        uR = u[i, j + 1, k]
                        vL = v[i, j - 1, k]
                        vR = v[i, j + 1, k]
                        wL = w[i, j - 1, k]
                        wR = w[i, j + 1, k]
                        zL = z[i, j - 1, k]
                        zR = z[i, j + 1, k]
                        lu += uL - 2.0 * uc + uR
                        lv += vL - 2.0 * vc + vR
                        lw += wL - 2.0 * wc + wR
                        lz += zL - 2.0 * zc + zR
                        tu += (uc + uR) * (pw[i, j + 1, k] - pc) - (uL + uc) * (pc - pw[i, j - 1, k])
                        tv += (vc + vR) * (zR - zc) - (vL + vc) * (zc - zL)
                        tw += (wc + wR) * (zR - zc) - (wL + wc) * (zc - zL)
                    if ax0:
                        uL = u[i - 1, j, k]
                        uR = u[i + 1, j, k]
                        vL = v[i - 1, j, k]
                        vR = v[i + 1, j, k]
                        wL = w[i - 1, j, k]
                        wR = w[i + 1, j, k]
                        zL = z[i - 1, j, k]
                        zR = z[i + 1, j, k]
                        lu += uL - 2.0 * uc + uR
                        lv += vL - 2.0 * vc + vR
                        lw += wL - 2.0 * wc + wR
                        lz += zL - 2.0 * zc + zR
                        tu += (uc + uR) * (pw[i + 1, j, k] - pc) - (uL + uc) * (pc - pw[i - 1, j, k])
                        tv += (vc + vR) * (zR - zc) - (vL + vc) * (zc - zL)
                        tw += (wc + wR) * (zR - zc) - (wL + wc) * (zc - zL)
                    ru = mu1 * uc * (1.0 - uc + a1 * vc + a2 * wc)
                    rv = mu2 * vc * (1.0 - vc - a3 * uc + a4 * wc)
                    rw = mu3 * wc * (1.0 - wc - a5 * uc - a6 * vc)
                    rz = alpha * vc + beta * wc - gamma * zc
                    x1 = uc + (d1 * lu * c_lap - chi1 * tu * c_tax + dt * ru)
                    x2 = vc + (d2 * lv * c_lap - chi2 * tv * c_tax + dt * rv)
                    x3 = wc + (d3 * lw * c_lap + xi * tw * c_tax + dt * rw)
                    x4 = zc + (d4 * lz * c_lap + dt * rz)
                    # NaN fails every comparison, so one range test covers both cases
                    if not (0.0 <= x1 <= BIG and 0.0 <= x2 <= BIG and 0.0 <= x3 <= BIG and 0.0 <= x4 <= BIG):
                        x1 = _clamp(x1, flags)
                        x2 = _clamp(x2, flags)
                        x3 = _clamp(x3, flags)
                        x4 = _clamp(x4, flags)
                    un[i, j, k] = x1
                    vn[i, j, k] = x2
                    wn[i, j, k] = x3
                    zn[i, j, k] = x4
        if flags[1] != OK:
            break
        u, un = un, u
        v, vn = vn, v
        w, wn = wn, w
        z, zn = zn, z
        done += 1
    return done, flags[0], flags[1]


if njit is not None:
    _fill_ghosts = njit(cache=True)(_fill_ghosts)
    _clamp = njit(cache=True)(_clamp)
    advance_block = njit(cache=True, fastmath=False)(_advance)
else:  # pragma: no cover
    advance_block = None


def to_padded(a: np.ndarray) -> np.ndarray:
    """Copy an nD field into a ghost-padded 3D array (leading unit axes)."""
    core = a.reshape((1,) * (3 - a.ndim) + a.shape)
    out = np.empty(tuple(n + 2 for n in core.shape))
    out[1:-1, 1:-1, 1:-1] = core
    return out


def from_padded(a: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    return a[1:-1, 1:-1, 1:-1].reshape(shape).copy()


def active_axes(shape: tuple[int, ...]) -> np.ndarray:
    """Flags for the two leading padded axes (the last axis is always active)."""
    core = (1,) * (3 - len(shape)) + tuple(shape)
    return np.array([core[0] > 1, core[1] > 1], dtype=np.bool_)
