"""MAC staggered grids, discrete fields and interface traces.

The domain is the rectangle (-A, B) x (0, 1) split by the interface at
x = 0.  Each subdomain is discretized independently with matching mesh size,
so that the interface coincides with a vertical face column: the normal
velocity u lives exactly on it, while v, p and the scalar fields sit half a
cell away.

Trace extraction is co-designed with the assembly in ``kernels``:

* flux-type channels (sigma_n, sigma_tau, dn_w, dn_lap_w) are the residual
  functionals of the half stencil rows adjacent to the interface, so the
  channel sums over both subdomains telescope exactly to interior stencil
  rows and vanish (to solver precision) on any single-domain solution;
* value-type channels (u_tau, w, lap_w) reconstruct the ghost value implied
  by the near-column stencil row, which both sides evaluate to the same
  face average on a single-domain solution.

Imposing a channel uses the very same functional as a boundary row, which
makes extract/impose exact inverses of each other.  Those two facts give the
domain-decomposition iterations an exact discrete fixed point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .manufactured import BilapCase, StokesCase

SIDES = ("left", "right")

#: parity of each channel under the subdomain swap: +1 means the physical
#: jump is the sum of the two one-sided channel values (normal-oriented
#: quantities), -1 means it is the difference (plain values).
CHANNEL_PARITY = {
    "u_n": +1,
    "sigma_n": +1,
    "sigma_tau": +1,
    "u_tau": -1,
    "w": -1,
    "lap_w": -1,
    "dn_w": +1,
    "dn_lap_w": +1,
}

STOKES_CHANNELS = ("u_n", "u_tau", "sigma_n", "sigma_tau")
BILAP_CHANNELS = ("w", "lap_w", "dn_w", "dn_lap_w")


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class MacGrid:
    """Uniform staggered grid on (-A, B) x (0, 1) with the interface at x=0."""

    A: float
    B: float
    h: float
    nx_left: int
    nx_right: int
    ny: int

    def nx(self, side: str) -> int:
        if side == "left":
            return self.nx_left
        if side == "right":
            return self.nx_right
        if side == "full":
            return self.nx_left + self.nx_right
        raise GridError(f"unknown side {side!r}")

    def x0(self, side: str) -> float:
        return 0.0 if side == "right" else -self.A


@dataclass(frozen=True)
class PhysicsParams:
    """Viscosity and reaction coefficient of the momentum equations."""

    nu: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("viscosity nu must be positive")
        if self.c < 0:
            raise ValueError("reaction coefficient c must be non-negative")


@dataclass
class StokesField:
    """Discrete velocity/pressure triple on one staggered box."""

    u: np.ndarray
    v: np.ndarray
    p: np.ndarray

    def copy(self) -> "StokesField":
        return StokesField(self.u.copy(), self.v.copy(), self.p.copy())


@dataclass
class ScalarPair:
    """Cell-centred scalar and its Laplacian (mixed biharmonic form)."""

    w: np.ndarray
    phi: np.ndarray

    def copy(self) -> "ScalarPair":
        return ScalarPair(self.w.copy(), self.phi.copy())


@dataclass
class InterfaceTrace:
    """Named discrete channels sampled along the interface."""

    kind: str  # "stokes" or "bilaplacian"
    values: Dict[str, np.ndarray]
    h: float

    def channel(self, name: str) -> np.ndarray:
        if name not in self.values:
            raise GridError(f"trace has no channel {name!r}")
        return self.values[name]


def build_grid(A: float, B: float, h: float) -> MacGrid:
    """Validate extents against the mesh size and place the interface at x=0."""
    if A <= 0 or B <= 0 or h <= 0:
        raise GridError("extents and mesh size must be positive")
    counts = []
    for name, extent in (("A", A), ("B", B), ("1 (height)", 1.0)):
        ratio = extent / h
        n = round(ratio)
        if n < 1 or abs(ratio - n) > 1e-12 * max(abs(ratio), 1.0):
            raise GridError(
                f"extent {name} = {extent} is not an integer multiple of h = {h}"
            )
        counts.append(int(n))
    nxl, nxr, ny = counts
    if min(nxl, nxr) < 2 or ny < 2:
        raise GridError("need at least two cells per direction in each subdomain")
    return MacGrid(A=A, B=B, h=h, nx_left=nxl, nx_right=nxr, ny=ny)


# -- node coordinates ---------------------------------------------------------


def u_coords(grid: MacGrid, side: str):
    nx, h = grid.nx(side), grid.h
    x = grid.x0(side) + h * np.arange(nx + 1)
    y = (np.arange(grid.ny) + 0.5) * h
    return np.meshgrid(x, y, indexing="ij")


def v_coords(grid: MacGrid, side: str):
    nx, h = grid.nx(side), grid.h
    x = grid.x0(side) + h * (np.arange(nx) + 0.5)
    y = h * np.arange(grid.ny + 1)
    return np.meshgrid(x, y, indexing="ij")


def cell_coords(grid: MacGrid, side: str):
    nx, h = grid.nx(side), grid.h
    x = grid.x0(side) + h * (np.arange(nx) + 0.5)
    y = (np.arange(grid.ny) + 0.5) * h
    return np.meshgrid(x, y, indexing="ij")


def interface_cell_y(grid: MacGrid) -> np.ndarray:
    """y of cell-centre rows (length ny), where u_n/sigma_n/scalars sample."""
    return (np.arange(grid.ny) + 0.5) * grid.h


def interface_node_y(grid: MacGrid) -> np.ndarray:
    """y of interior v rows (length ny-1), where u_tau/sigma_tau sample."""
    return grid.h * np.arange(1, grid.ny)


# -- trace extraction ---------------------------------------------------------


def _lapy_wall_ghost(col: np.ndarray, h: float) -> np.ndarray:
    """Second y-difference of a column whose walls are reflected ghosts."""
    out = np.empty_like(col)
    out[1:-1] = (col[:-2] - 2.0 * col[1:-1] + col[2:]) / (h * h)
    out[0] = (-3.0 * col[0] + col[1]) / (h * h)
    out[-1] = (col[-2] - 3.0 * col[-1]) / (h * h)
    return out


def _near_columns_stokes(field: StokesField, nx: int, side: str):
    if side == "left":
        return (
            field.u[nx],
            field.u[nx - 1],
            field.v[nx - 1],
            field.v[nx - 2],
            field.p[nx - 1],
        )
    return field.u[0], field.u[1], field.v[0], field.v[1], field.p[0]


def extract_stokes_trace(
    field: StokesField,
    grid: MacGrid,
    side: str,
    params: PhysicsParams,
    forcing: Optional[StokesCase] = None,
) -> InterfaceTrace:
    """Interface channels of a subdomain Stokes field.

    ``forcing`` must be the case the field was solved with (None for the
    homogeneous correction solves); the flux channels contain the local
    momentum balance and need it to cancel on forced solutions.
    """
    if side not in SIDES:
        raise GridError(f"traces are one-sided; got side {side!r}")
    nx, ny, h = grid.nx(side), grid.ny, grid.h
    nu, c = params.nu, params.c
    ug, ui, vg, vn, pg = _near_columns_stokes(field, nx, side)

    yc = interface_cell_y(grid)
    yv = interface_node_y(grid)
    xv = -0.5 * h if side == "left" else 0.5 * h
    if forcing is not None:
        fu_g = forcing.fu(np.zeros_like(yc), yc)
        fv_g = forcing.fv(np.full_like(yv, xv), yv)
    else:
        fu_g = np.zeros(ny)
        fv_g = np.zeros(ny - 1)

    half_cell = 0.5 * h * (c * ug - nu * _lapy_wall_ghost(ug, h) - fu_g)
    if side == "left":
        u_n = ug.copy()
        sigma_n = nu * (ug - ui) / h - pg + half_cell
    else:
        u_n = -ug
        sigma_n = -nu * (ui - ug) / h + pg + half_cell

    vmid = vg[1:-1]
    lap_v = (vg[:-2] - 2.0 * vmid + vg[2:]) / (h * h)
    dyp = (pg[1:] - pg[:-1]) / h
    core = c * vmid - nu * lap_v + dyp - fv_g
    sigma_tau = nu * (vmid - vn[1:-1]) / h + h * core
    ghost = core * (h * h) / nu + 2.0 * vmid - vn[1:-1]
    u_tau = 0.5 * (ghost + vmid)

    return InterfaceTrace(
        kind="stokes",
        values={"u_n": u_n, "u_tau": u_tau, "sigma_n": sigma_n, "sigma_tau": sigma_tau},
        h=h,
    )


def extract_bilap_trace(
    pair: ScalarPair,
    grid: MacGrid,
    side: str,
    nu: float = 1.0,
    g: Optional[BilapCase] = None,
) -> InterfaceTrace:
    """Interface channels of a subdomain biharmonic pair (w, lap w)."""
    if side not in SIDES:
        raise GridError(f"traces are one-sided; got side {side!r}")
    nx, ny, h = grid.nx(side), grid.ny, grid.h
    if side == "left":
        wg, wn = pair.w[nx - 1], pair.w[nx - 2]
        fg, fn = pair.phi[nx - 1], pair.phi[nx - 2]
        xg = -0.5 * h
    else:
        wg, wn = pair.w[0], pair.w[1]
        fg, fn = pair.phi[0], pair.phi[1]
        xg = 0.5 * h

    yc = interface_cell_y(grid)
    gv = g.g(np.full_like(yc, xg), yc) if g is not None else np.zeros(ny)

    lap_w = _lapy_wall_ghost(wg, h)
    lap_f = _lapy_wall_ghost(fg, h)

    ghost_w = (fg - lap_w) * (h * h) + 2.0 * wg - wn
    ghost_f = (-gv / nu - lap_f) * (h * h) + 2.0 * fg - fn

    return InterfaceTrace(
        kind="bilaplacian",
        values={
            "w": 0.5 * (ghost_w + wg),
            "lap_w": 0.5 * (ghost_f + fg),
            "dn_w": (wg - wn) / h - h * (lap_w - fg),
            "dn_lap_w": (fg - fn) / h - h * (lap_f + gv / nu),
        },
        h=h,
    )


def jump_norm(t1: InterfaceTrace, t2: InterfaceTrace, channel: str) -> float:
    """Scaled discrete L2 norm of the inter-subdomain jump of one channel.

    Channel parities are chosen so that a continuous single-domain solution
    restricted to the two sides gives (numerically) zero for every channel.
    """
    if t1.kind != t2.kind:
        raise GridError(f"trace kinds differ: {t1.kind!r} vs {t2.kind!r}")
    if t1.h != t2.h:
        raise GridError("traces come from different grids")
    a = t1.channel(channel)
    b = t2.channel(channel)
    jump = a + CHANNEL_PARITY[channel] * b
    return float(np.sqrt(t1.h * np.sum(jump * jump)))


def zero_trace(kind: str, grid: MacGrid) -> InterfaceTrace:
    ny, h = grid.ny, grid.h
    if kind == "stokes":
        values = {
            "u_n": np.zeros(ny),
            "u_tau": np.zeros(ny - 1),
            "sigma_n": np.zeros(ny),
            "sigma_tau": np.zeros(ny - 1),
        }
    elif kind == "bilaplacian":
        values = {name: np.zeros(ny) for name in BILAP_CHANNELS}
    else:
        raise GridError(f"unknown trace kind {kind!r}")
    return InterfaceTrace(kind=kind, values=values, h=h)


# -- restriction of single-domain fields ---------------------------------------


def restrict_stokes(full: StokesField, grid: MacGrid, side: str) -> StokesField:
    """Restriction of a full-domain field to one subdomain (shared u column)."""
    nl = grid.nx_left
    if side == "left":
        return StokesField(
            full.u[: nl + 1].copy(), full.v[:nl].copy(), full.p[:nl].copy()
        )
    return StokesField(full.u[nl:].copy(), full.v[nl:].copy(), full.p[nl:].copy())


def restrict_bilap(full: ScalarPair, grid: MacGrid, side: str) -> ScalarPair:
    nl = grid.nx_left
    if side == "left":
        return ScalarPair(full.w[:nl].copy(), full.phi[:nl].copy())
    return ScalarPair(full.w[nl:].copy(), full.phi[nl:].copy())


# -- CSV field dumps ------------------------------------------------------------


def dump_field_csv(grid: MacGrid, side: str, obj, outdir: str) -> list:
    """Write one (x, y, value) CSV per channel; returns the paths written."""
    os.makedirs(outdir, exist_ok=True)
    if isinstance(obj, StokesField):
        channels = {
            "u": (obj.u, u_coords(grid, side)),
            "v": (obj.v, v_coords(grid, side)),
            "p": (obj.p, cell_coords(grid, side)),
        }
    elif isinstance(obj, ScalarPair):
        cc = cell_coords(grid, side)
        channels = {"w": (obj.w, cc), "phi": (obj.phi, cc)}
    else:
        raise GridError(f"cannot dump object of type {type(obj).__name__}")
    paths = []
    for name, (arr, (xs, ys)) in channels.items():
        path = os.path.join(outdir, f"{name}.csv")
        with open(path, "w") as f:
            f.write("x,y,value\n")
            for xi, yi, vi in zip(xs.ravel(), ys.ravel(), arr.ravel()):
                f.write(f"{xi!r},{yi!r},{vi!r}\n")
        paths.append(path)
    return paths
