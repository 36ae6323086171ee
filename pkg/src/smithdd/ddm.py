"""The interface iterations: bi-Laplacian prototype, the mixed-channel
Stokes algorithm derived from the Smith factorization, and the classical
Neumann-Neumann baseline.

Every iteration is one correction half-step (homogeneous solves driven by
interface-jump averages) followed by one update half-step (forced solves
with additively updated interface data).  Channel conventions follow
``grid.CHANNEL_PARITY``: normal-oriented channels (u_n, sigma_n, sigma_tau,
dn_*) carry each subdomain's outward orientation, so their physical jump is
the plain sum of the two one-sided values; value channels (u_tau, w, lap_w)
jump as differences.

In those conventions the three algorithms read:

  bilap correction   dn_lap_w | dn_w   <- -(sum)/2, same data on both sides
  bilap update       lap_w | w         <- own trace + (value sum)/2

  new-alg correction u_n               <- -/+ (sum)/2  (sign flips with side)
                     sigma_tau         <- -(sum)/2, same on both sides
  new-alg update     u_tau             <- own + (value sum)/2
                     sigma_n           <- own +/- (difference)/2

  N-N correction     sigma_n, sigma_tau <- -(sum)/2, same on both sides
  N-N update         u_n               <- own +/- (difference)/2
                     u_tau             <- own + (value sum)/2

The +/- difference updates are the odd-channel form of adding the same
global vector to both subdomains (velocity averages stay single-valued and
traction updates stay action-reaction balanced).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from .grid import (
    BILAP_CHANNELS,
    MacGrid,
    PhysicsParams,
    ScalarPair,
    STOKES_CHANNELS,
    StokesField,
    extract_bilap_trace,
    extract_stokes_trace,
    jump_norm,
    zero_trace,
)
from .manufactured import BilapCase, StokesCase, bilap_case, stokes_case
from .subsolve import make_bc, solve_bilap_subdomain, solve_stokes_subdomain

ALGORITHMS = ("smith-ddm", "neumann-neumann", "bilap-ddm")

#: convergence is declared on the jump of the normal derivative of the
#: tangential velocity; under the gradient-form stress that is sigma_tau/nu
STOPPING_CHANNEL = {"stokes": "sigma_tau", "bilaplacian": "dn_w"}

DIVERGENCE_FACTOR = 1e6


@dataclass
class DdState:
    """Current subdomain iterates plus the per-step jump history."""

    left: Union[StokesField, ScalarPair]
    right: Union[StokesField, ScalarPair]
    iteration: int = 0
    history: List[Dict[str, float]] = field(default_factory=list)

    def advanced(self, left, right, jumps: Dict[str, float]) -> "DdState":
        return DdState(
            left=left,
            right=right,
            iteration=self.iteration + 1,
            history=self.history + [jumps],
        )


@dataclass
class IterationLog:
    """Outcome of one run: counts, verdict and per-iteration jump norms."""

    algorithm: str
    counts: int
    verdict: str  # converged | diverged | max_iter
    stopping_channel: str
    per_iter: List[Dict[str, float]]  # index 0 = initial state

    def stopping_jumps(self) -> List[float]:
        return [row[self.stopping_channel] for row in self.per_iter]

    def reduction_factors(self) -> List[float]:
        js = self.stopping_jumps()
        out = []
        for k in range(1, len(js)):
            out.append(js[k] / js[k - 1] if js[k - 1] > 0 else float("nan"))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("iter,channel,jump_norm,reduction_factor\n")
        prev: Dict[str, float] = {}
        for it, row in enumerate(self.per_iter):
            for channel in sorted(row):
                jump = row[channel]
                if it == 0 or prev.get(channel, 0.0) == 0.0:
                    red = ""
                else:
                    red = repr(jump / prev[channel])
                buf.write(f"{it},{channel},{jump!r},{red}\n")
            prev = row
        return buf.getvalue()


# -- trace bookkeeping ----------------------------------------------------------


def _stokes_jumps(t1, t2) -> Dict[str, float]:
    return {ch: jump_norm(t1, t2, ch) for ch in STOKES_CHANNELS}


def _bilap_jumps(t1, t2) -> Dict[str, float]:
    return {ch: jump_norm(t1, t2, ch) for ch in BILAP_CHANNELS}


def stokes_state_jumps(
    state: DdState, grid: MacGrid, params: PhysicsParams, forcing: StokesCase
) -> Dict[str, float]:
    t1 = extract_stokes_trace(state.left, grid, "left", params, forcing)
    t2 = extract_stokes_trace(state.right, grid, "right", params, forcing)
    return _stokes_jumps(t1, t2)


def bilap_state_jumps(
    state: DdState, grid: MacGrid, nu: float, g: BilapCase
) -> Dict[str, float]:
    t1 = extract_bilap_trace(state.left, grid, "left", nu, g)
    t2 = extract_bilap_trace(state.right, grid, "right", nu, g)
    return _bilap_jumps(t1, t2)


# -- initialization ---------------------------------------------------------------


def initialize_stokes(
    grid: MacGrid, params: PhysicsParams, forcing: StokesCase
) -> DdState:
    """Zero interface traces: both subdomains solved with u = 0 on Gamma."""
    fields = {}
    for side in ("left", "right"):
        bc = make_bc("dirichlet_velocity", grid)
        fields[side] = solve_stokes_subdomain(grid, side, params, bc, forcing)
    return DdState(left=fields["left"], right=fields["right"])


def initialize_bilap(grid: MacGrid, nu: float, g: BilapCase) -> DdState:
    fields = {}
    for side in ("left", "right"):
        bc = make_bc("bilap_dirichlet", grid)
        fields[side] = solve_bilap_subdomain(grid, side, nu, bc, g)
    return DdState(left=fields["left"], right=fields["right"])


# -- the three steps ---------------------------------------------------------------


def bilap_ddm_step(
    state: DdState, grid: MacGrid, nu: float, g: BilapCase
) -> DdState:
    """One correction+update cycle of the bi-Laplacian iteration."""
    t1 = extract_bilap_trace(state.left, grid, "left", nu, g)
    t2 = extract_bilap_trace(state.right, grid, "right", nu, g)

    # correction: homogeneous solves, Neumann data = negative half-sums
    dn_w = -0.5 * (t1.values["dn_w"] + t2.values["dn_w"])
    dn_lap = -0.5 * (t1.values["dn_lap_w"] + t2.values["dn_lap_w"])
    corr = {}
    for side in ("left", "right"):
        bc = make_bc("bilap_neumann", grid, dn_w=dn_w, dn_lap_w=dn_lap)
        corr[side] = solve_bilap_subdomain(grid, side, nu, bc, None)
    c1 = extract_bilap_trace(corr["left"], grid, "left", nu, None)
    c2 = extract_bilap_trace(corr["right"], grid, "right", nu, None)

    # update: forced solves, Dirichlet data = own trace + value average
    avg_w = 0.5 * (c1.values["w"] + c2.values["w"])
    avg_lap = 0.5 * (c1.values["lap_w"] + c2.values["lap_w"])
    new = {}
    for side, tr in (("left", t1), ("right", t2)):
        bc = make_bc(
            "bilap_dirichlet",
            grid,
            w=tr.values["w"] + avg_w,
            lap_w=tr.values["lap_w"] + avg_lap,
        )
        new[side] = solve_bilap_subdomain(grid, side, nu, bc, g)

    n1 = extract_bilap_trace(new["left"], grid, "left", nu, g)
    n2 = extract_bilap_trace(new["right"], grid, "right", nu, g)
    return state.advanced(new["left"], new["right"], _bilap_jumps(n1, n2))


def stokes_smith_ddm_step(
    state: DdState, grid: MacGrid, params: PhysicsParams, forcing: StokesCase
) -> DdState:
    """One cycle of the Smith-derived algorithm.

    Correction imposes normal velocity and tangential stress; update
    imposes tangential velocity and normal stress.
    """
    t1 = extract_stokes_trace(state.left, grid, "left", params, forcing)
    t2 = extract_stokes_trace(state.right, grid, "right", params, forcing)

    sum_un = t1.values["u_n"] + t2.values["u_n"]
    sum_st = t1.values["sigma_tau"] + t2.values["sigma_tau"]
    corr = {}
    for side, sign in (("left", -1.0), ("right", +1.0)):
        bc = make_bc(
            "mixed_correction",
            grid,
            u_n=sign * 0.5 * sum_un,
            sigma_tau=-0.5 * sum_st,
        )
        corr[side] = solve_stokes_subdomain(grid, side, params, bc, None)
    c1 = extract_stokes_trace(corr["left"], grid, "left", params, None)
    c2 = extract_stokes_trace(corr["right"], grid, "right", params, None)

    avg_ut = 0.5 * (c1.values["u_tau"] + c2.values["u_tau"])
    diff_sn = 0.5 * (c1.values["sigma_n"] - c2.values["sigma_n"])
    new = {}
    for side, tr, sign in (("left", t1, +1.0), ("right", t2, -1.0)):
        bc = make_bc(
            "mixed_update",
            grid,
            u_tau=tr.values["u_tau"] + avg_ut,
            sigma_n=tr.values["sigma_n"] + sign * diff_sn,
        )
        new[side] = solve_stokes_subdomain(grid, side, params, bc, forcing)

    n1 = extract_stokes_trace(new["left"], grid, "left", params, forcing)
    n2 = extract_stokes_trace(new["right"], grid, "right", params, forcing)
    return state.advanced(new["left"], new["right"], _stokes_jumps(n1, n2))


def stokes_neumann_neumann_step(
    state: DdState, grid: MacGrid, params: PhysicsParams, forcing: StokesCase
) -> DdState:
    """One cycle of the iterative Neumann-Neumann baseline.

    Correction imposes the full stress, update the full velocity.
    """
    t1 = extract_stokes_trace(state.left, grid, "left", params, forcing)
    t2 = extract_stokes_trace(state.right, grid, "right", params, forcing)

    sn = -0.5 * (t1.values["sigma_n"] + t2.values["sigma_n"])
    st = -0.5 * (t1.values["sigma_tau"] + t2.values["sigma_tau"])
    corr = {}
    for side in ("left", "right"):
        bc = make_bc("stress", grid, sigma_n=sn, sigma_tau=st)
        corr[side] = solve_stokes_subdomain(grid, side, params, bc, None)
    c1 = extract_stokes_trace(corr["left"], grid, "left", params, None)
    c2 = extract_stokes_trace(corr["right"], grid, "right", params, None)

    diff_un = 0.5 * (c1.values["u_n"] - c2.values["u_n"])
    avg_ut = 0.5 * (c1.values["u_tau"] + c2.values["u_tau"])
    new = {}
    for side, tr, fld, sign in (
        ("left", t1, state.left, +1.0),
        ("right", t2, state.right, -1.0),
    ):
        bc = make_bc(
            "dirichlet_velocity",
            grid,
            u_n=tr.values["u_n"] + sign * diff_un,
            u_tau=tr.values["u_tau"] + avg_ut,
        )
        new[side] = solve_stokes_subdomain(
            grid, side, params, bc, forcing, pressure_mean=float(fld.p.mean())
        )

    n1 = extract_stokes_trace(new["left"], grid, "left", params, forcing)
    n2 = extract_stokes_trace(new["right"], grid, "right", params, forcing)
    return state.advanced(new["left"], new["right"], _stokes_jumps(n1, n2))


# -- driver ------------------------------------------------------------------------


def run(algorithm: str, config) -> IterationLog:
    """Run one interface iteration to the configured stopping criterion.

    ``config`` carries A, B, h, nu, c, reduction_factor, max_iter and the
    manufactured forcing name (see ``cli.RunConfig``).
    """
    from .grid import build_grid  # local import keeps module load light

    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    grid = build_grid(config.A, config.B, config.h)
    reduction = config.reduction_factor
    max_iter = config.max_iter
    forcing_name = getattr(config, "forcing", "default")

    if algorithm == "bilap-ddm":
        nu = config.nu
        g = bilap_case(config.A, config.B, nu, forcing_name)
        state = initialize_bilap(grid, nu, g)
        jumps0 = bilap_state_jumps(state, grid, nu, g)
        stepper = lambda s: bilap_ddm_step(s, grid, nu, g)
        stop = STOPPING_CHANNEL["bilaplacian"]
    else:
        params = PhysicsParams(nu=config.nu, c=config.c)
        forcing = stokes_case(config.A, config.B, config.nu, config.c, forcing_name)
        state = initialize_stokes(grid, params, forcing)
        jumps0 = stokes_state_jumps(state, grid, params, forcing)
        step_fn = (
            stokes_smith_ddm_step
            if algorithm == "smith-ddm"
            else stokes_neumann_neumann_step
        )
        stepper = lambda s: step_fn(s, grid, params, forcing)
        stop = STOPPING_CHANNEL["stokes"]

    per_iter = [jumps0]
    j0 = jumps0[stop]
    if j0 == 0.0:
        return IterationLog(algorithm, 0, "converged", stop, per_iter)

    for k in range(1, max_iter + 1):
        state = stepper(state)
        row = state.history[-1]
        per_iter.append(row)
        jk = row[stop]
        if jk <= reduction * j0:
            return IterationLog(algorithm, k, "converged", stop, per_iter)
        if jk > DIVERGENCE_FACTOR * j0:
            return IterationLog(algorithm, k, "diverged", stop, per_iter)
    return IterationLog(algorithm, max_iter, "max_iter", stop, per_iter)


def contraction_estimate(log: IterationLog) -> float:
    """Geometric mean of interior per-iteration reduction factors.

    The first and last factors are excluded (start-up transient and the
    partially-converged final step would bias the estimate).
    """
    jumps = log.stopping_jumps()
    if len(jumps) < 5 or any(j <= 0 for j in jumps):
        raise ValueError(
            "contraction estimate needs at least 4 iterations with positive jumps"
        )
    factors = [jumps[k] / jumps[k - 1] for k in range(1, len(jumps))]
    interior = factors[1:-1]
    return float(np.exp(np.mean(np.log(interior))))
