"""Hot assembly kernels for the staggered-grid discretizations.

Every function here is a plain loop nest over ndarrays, jitted with
``numba.njit`` at import time.  Setting ``SMITHDD_NUMBA=0`` in the
environment skips the jit and runs the identical code as pure Python/numpy
(the jitted originals stay reachable through ``fn.py_func``, which is what
``benchmarks/bench_kernels.py`` times against).

Unknown layout for the Stokes system on an nx-by-ny subdomain box:

    u  at vertical faces,   shape (nx+1, ny),  index i*ny + j
    v  at horizontal faces, shape (nx, ny+1),  index NU + i*(ny+1) + j
    p  at cell centres,     shape (nx, ny),    index NU + NV + i*ny + j

The interface column sits on the east edge of the box when
``gamma_right == 1`` (the left subdomain) and on the west edge otherwise.
Outer boundaries carry homogeneous Dirichlet velocity; walls at y = 0, 1
hold v-rows directly and enter u/p stencils through reflected ghosts.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENABLED = os.environ.get("SMITHDD_NUMBA", "1") != "0"
if NUMBA_ENABLED:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False


def _maybe_jit(fn):
    if NUMBA_ENABLED:
        return _njit(cache=True)(fn)
    return fn


# Interface-condition variants (which pair of channels is imposed on Gamma).
V_NONE = 0      # no interface: both x-edges are outer Dirichlet (single domain)
V_VEL = 1       # u_n and u_tau given
V_STRESS = 2    # sigma_n and sigma_tau given
V_MIXCOR = 3    # u_n and sigma_tau given
V_MIXUPD = 4    # u_tau and sigma_n given

# Poisson interface kinds for the mixed biharmonic solves.
P_NONE = 0
P_DIRICHLET = 1
P_NEUMANN = 2


def _u_dirichlet_on_gamma(variant: int) -> bool:
    return variant == V_VEL or variant == V_MIXCOR


def _v_dirichlet_on_gamma(variant: int) -> bool:
    return variant == V_VEL or variant == V_MIXUPD


def _needs_gauge(variant: int) -> bool:
    # no pressure appears in the interface data: pin the mean
    return variant == V_NONE or variant == V_VEL or variant == V_MIXCOR


@_maybe_jit
def stokes_matrix_coo(nx, ny, h, nu, c, gamma_right, variant):
    """COO triplets of the subdomain Stokes matrix.

    Returns (rows, cols, vals, n) with the first three trimmed to length n.
    """
    NU = (nx + 1) * ny
    NV = nx * (ny + 1)
    NP = nx * ny
    N = NU + NV + NP
    cap = 8 * N + NP + 8
    rows = np.empty(cap, dtype=np.int64)
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.float64)
    k = 0
    h2 = h * h

    u_dir = variant == V_VEL or variant == V_MIXCOR
    v_dir = variant == V_VEL or variant == V_MIXUPD
    gauge = variant == V_NONE or variant == V_VEL or variant == V_MIXCOR

    # ---- u rows ----
    for i in range(nx + 1):
        for j in range(ny):
            r = i * ny + j
            on_west = i == 0
            on_east = i == nx
            if on_west or on_east:
                on_gamma = variant != V_NONE and (
                    (on_east and gamma_right == 1) or (on_west and gamma_right == 0)
                )
                if (not on_gamma) or u_dir:
                    rows[k] = r
                    cols[k] = r
                    vals[k] = 1.0
                    k += 1
                else:
                    # traction row: half-cell momentum balance at the
                    # interface u-column (exact splitting of the full row)
                    diag = 0.5 * h * c + nu / h
                    if j == 0 or j == ny - 1:
                        diag += 1.5 * nu / h
                    else:
                        diag += nu / h
                    if j > 0:
                        rows[k] = r
                        cols[k] = i * ny + (j - 1)
                        vals[k] = -0.5 * nu / h
                        k += 1
                    if j < ny - 1:
                        rows[k] = r
                        cols[k] = i * ny + (j + 1)
                        vals[k] = -0.5 * nu / h
                        k += 1
                    if on_east:
                        rows[k] = r
                        cols[k] = (nx - 1) * ny + j
                        vals[k] = -nu / h
                        k += 1
                        rows[k] = r
                        cols[k] = NU + NV + (nx - 1) * ny + j
                        vals[k] = -1.0
                        k += 1
                    else:
                        rows[k] = r
                        cols[k] = 1 * ny + j
                        vals[k] = -nu / h
                        k += 1
                        rows[k] = r
                        cols[k] = NU + NV + 0 * ny + j
                        vals[k] = 1.0
                        k += 1
                    rows[k] = r
                    cols[k] = r
                    vals[k] = diag
                    k += 1
            else:
                diag = c + 2.0 * nu / h2
                rows[k] = r
                cols[k] = (i - 1) * ny + j
                vals[k] = -nu / h2
                k += 1
                rows[k] = r
                cols[k] = (i + 1) * ny + j
                vals[k] = -nu / h2
                k += 1
                if j == 0:
                    diag += 3.0 * nu / h2
                    rows[k] = r
                    cols[k] = i * ny + 1
                    vals[k] = -nu / h2
                    k += 1
                elif j == ny - 1:
                    diag += 3.0 * nu / h2
                    rows[k] = r
                    cols[k] = i * ny + (ny - 2)
                    vals[k] = -nu / h2
                    k += 1
                else:
                    diag += 2.0 * nu / h2
                    rows[k] = r
                    cols[k] = i * ny + (j - 1)
                    vals[k] = -nu / h2
                    k += 1
                    rows[k] = r
                    cols[k] = i * ny + (j + 1)
                    vals[k] = -nu / h2
                    k += 1
                rows[k] = r
                cols[k] = r
                vals[k] = diag
                k += 1
                rows[k] = r
                cols[k] = NU + NV + i * ny + j
                vals[k] = 1.0 / h
                k += 1
                rows[k] = r
                cols[k] = NU + NV + (i - 1) * ny + j
                vals[k] = -1.0 / h
                k += 1

    # ---- v rows ----
    for i in range(nx):
        for j in range(ny + 1):
            r = NU + i * (ny + 1) + j
            if j == 0 or j == ny:
                rows[k] = r
                cols[k] = r
                vals[k] = 1.0
                k += 1
                continue
            near_gamma = variant != V_NONE and (
                (gamma_right == 1 and i == nx - 1) or (gamma_right == 0 and i == 0)
            )
            if near_gamma and not v_dir:
                # tangential-traction flux row (exact splitting of the
                # near-column momentum row; data lands in the rhs)
                diag = nu / h + h * c + 2.0 * nu / h
                rows[k] = r
                cols[k] = r - 1
                vals[k] = -nu / h
                k += 1
                rows[k] = r
                cols[k] = r + 1
                vals[k] = -nu / h
                k += 1
                inext = i - 1 if gamma_right == 1 else i + 1
                rows[k] = r
                cols[k] = NU + inext * (ny + 1) + j
                vals[k] = -nu / h
                k += 1
                rows[k] = r
                cols[k] = r
                vals[k] = diag
                k += 1
                rows[k] = r
                cols[k] = NU + NV + i * ny + j
                vals[k] = 1.0
                k += 1
                rows[k] = r
                cols[k] = NU + NV + i * ny + (j - 1)
                vals[k] = -1.0
                k += 1
            else:
                diag = c + 2.0 * nu / h2  # y-part; both neighbours exist
                rows[k] = r
                cols[k] = r - 1
                vals[k] = -nu / h2
                k += 1
                rows[k] = r
                cols[k] = r + 1
                vals[k] = -nu / h2
                k += 1
                # x-part: fold the boundary side (outer wall or Dirichlet
                # interface data) as a reflected ghost
                west_closed = i == 0
                east_closed = i == nx - 1
                if west_closed and east_closed:
                    diag += 6.0 * nu / h2  # nx == 1 unsupported upstream
                elif west_closed:
                    diag += 3.0 * nu / h2
                    rows[k] = r
                    cols[k] = NU + (i + 1) * (ny + 1) + j
                    vals[k] = -nu / h2
                    k += 1
                elif east_closed:
                    diag += 3.0 * nu / h2
                    rows[k] = r
                    cols[k] = NU + (i - 1) * (ny + 1) + j
                    vals[k] = -nu / h2
                    k += 1
                else:
                    diag += 2.0 * nu / h2
                    rows[k] = r
                    cols[k] = NU + (i - 1) * (ny + 1) + j
                    vals[k] = -nu / h2
                    k += 1
                    rows[k] = r
                    cols[k] = NU + (i + 1) * (ny + 1) + j
                    vals[k] = -nu / h2
                    k += 1
                rows[k] = r
                cols[k] = r
                vals[k] = diag
                k += 1
                rows[k] = r
                cols[k] = NU + NV + i * ny + j
                vals[k] = 1.0 / h
                k += 1
                rows[k] = r
                cols[k] = NU + NV + i * ny + (j - 1)
                vals[k] = -1.0 / h
                k += 1

    # ---- continuity / gauge rows ----
    if gamma_right == 1:
        gi, gj = nx - 1, 0
    else:
        gi, gj = 0, 0
    for i in range(nx):
        for j in range(ny):
            r = NU + NV + i * ny + j
            if gauge and i == gi and j == gj:
                for ii in range(nx):
                    for jj in range(ny):
                        rows[k] = r
                        cols[k] = NU + NV + ii * ny + jj
                        vals[k] = 1.0
                        k += 1
            else:
                rows[k] = r
                cols[k] = (i + 1) * ny + j
                vals[k] = 1.0 / h
                k += 1
                rows[k] = r
                cols[k] = i * ny + j
                vals[k] = -1.0 / h
                k += 1
                rows[k] = r
                cols[k] = NU + i * (ny + 1) + (j + 1)
                vals[k] = 1.0 / h
                k += 1
                rows[k] = r
                cols[k] = NU + i * (ny + 1) + j
                vals[k] = -1.0 / h
                k += 1

    return rows[:k], cols[:k], vals[:k], k


@_maybe_jit
def stokes_rhs(nx, ny, h, nu, c, gamma_right, variant, fu, fv,
               d_un, d_utau, d_sign, d_sigtau):
    """Right-hand side matching ``stokes_matrix_coo``.

    fu has shape (nx+1, ny), fv has shape (nx, ny+1); the interface data
    arrays are d_un/d_sign of length ny and d_utau/d_sigtau of length ny-1
    (tangential samples live on interior v rows).
    """
    NU = (nx + 1) * ny
    NV = nx * (ny + 1)
    NP = nx * ny
    rhs = np.zeros(NU + NV + NP, dtype=np.float64)
    h2 = h * h

    u_dir = variant == V_VEL or variant == V_MIXCOR
    v_dir = variant == V_VEL or variant == V_MIXUPD

    for i in range(nx + 1):
        for j in range(ny):
            r = i * ny + j
            on_west = i == 0
            on_east = i == nx
            if on_west or on_east:
                on_gamma = variant != V_NONE and (
                    (on_east and gamma_right == 1) or (on_west and gamma_right == 0)
                )
                if not on_gamma:
                    rhs[r] = 0.0
                elif u_dir:
                    # u_n channel carries the subdomain's outward normal sign
                    rhs[r] = d_un[j] if on_east else -d_un[j]
                else:
                    rhs[r] = d_sign[j] + 0.5 * h * fu[i, j]
            else:
                rhs[r] = fu[i, j]

    for i in range(nx):
        for j in range(ny + 1):
            r = NU + i * (ny + 1) + j
            if j == 0 or j == ny:
                continue
            near_gamma = variant != V_NONE and (
                (gamma_right == 1 and i == nx - 1) or (gamma_right == 0 and i == 0)
            )
            if near_gamma and not v_dir:
                rhs[r] = d_sigtau[j - 1] + h * fv[i, j]
            elif near_gamma:
                rhs[r] = fv[i, j] + 2.0 * nu * d_utau[j - 1] / h2
            else:
                rhs[r] = fv[i, j]

    return rhs


@_maybe_jit
def poisson_matrix_coo(nx, ny, h, gamma_right, bc_kind):
    """COO triplets for the cell-centred (-Laplace) operator.

    Outer edges and walls fold homogeneous Dirichlet ghosts into the stencil;
    the interface column follows bc_kind (data values enter through the rhs).
    """
    NP = nx * ny
    cap = 5 * NP + 8
    rows = np.empty(cap, dtype=np.int64)
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.float64)
    k = 0
    h2 = h * h

    for i in range(nx):
        for j in range(ny):
            r = i * ny + j
            near_gamma = bc_kind != P_NONE and (
                (gamma_right == 1 and i == nx - 1) or (gamma_right == 0 and i == 0)
            )
            if near_gamma and bc_kind == P_NEUMANN:
                # one-sided flux row: (w_near - w_next)/h - h*lapy(w_near)
                diag = 1.0 / h
                inext = i - 1 if gamma_right == 1 else i + 1
                rows[k] = r
                cols[k] = inext * ny + j
                vals[k] = -1.0 / h
                k += 1
                if j == 0 or j == ny - 1:
                    diag += 3.0 / h
                else:
                    diag += 2.0 / h
                if j > 0:
                    rows[k] = r
                    cols[k] = i * ny + (j - 1)
                    vals[k] = -1.0 / h
                    k += 1
                if j < ny - 1:
                    rows[k] = r
                    cols[k] = i * ny + (j + 1)
                    vals[k] = -1.0 / h
                    k += 1
                rows[k] = r
                cols[k] = r
                vals[k] = diag
                k += 1
                continue
            diag = 0.0
            # west
            if i > 0:
                diag += 1.0 / h2
                rows[k] = r
                cols[k] = (i - 1) * ny + j
                vals[k] = -1.0 / h2
                k += 1
            else:
                diag += 2.0 / h2
            # east
            if i < nx - 1:
                diag += 1.0 / h2
                rows[k] = r
                cols[k] = (i + 1) * ny + j
                vals[k] = -1.0 / h2
                k += 1
            else:
                diag += 2.0 / h2
            # south
            if j > 0:
                diag += 1.0 / h2
                rows[k] = r
                cols[k] = i * ny + (j - 1)
                vals[k] = -1.0 / h2
                k += 1
            else:
                diag += 2.0 / h2
            # north
            if j < ny - 1:
                diag += 1.0 / h2
                rows[k] = r
                cols[k] = i * ny + (j + 1)
                vals[k] = -1.0 / h2
                k += 1
            else:
                diag += 2.0 / h2
            rows[k] = r
            cols[k] = r
            vals[k] = diag
            k += 1

    return rows[:k], cols[:k], vals[:k], k


@_maybe_jit
def poisson_rhs(nx, ny, h, gamma_right, bc_kind, interior, gamma_data):
    """Right-hand side matching ``poisson_matrix_coo``.

    interior has shape (nx, ny).  For Dirichlet interface data the ghost
    contribution is added on top of the interior value; for Neumann the flux
    row replaces it and gamma_data must already carry the source adjustment.
    """
    NP = nx * ny
    rhs = np.empty(NP, dtype=np.float64)
    h2 = h * h
    for i in range(nx):
        for j in range(ny):
            r = i * ny + j
            near_gamma = bc_kind != P_NONE and (
                (gamma_right == 1 and i == nx - 1) or (gamma_right == 0 and i == 0)
            )
            if near_gamma and bc_kind == P_NEUMANN:
                rhs[r] = gamma_data[j]
            elif near_gamma:
                rhs[r] = interior[i, j] + 2.0 * gamma_data[j] / h2
            else:
                rhs[r] = interior[i, j]
    return rhs
