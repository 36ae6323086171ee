"""Analytic manufactured solutions and the forcings they induce.

Velocities come from a stream function (divergence-free by construction,
vanishing with its tangential derivative on the outer boundary), pressures
are smooth zero-mean fields.  All forcing terms are derived symbolically and
lambdified, so there is no hand-differentiation to get wrong.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
import sympy as sp

Field2D = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _vectorize(expr, x, y) -> Field2D:
    fn = sp.lambdify((x, y), expr, modules="numpy")

    def call(xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        out = fn(xs, ys)
        shape = np.broadcast(xs, ys).shape
        return np.broadcast_to(np.asarray(out, dtype=float), shape).copy()

    return call


@dataclass(frozen=True)
class StokesCase:
    """Exact (u, v, p) with the forcing for c*u - nu*lap(u) + grad p, div u = 0."""

    name: str
    A: float
    B: float
    nu: float
    c: float
    u: Field2D = field(repr=False)
    v: Field2D = field(repr=False)
    p: Field2D = field(repr=False)
    fu: Field2D = field(repr=False)
    fv: Field2D = field(repr=False)


@dataclass(frozen=True)
class BilapCase:
    """Exact (w, lap w) with the source for -nu*lap^2(w) = g."""

    name: str
    A: float
    B: float
    nu: float
    w: Field2D = field(repr=False)
    phi: Field2D = field(repr=False)
    g: Field2D = field(repr=False)


@lru_cache(maxsize=None)
def stokes_case(A: float, B: float, nu: float, c: float, name: str = "default") -> StokesCase:
    """Manufactured Stokes problem on (-A, B) x (0, 1).

    Variants:
      - "default": squared-sine stream function, smooth for any aspect ratio
      - "alt": doubled tangential frequency, used for forcing-insensitivity
      - "sym": mirror-symmetric flow (odd stream function), requires A == B
    """
    x, y = sp.symbols("x y", real=True)
    length = A + B
    s = (x + A) / length
    if name == "default":
        psi = sp.sin(sp.pi * s) ** 2 * sp.sin(sp.pi * y) ** 2
        p_expr = sp.cos(sp.pi * x) * sp.cos(sp.pi * y)
    elif name == "alt":
        psi = sp.sin(2 * sp.pi * s) ** 2 * sp.sin(sp.pi * y) ** 2
        p_expr = sp.cos(2 * sp.pi * x) * sp.cos(sp.pi * y)
    elif name == "sym":
        if abs(A - B) > 1e-14:
            raise ValueError("the mirror-symmetric case needs A == B")
        psi = sp.sin(sp.pi * s) ** 2 * sp.sin(2 * sp.pi * s) * sp.sin(sp.pi * y) ** 2
        p_expr = sp.cos(sp.pi * x) * sp.cos(sp.pi * y)
    else:
        raise ValueError(f"unknown manufactured case {name!r}")

    u_expr = sp.diff(psi, y)
    v_expr = -sp.diff(psi, x)
    mean = sp.integrate(sp.integrate(p_expr, (x, -A, B)), (y, 0, 1)) / length
    p_expr = sp.simplify(p_expr - mean)

    def momentum(w_expr, dp):
        return c * w_expr - nu * (sp.diff(w_expr, x, 2) + sp.diff(w_expr, y, 2)) + dp

    fu_expr = momentum(u_expr, sp.diff(p_expr, x))
    fv_expr = momentum(v_expr, sp.diff(p_expr, y))
    return StokesCase(
        name,
        A,
        B,
        nu,
        c,
        _vectorize(u_expr, x, y),
        _vectorize(v_expr, x, y),
        _vectorize(p_expr, x, y),
        _vectorize(fu_expr, x, y),
        _vectorize(fv_expr, x, y),
    )


@lru_cache(maxsize=None)
def bilap_case(A: float, B: float, nu: float, name: str = "default") -> BilapCase:
    """Manufactured biharmonic problem; w and lap w vanish on the boundary."""
    x, y = sp.symbols("x y", real=True)
    length = A + B
    s = (x + A) / length
    if name == "default":
        w_expr = sp.sin(sp.pi * s) * sp.sin(sp.pi * y)
    elif name == "alt":
        w_expr = sp.sin(2 * sp.pi * s) * sp.sin(sp.pi * y)
    else:
        raise ValueError(f"unknown manufactured case {name!r}")
    phi_expr = sp.diff(w_expr, x, 2) + sp.diff(w_expr, y, 2)
    g_expr = -nu * (sp.diff(phi_expr, x, 2) + sp.diff(phi_expr, y, 2))
    return BilapCase(
        name,
        A,
        B,
        nu,
        _vectorize(w_expr, x, y),
        _vectorize(phi_expr, x, y),
        _vectorize(g_expr, x, y),
    )
