"""smithdd: Smith-factorization-derived domain decomposition for Stokes.

Subpackages/modules:

- ``exactalg``: exact Gaussian-rational and polynomial arithmetic
- ``smith``: Smith normal form of polynomial matrices, Stokes symbols
- ``grid``: MAC staggered-grid types, interface traces, jump norms
- ``kernels``: numba-jitted assembly kernels (numpy fallback via
  ``SMITHDD_NUMBA=0``)
- ``subsolve``: sparse subdomain solves and interface condition variants
- ``manufactured``: analytic test solutions and forcings
- ``ddm``: the interface iterations and the experiment runner
- ``cli``: configuration parsing, sweeps and the ``smithdd`` entry point
"""

__version__ = "0.1.0"
