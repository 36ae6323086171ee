"""Smith normal form of square polynomial matrices over Q(i)[L].

The entries live in ``exactalg.Poly``; since the coefficient ring is a field,
Q(i)[L] is a Euclidean domain and the classical elimination applies: pick a
minimal-degree pivot, clear its row and column with exact ``divmod``, repeat
until the pivot divides every remaining entry, then recurse on the trailing
block.  Elementary row/column operations are mirrored into accumulators so
that ``A = E @ D @ F`` holds with exact coefficient equality.

Also provides the 2D and 3D Fourier symbols of the Stokes operator (the
derivative across the interface kept as the indeterminate L, the tangential
derivatives replaced by i*k factors).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from .exactalg import GaussianRational, Poly, RatLike, render_poly


class SmithSingularError(ValueError):
    """Raised when the input matrix is singular over the rational function field."""


class PolyMatrix:
    """Square matrix of ``Poly`` entries."""

    __slots__ = ("n", "entries")

    def __init__(self, rows: Sequence[Sequence]):
        ents = tuple(tuple(Poly._coerce(e) for e in row) for row in rows)
        n = len(ents)
        if n < 1 or any(len(row) != n for row in ents):
            raise ValueError("PolyMatrix must be square with dimension >= 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", ents)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls(
            [[Poly.one() if i == j else Poly.zero() for j in range(n)] for i in range(n)]
        )

    @classmethod
    def diagonal(cls, diag: Sequence) -> "PolyMatrix":
        n = len(diag)
        return cls(
            [
                [Poly._coerce(diag[i]) if i == j else Poly.zero() for j in range(n)]
                for i in range(n)
            ]
        )

    def __getitem__(self, ij: Tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch in polynomial matrix product")
        n = self.n
        return PolyMatrix(
            [
                [
                    sum(
                        (self.entries[i][k] * other.entries[k][j] for k in range(n)),
                        Poly.zero(),
                    )
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return PolyMatrix(
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j].is_zero()
            for i in range(self.n)
            for j in range(self.n)
            if i != j
        )

    def diag(self) -> List[Poly]:
        return [self.entries[i][i] for i in range(self.n)]

    def det(self) -> Poly:
        return poly_matrix_det(self)

    def render(self, indent: str = "") -> str:
        return "\n".join(
            indent + "[ " + ",  ".join(render_poly(e) for e in row) + " ]"
            for row in self.entries
        )

    def __repr__(self):
        return f"PolyMatrix(\n{self.render('  ')}\n)"


def poly_matrix_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """Exact matrix product."""
    return a @ b


def poly_matrix_det(a: PolyMatrix) -> Poly:
    """Exact determinant by cofactor expansion (matrices here are tiny)."""
    n = a.n
    if n == 1:
        return a.entries[0][0]
    rows = [list(r) for r in a.entries]

    def _det(rs: List[List[Poly]]) -> Poly:
        m = len(rs)
        if m == 1:
            return rs[0][0]
        total = Poly.zero()
        sign = 1
        for j in range(m):
            if rs[0][j]:
                minor = [[rs[i][k] for k in range(m) if k != j] for i in range(1, m)]
                term = rs[0][j] * _det(minor)
                total = total + (term if sign > 0 else -term)
            sign = -sign
        return total

    return _det(rows)


@dataclass(frozen=True)
class SmithTriple:
    """Factors A = E @ D @ F with E, F unimodular and D diagonal."""

    E: PolyMatrix
    D: PolyMatrix
    F: PolyMatrix

    def reconstruct(self) -> PolyMatrix:
        return self.E @ self.D @ self.F

    def validate(self) -> None:
        if not self.D.is_diagonal():
            raise AssertionError("D is not diagonal")
        d = self.D.diag()
        for i in range(len(d) - 1):
            if not d[i].divides(d[i + 1]):
                raise AssertionError(f"divisibility chain broken at entry {i}")
        for name, m in (("E", self.E), ("F", self.F)):
            det = m.det()
            if det.is_zero() or det.degree != 0:
                raise AssertionError(f"det({name}) is not a nonzero constant")


# -- elimination --------------------------------------------------------------


class _Accumulated:
    """Mutable working matrix plus E/F accumulators.

    Invariant maintained by every elementary operation:
    ``original A = E @ M @ F`` exactly.
    """

    def __init__(self, a: PolyMatrix):
        self.n = a.n
        self.m = [list(row) for row in a.entries]
        self.e = [list(row) for row in PolyMatrix.identity(a.n).entries]
        self.f = [list(row) for row in PolyMatrix.identity(a.n).entries]

    # Row op M <- L M needs E <- E L^{-1}; column op M <- M R needs F <- R^{-1} F.

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.m[i], self.m[j] = self.m[j], self.m[i]
        for row in self.e:  # swap columns i, j of E
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.m:
            row[i], row[j] = row[j], row[i]
        self.f[i], self.f[j] = self.f[j], self.f[i]  # swap rows i, j of F

    def row_axpy(self, i: int, j: int, q: Poly) -> None:
        """row_i of M -= q * row_j; compensate E."""
        if q.is_zero():
            return
        self.m[i] = [self.m[i][k] - q * self.m[j][k] for k in range(self.n)]
        for row in self.e:  # col_j of E += q * col_i
            row[j] = row[j] + q * row[i]

    def col_axpy(self, j: int, i: int, q: Poly) -> None:
        """col_j of M -= q * col_i; compensate F."""
        if q.is_zero():
            return
        for row in self.m:
            row[j] = row[j] - q * row[i]
        self.f[i] = [self.f[i][k] + q * self.f[j][k] for k in range(self.n)]

    def scale_row(self, i: int, u: GaussianRational) -> None:
        """row_i of M *= u (u a nonzero constant); compensate E."""
        self.m[i] = [p.scale(u) for p in self.m[i]]
        inv = u.inverse()
        for row in self.e:  # col_i of E *= 1/u
            row[i] = row[i].scale(inv)


def _pivot_candidates(acc: _Accumulated, t: int):
    for r in range(t, acc.n):
        for c in range(t, acc.n):
            p = acc.m[r][c]
            if not p.is_zero():
                yield p.degree, r, c


_PIVOT_KEYS: dict[str, Callable] = {
    # deterministic default: minimal degree, smallest (row, col) lexicographically
    "min_degree": lambda deg_r_c: (deg_r_c[0], deg_r_c[1], deg_r_c[2]),
    # alternative heuristic used to test invariance of the diagonal
    "min_degree_last": lambda deg_r_c: (deg_r_c[0], -deg_r_c[1], -deg_r_c[2]),
}


def smith_normal_form(a: PolyMatrix, pivot: str = "min_degree") -> SmithTriple:
    """Compute A = E @ D @ F with D diagonal monic and a divisibility chain.

    Raises ``SmithSingularError`` for matrices that are singular over the
    rational function field (some diagonal entry would be zero).
    """
    key = _PIVOT_KEYS[pivot]
    acc = _Accumulated(a)
    n = acc.n
    for t in range(n):
        while True:
            cands = list(_pivot_candidates(acc, t))
            if not cands:
                raise SmithSingularError(
                    "matrix not invertible over the rational function field"
                )
            _, r, c = min(cands, key=key)
            acc.swap_rows(t, r)
            acc.swap_cols(t, c)
            pivot_poly = acc.m[t][t]

            clean = True
            for i in range(t + 1, n):
                if not acc.m[i][t].is_zero():
                    q, rem = divmod(acc.m[i][t], pivot_poly)
                    acc.row_axpy(i, t, q)
                    if not rem.is_zero():
                        clean = False
            for j in range(t + 1, n):
                if not acc.m[t][j].is_zero():
                    q, rem = divmod(acc.m[t][j], pivot_poly)
                    acc.col_axpy(j, t, q)
                    if not rem.is_zero():
                        clean = False
            if not clean:
                continue  # smaller-degree entries appeared; re-pick pivot

            # pivot clears its row/column; enforce divisibility of the block
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if not pivot_poly.divides(acc.m[i][j]):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            # fold the offending row into row t and keep eliminating
            acc.row_axpy(t, offender, -Poly.one())

        lead = acc.m[t][t].leading()
        if lead != GaussianRational(1):
            acc.scale_row(t, lead.inverse())

    d = PolyMatrix(acc.m)
    triple = SmithTriple(PolyMatrix(acc.e), d, PolyMatrix(acc.f))
    triple.validate()
    return triple


def normalize_unit_determinants(t: SmithTriple) -> SmithTriple:
    """Rescale so det(E) = det(F) = 1 exactly.

    The leftover constant is folded into the last diagonal entry of D; the
    other diagonal entries stay monic.
    """
    n = t.D.n
    ce = t.E.det()
    cf = t.F.det()
    if ce.degree != 0 or cf.degree != 0:
        raise ValueError("E and F must have constant nonzero determinants")
    ue, uf = ce.leading(), cf.leading()

    def scale_col(m: PolyMatrix, j: int, u: GaussianRational) -> PolyMatrix:
        rows = [list(r) for r in m.entries]
        for row in rows:
            row[j] = row[j].scale(u)
        return PolyMatrix(rows)

    def scale_row(m: PolyMatrix, i: int, u: GaussianRational) -> PolyMatrix:
        rows = [list(r) for r in m.entries]
        rows[i] = [p.scale(u) for p in rows[i]]
        return PolyMatrix(rows)

    e2 = scale_col(t.E, n - 1, ue.inverse())
    f2 = scale_row(t.F, n - 1, uf.inverse())
    d2 = scale_row(t.D, n - 1, ue * uf)
    out = SmithTriple(e2, d2, f2)
    if out.E.det() != Poly.one() or out.F.det() != Poly.one():
        raise AssertionError("unit normalization failed")
    return out


def redistribute_last_unit(t: SmithTriple, u: RatLike) -> SmithTriple:
    """Move the constant u from the last diagonal entry to the one before it.

    D stays diagonal and det(E), det(F) are untouched (F rows absorb u and
    1/u).  Used to present the diagonal in operator form, e.g. turning
    diag(1, 1, d, u^2 d^2) into diag(1, 1, u d, u d^2).
    """
    n = t.D.n
    if n < 2:
        return t
    gu = GaussianRational(u) if not isinstance(u, GaussianRational) else u
    if not gu:
        raise ValueError("unit must be nonzero")
    drows = [list(r) for r in t.D.entries]
    drows[n - 2][n - 2] = drows[n - 2][n - 2].scale(gu)
    drows[n - 1][n - 1] = drows[n - 1][n - 1].scale(gu.inverse())
    frows = [list(r) for r in t.F.entries]
    frows[n - 2] = [p.scale(gu.inverse()) for p in frows[n - 2]]
    frows[n - 1] = [p.scale(gu) for p in frows[n - 1]]
    return SmithTriple(t.E, PolyMatrix(drows), PolyMatrix(frows))


# -- Stokes symbols ------------------------------------------------------------


def stokes_symbol_2d(nu: RatLike, k: RatLike) -> PolyMatrix:
    """3x3 symbol of the 2D Stokes operator, Fourier-transformed tangentially.

    Rows: x-momentum, y-momentum, divergence; the x-derivative stays the
    indeterminate L, the tangential derivative becomes i*k.
    """
    nu = Fraction(nu)
    k = Fraction(k)
    if nu <= 0:
        raise ValueError("viscosity must be positive")
    lap = Poly((-(k * k), 0, 1))  # L^2 - k^2
    mlap = lap.scale(-nu)  # -nu (L^2 - k^2)
    lam = Poly.x()
    ik = Poly.const(GaussianRational(0, k))
    z = Poly.zero()
    return PolyMatrix(
        [
            [mlap, z, -lam],
            [z, mlap, -ik],
            [lam, ik, z],
        ]
    )


def stokes_symbol_3d(nu: RatLike, k2: RatLike, k3: RatLike) -> PolyMatrix:
    """4x4 symbol of the 3D Stokes operator, transformed in both tangentials."""
    nu = Fraction(nu)
    k2 = Fraction(k2)
    k3 = Fraction(k3)
    if nu <= 0:
        raise ValueError("viscosity must be positive")
    lap = Poly((-(k2 * k2) - k3 * k3, 0, 1))  # L^2 - k2^2 - k3^2
    mlap = lap.scale(-nu)
    lam = Poly.x()
    ik2 = Poly.const(GaussianRational(0, k2))
    ik3 = Poly.const(GaussianRational(0, k3))
    z = Poly.zero()
    return PolyMatrix(
        [
            [mlap, z, z, -lam],
            [z, mlap, z, -ik2],
            [z, z, mlap, -ik3],
            [lam, ik2, ik3, z],
        ]
    )
