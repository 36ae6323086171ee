"""Smith normal form and Stokes symbol tests."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from smithdd.exactalg import GaussianRational, Poly
from smithdd.smith import (
    PolyMatrix,
    SmithSingularError,
    normalize_unit_determinants,
    poly_matrix_det,
    poly_matrix_mul,
    redistribute_last_unit,
    smith_normal_form,
    stokes_symbol_2d,
    stokes_symbol_3d,
)

L = Poly.x()


def P(*coeffs):
    return Poly(coeffs)


def lap_sq(k):
    """(L^2 - k^2)^2 as an exact polynomial."""
    base = Poly((-Fraction(k) * Fraction(k), 0, 1))
    return base * base


# -- plumbing -----------------------------------------------------------------


def test_matrix_mul_identity():
    a = PolyMatrix([[L, 1], [0, L]])
    assert poly_matrix_mul(a, PolyMatrix.identity(2)) == a


def test_det_of_diagonal():
    d = PolyMatrix.diagonal([Poly.one(), Poly.one(), -lap_sq(1)])
    assert poly_matrix_det(d) == -lap_sq(1)


def test_mul_dimension_mismatch():
    with pytest.raises(ValueError):
        poly_matrix_mul(PolyMatrix.identity(2), PolyMatrix.identity(3))


# -- smith_normal_form ---------------------------------------------------------


def test_identity_matrix():
    t = smith_normal_form(PolyMatrix.identity(3))
    assert t.E == PolyMatrix.identity(3)
    assert t.D == PolyMatrix.identity(3)
    assert t.F == PolyMatrix.identity(3)


def test_two_by_two_jordanish():
    # [[L,1],[0,L]]: hand elimination swaps the unit 1 into the pivot and
    # eliminates, leaving diag(1, L^2).
    a = PolyMatrix([[L, 1], [0, L]])
    t = smith_normal_form(a)
    assert t.D == PolyMatrix.diagonal([Poly.one(), L * L])
    assert t.reconstruct() == a


def test_singular_matrix_rejected():
    a = PolyMatrix([[L, L], [L, L]])
    with pytest.raises(SmithSingularError, match="not invertible"):
        smith_normal_form(a)


def test_stokes_2d_symbol_entries():
    a0 = stokes_symbol_2d(1, 0)
    assert a0[1, 2] == Poly.zero()
    assert a0[0, 0] == -(L * L)

    a1 = stokes_symbol_2d(1, 1)
    assert a1[1, 2] == Poly.const(GaussianRational(0, -1))
    assert a1[2, 1] == Poly.const(GaussianRational(0, 1))
    # determinant by hand cofactor expansion: -(L^2-1)^2
    assert poly_matrix_det(a1) == -lap_sq(1)


def test_stokes_2d_smith_diagonal():
    t = smith_normal_form(stokes_symbol_2d(1, 1))
    assert t.D == PolyMatrix.diagonal([Poly.one(), Poly.one(), lap_sq(1)])
    assert t.reconstruct() == stokes_symbol_2d(1, 1)


def test_stokes_2d_diagonal_random_params():
    rng = random.Random(7)
    for _ in range(10):
        nu = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        k = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        while k == 0:
            k = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        a = stokes_symbol_2d(nu, k)
        t = smith_normal_form(a)
        assert t.D == PolyMatrix.diagonal([Poly.one(), Poly.one(), lap_sq(k)])
        assert t.reconstruct() == a
        t.validate()


def test_stokes_3d_diagonal():
    a = stokes_symbol_3d(1, 1, 2)
    lap = Poly((-5, 0, 1))
    t = smith_normal_form(a)
    assert t.D == PolyMatrix.diagonal([Poly.one(), Poly.one(), lap, lap * lap])
    assert t.reconstruct() == a


def test_stokes_3d_diagonal_random_params():
    rng = random.Random(13)
    for _ in range(10):
        nu = Fraction(rng.randint(1, 5), rng.randint(1, 5))
        k2 = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        k3 = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        while k2 == 0 and k3 == 0:
            k2 = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        a = stokes_symbol_3d(nu, k2, k3)
        lap = Poly((-(k2 * k2) - k3 * k3, 0, 1))
        t = smith_normal_form(a)
        assert t.D == PolyMatrix.diagonal([Poly.one(), Poly.one(), lap, lap * lap])
        assert t.reconstruct() == a


def test_stokes_3d_k_zero_specialization():
    # k2 = k3 = 0: momentum rows 2 and 3 decouple as -L^2 times identity.
    a = stokes_symbol_3d(1, 0, 0)
    assert a[1, 1] == -(L * L) and a[2, 2] == -(L * L)
    assert a[1, 3] == Poly.zero() and a[3, 1] == Poly.zero()


# -- unit normalization ---------------------------------------------------------


def test_normalize_constant_bookkeeping():
    # triple with det(E)=2: fold into last diagonal entry.
    e = PolyMatrix([[2, 0], [0, 1]])
    d = PolyMatrix.diagonal([Poly.one(), L])
    f = PolyMatrix.identity(2)
    t = normalize_unit_determinants(
        type(smith_normal_form(PolyMatrix.identity(2)))(e, d, f)
    )
    assert t.E.det() == Poly.one()
    assert t.D == PolyMatrix.diagonal([Poly.one(), L.scale(2)])
    assert t.reconstruct() == e @ d @ f


def test_normalize_idempotent():
    t = normalize_unit_determinants(smith_normal_form(stokes_symbol_2d(1, 1)))
    t2 = normalize_unit_determinants(t)
    assert t2.E == t.E and t2.D == t.D and t2.F == t.F


def test_normalized_stokes_2d_matches_operator_form():
    # last diagonal entry must come out as -nu*(L^2-k^2)^2
    for nu, k in [(1, 1), (Fraction(3, 2), Fraction(1, 3))]:
        t = normalize_unit_determinants(smith_normal_form(stokes_symbol_2d(nu, k)))
        assert t.E.det() == Poly.one() and t.F.det() == Poly.one()
        assert t.D.diag()[2] == lap_sq(k).scale(-Fraction(nu))
        assert t.reconstruct() == stokes_symbol_2d(nu, k)


def test_normalized_stokes_3d_operator_form():
    nu = Fraction(2)
    t = normalize_unit_determinants(smith_normal_form(stokes_symbol_3d(nu, 1, 2)))
    lap = Poly((-5, 0, 1))
    # after normalization the residual unit is nu^2 on the last entry;
    # moving -nu onto entry 3 exposes the operator form (-nu lap, -nu lap^2)
    t2 = redistribute_last_unit(t, -nu)
    assert t2.D.diag()[2] == lap.scale(-nu)
    assert t2.D.diag()[3] == (lap * lap).scale(-nu)
    assert t2.E.det() == Poly.one() and t2.F.det() == Poly.one()
    assert t2.reconstruct() == stokes_symbol_3d(nu, 1, 2)


# -- properties -----------------------------------------------------------------

small_consts = [
    Poly.zero(),
    Poly.one(),
    Poly.const(-1),
    Poly.const(2),
    Poly.const(GaussianRational(0, 1)),
]
small_polys = small_consts + [
    L,
    -L,
    L + 1,
    L * L,
    L * L - 1,
    Poly((0, GaussianRational(0, 1))),
]

matrices_3x3 = st.lists(
    st.sampled_from(small_polys), min_size=9, max_size=9
).map(lambda es: PolyMatrix([es[0:3], es[3:6], es[6:9]]))


@settings(max_examples=40, deadline=None)
@given(matrices_3x3)
def test_reconstruction_and_units_random(a):
    det = poly_matrix_det(a)
    if det.is_zero():
        with pytest.raises(SmithSingularError):
            smith_normal_form(a)
        return
    t = smith_normal_form(a)
    assert t.reconstruct() == a
    t.validate()
    for m in (t.E, t.F):
        d = m.det()
        assert d.degree == 0 and not d.is_zero()
    # det multiplicativity: det(E) det(D) det(F) = det(A)
    assert t.E.det() * t.D.det() * t.F.det() == det
    # diagonal invariance across pivot heuristics
    t2 = smith_normal_form(a, pivot="min_degree_last")
    assert t2.D == t.D
    assert t2.reconstruct() == a
