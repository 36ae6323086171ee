"""Exact polynomial/Gaussian-rational arithmetic tests."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from smithdd.exactalg import (
    NEG_INF,
    GaussianRational,
    Poly,
    poly_add,
    poly_divmod,
    poly_gcd,
    poly_mul,
    render_poly,
)

L = Poly.x()


def P(*coeffs):
    """Polynomial from low-to-high coefficients."""
    return Poly(coeffs)


# -- Gaussian rationals ------------------------------------------------------


def test_gaussian_rational_reduction_and_equality():
    a = GaussianRational(Fraction(2, 4), Fraction(-3, -6))
    b = GaussianRational(Fraction(1, 2), Fraction(1, 2))
    assert a == b
    assert a.re.denominator == 2 and a.re.denominator > 0
    assert hash(a) == hash(b)


def test_gaussian_rational_field_ops():
    i = GaussianRational(0, 1)
    assert i * i == GaussianRational(-1)
    z = GaussianRational(Fraction(1, 2), Fraction(3, 4))
    assert z * z.inverse() == GaussianRational(1)
    with pytest.raises(ZeroDivisionError):
        z / GaussianRational(0)


def test_gaussian_rational_render():
    assert GaussianRational(Fraction(1, 2), Fraction(3, 4)).render() == "(1/2 + 3/4*i)"
    assert GaussianRational(Fraction(1, 2), Fraction(-3, 4)).render() == "(1/2 - 3/4*i)"
    assert GaussianRational(3).render() == "3"
    assert GaussianRational(0, -1).render() == "-1*i"


# -- polynomial basics -------------------------------------------------------


def test_zero_polynomial_degree_marker():
    assert Poly.zero().degree == NEG_INF
    assert Poly.zero().degree < 0
    assert P(0, 0, 0).is_zero()


def test_trailing_zeros_stripped():
    assert P(1, 2, 0, 0) == P(1, 2)
    assert P(1, 2, 0, 0).degree == 1


def test_poly_add_examples():
    # (L^2+1) + (-L^2) -> 1
    assert poly_add(P(1, 0, 1), P(0, 0, -1)) == P(1)
    # p + 0 -> p
    p = P(Fraction(2, 3), 0, 5)
    assert poly_add(p, Poly.zero()) == p
    # (L-2) + (L+2) -> 2L
    assert poly_add(P(-2, 1), P(2, 1)) == P(0, 2)


def test_poly_mul_examples():
    # (L-1)(L+1) -> L^2-1
    assert poly_mul(P(-1, 1), P(1, 1)) == P(-1, 0, 1)
    # p * 1 -> p
    p = P(GaussianRational(0, 1), 2)
    assert poly_mul(p, Poly.one()) == p
    # (L^2-1)^2 -> L^4 - 2L^2 + 1   (k=1)
    sq = P(-1, 0, 1)
    assert poly_mul(sq, sq) == P(1, 0, -2, 0, 1)


def test_poly_divmod_examples():
    q, r = poly_divmod(P(-1, 0, 1), P(-1, 1))
    assert (q, r) == (P(1, 1), Poly.zero())

    q, r = poly_divmod(L, L * L)
    assert (q, r) == (Poly.zero(), L)

    # divmod(L^3+L+1, L^2+1): freeze (q, r) = (L, 1); oracle: re-multiply.
    a, b = P(1, 1, 0, 1), P(1, 0, 1)
    q, r = poly_divmod(a, b)
    assert q == L and r == Poly.one()
    assert q * b + r == a

    with pytest.raises(ZeroDivisionError):
        poly_divmod(L, Poly.zero())


def test_poly_gcd_examples():
    assert poly_gcd(P(-1, 0, 1), P(-1, 1)) == P(-1, 1)
    # idempotence, normalized monic
    p = P(1, 0, 1)
    assert poly_gcd(p, p) == p
    assert poly_gcd(p.scale(7), p.scale(7)) == p
    # gcd(L^4-2L^2+1, L^3-L) = L^2-1; oracle: build both from factors.
    sq = P(-1, 0, 1)  # L^2 - 1
    a = sq * sq  # (L^2-1)^2 = L^4-2L^2+1
    b = L * sq  # L(L-1)(L+1) = L^3-L
    assert a == P(1, 0, -2, 0, 1)
    assert b == P(0, -1, 0, 1)
    assert poly_gcd(a, b) == sq
    with pytest.raises(ValueError):
        poly_gcd(Poly.zero(), Poly.zero())


def test_render_poly():
    p = P(1, -2, GaussianRational(Fraction(1, 2), Fraction(3, 4)))
    assert render_poly(p) == "(1/2 + 3/4*i)*L^2 + -2*L + 1"
    assert render_poly(Poly.zero()) == "0"
    assert render_poly(P(0, GaussianRational(0, -1))) == "-1*i*L"


# -- property tests ----------------------------------------------------------

fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
gauss = st.builds(GaussianRational, fracs, fracs)
polys = st.lists(gauss, max_size=7).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


@given(polys, nonzero_polys)
def test_divmod_identity(a, b):
    q, r = poly_divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(nonzero_polys, polys)
def test_gcd_divides_both_and_monic(a, b):
    g = poly_gcd(a, b)
    assert g.leading() == GaussianRational(1)
    assert g.divides(a) and g.divides(b)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
