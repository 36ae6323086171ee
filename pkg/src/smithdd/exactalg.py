"""Exact arithmetic: Gaussian rationals and univariate polynomials over them.

``GaussianRational`` stores exact ``fractions.Fraction`` real/imaginary parts,
so the complex entries of Fourier symbols can be represented without any
rounding.  ``Poly`` is a univariate polynomial in the indeterminate ``L``
(printed as ``L``), stored as a trailing-zero-free coefficient tuple indexed
by degree.  Everything is immutable and exact; there is no floating point
anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Tuple, Union

#: Degree assigned to the zero polynomial.  Compares below every int.
NEG_INF = float("-inf")

RatLike = Union[int, Fraction, str]


def _as_fraction(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class GaussianRational:
    """An element of Q(i): exact rational real and imaginary parts.

    ``Fraction`` keeps numerator/denominator fully reduced with a positive
    denominator, which gives structural equality for free.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: RatLike = 0, im: RatLike = 0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n2 = other.re * other.re + other.im * other.im
        if n2 == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n2,
            (self.im * other.re - self.re * other.im) / n2,
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        return GaussianRational(1) / self

    def render(self) -> str:
        """Text form used by the CLI printer: "p/q", "r/s*i" or "(p/q + r/s*i)"."""
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {abs(self.im)}*i)"

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return self.render()


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


def _as_gr(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


class Poly:
    """Univariate polynomial over Q(i), coefficient index = degree.

    Invariant: the coefficient tuple carries no trailing zeros, so the
    leading coefficient is nonzero unless the tuple is empty (the zero
    polynomial, whose degree is ``NEG_INF``).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_gr(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((GR_ONE,))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((_as_gr(c),))

    @classmethod
    def x(cls) -> "Poly":
        """The indeterminate L itself."""
        return cls((GR_ZERO, GR_ONE))

    @classmethod
    def monomial(cls, coeff, n: int) -> "Poly":
        return cls((GR_ZERO,) * n + (_as_gr(coeff),))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def leading(self) -> GaussianRational:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, n: int) -> GaussianRational:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else GR_ZERO

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic --------------------------------------------------------

    @classmethod
    def _coerce(cls, x):
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction, GaussianRational)):
            return cls((_as_gr(x),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[k] - other[k] for k in range(n))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        out = [GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _as_gr(c)
        return Poly(a * c for a in self.coeffs)

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero polynomial")
        q = Poly.zero()
        r = self
        lead_inv = other.leading().inverse()
        db = other.degree
        while not r.is_zero() and r.degree >= db:
            shift = r.degree - db
            coef = r.leading() * lead_inv
            term = Poly.monomial(coef, shift)
            q = q + term
            r = r - term * other
        return q, r

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        """True if self divides other exactly (zero remainder)."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly<{render_poly(self)}>"

    def __str__(self):
        return render_poly(self)


def render_poly(p: Poly) -> str:
    """Render as "a_n*L^n + ... + a_0" with L for the indeterminate."""
    if p.is_zero():
        return "0"
    terms = []
    for n in range(p.degree, -1, -1):
        c = p[n]
        if not c:
            continue
        if n == 0:
            terms.append(c.render())
        elif n == 1:
            terms.append(f"{c.render()}*L")
        else:
            terms.append(f"{c.render()}*L^{n}")
    return " + ".join(terms)


# -- module-level operation names ------------------------------------------


def poly_add(a: Poly, b: Poly) -> Poly:
    """Coefficient-wise sum, renormalized."""
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    """Convolution product; degree adds for nonzero inputs."""
    return a * b


def poly_divmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    """Exact Euclidean division: a = q*b + r with degree(r) < degree(b)."""
    return divmod(a, b)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor via the Euclidean algorithm."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()
