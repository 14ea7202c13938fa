"""Exact coefficient scalars: big rationals and Gaussian rationals.

Polynomial coefficients are either :class:`fractions.Fraction` or
:class:`GaussianRational` (a + b*i with exact rational a, b).  Mixed
arithmetic promotes to Gaussian.  Everything here is exact; floating
point never appears at this layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PolyParseError


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex rational re + im*i."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = GaussianRational(Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


Coefficient = Fraction | GaussianRational


def as_coefficient(value) -> Coefficient:
    """Normalize a user-supplied coefficient to Fraction/GaussianRational."""
    if isinstance(value, (Fraction, GaussianRational)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise PolyParseError(
        f"coefficients must be exact rationals, got {type(value).__name__}"
    )


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q" with optional sign; reject anything inexact."""
    t = text.strip()
    try:
        if "/" in t:
            num, den = t.split("/")
            return Fraction(int(num.strip()), int(den.strip()))
        return Fraction(int(t))
    except (ValueError, ZeroDivisionError) as exc:
        raise PolyParseError(f"malformed rational literal {text!r}: {exc}") from exc


def coefficient_is_zero(c: Coefficient) -> bool:
    return not c


def coefficient_is_rational(c: Coefficient) -> bool:
    return isinstance(c, Fraction)


def coefficient_str(c: Coefficient) -> str:
    return str(c)
