"""Arbitrary-precision complex values that carry their working precision.

Every numeric result produced by this package is a :class:`ComplexAP`:
a pair of arbitrary-precision binary floats plus the precision (in bits)
it was computed at.  Arithmetic between two values runs at the maximum of
the two precisions.  Internally the heavy kernels work on raw ``mpmath``
numbers under a ``workprec`` block and wrap once at the boundary; the
wrapper exists so callers can always ask a number how trustworthy it is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpc, mpf, workprec

from .errors import ValidationError

DEFAULT_PRECISION = 128

# Extra bits used inside iterative kernels so that results are correct to
# roughly the nominal precision after error accumulation.
GUARD_BITS = 32

MIN_PRECISION = 53


def eps_zero(prec: int) -> mpf:
    """Zero-detection threshold 2^-(prec//2) used for order-of-vanishing."""
    with workprec(prec):
        return mpf(2) ** -(prec // 2)


def eps_residual(prec: int) -> mpf:
    """Residual certification threshold 2^-(prec-8)."""
    with workprec(prec):
        return mpf(2) ** -(prec - 8)


def mpf_from_rational(q, prec: int) -> mpf:
    """Exact rational -> correctly rounded mpf at ``prec`` bits."""
    q = Fraction(q)
    with workprec(prec):
        return mpf(q.numerator) / mpf(q.denominator)


def _exact_mpc(re: mpf, im: mpf) -> mpc:
    # the mpc(re, im) constructor rounds to the *ambient* precision, which
    # silently truncates high-precision values; build from raw mantissas
    return mpmath.mp.make_mpc((re._mpf_, im._mpf_))


def to_mpc(value, prec: int) -> mpc:
    """Coerce ints, rationals, floats, complex and ComplexAP to mpc."""
    if isinstance(value, ComplexAP):
        return value.to_mpc()
    if isinstance(value, mpc):
        return value
    if isinstance(value, mpf):
        return _exact_mpc(value, mpf(0))
    if isinstance(value, Fraction):
        return _exact_mpc(mpf_from_rational(value, prec), mpf(0))
    if isinstance(value, int):
        with workprec(prec):
            return _exact_mpc(mpf(value), mpf(0))
    if isinstance(value, float):
        return mpc(value, 0)
    if isinstance(value, complex):
        return mpc(value.real, value.imag)
    # Gaussian rationals provide .re/.im Fractions
    re = getattr(value, "re", None)
    im = getattr(value, "im", None)
    if isinstance(re, Fraction) and isinstance(im, Fraction):
        return _exact_mpc(
            mpf_from_rational(re, prec), mpf_from_rational(im, prec)
        )
    raise TypeError(f"cannot coerce {type(value).__name__} to a complex value")


def decimal_digits(prec: int) -> int:
    return int(prec * 0.30103) + 2


def decimal_str(x, prec: int) -> str:
    """Full-precision decimal string for exports (no binary floats leak out)."""
    return mpmath.nstr(x, decimal_digits(prec), strip_zeros=False)


@dataclass(frozen=True)
class ComplexAP:
    """An arbitrary-precision complex number tagged with its precision."""

    real: mpf
    imag: mpf
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION:
            raise ValidationError(
                f"precision must be at least {MIN_PRECISION} bits, "
                f"got {self.precision_bits}"
            )

    @classmethod
    def from_mpc(cls, value, prec: int) -> "ComplexAP":
        with workprec(prec):
            v = mpc(value)
            return cls(+v.real, +v.imag, prec)

    @classmethod
    def from_value(cls, value, prec: int = DEFAULT_PRECISION) -> "ComplexAP":
        if isinstance(value, ComplexAP):
            return value
        return cls.from_mpc(to_mpc(value, prec), prec)

    @classmethod
    def zero(cls, prec: int = DEFAULT_PRECISION) -> "ComplexAP":
        return cls(mpf(0), mpf(0), prec)

    def to_mpc(self) -> mpc:
        return _exact_mpc(self.real, self.imag)

    # -- arithmetic: operands combine at the maximum of their precisions --

    def _binary(self, other, op):
        if not isinstance(other, ComplexAP):
            other = ComplexAP.from_value(other, self.precision_bits)
        p = max(self.precision_bits, other.precision_bits)
        with workprec(p):
            v = op(self.to_mpc(), other.to_mpc())
        return ComplexAP.from_mpc(v, p)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __pow__(self, exponent):
        with workprec(self.precision_bits):
            v = self.to_mpc() ** exponent
        return ComplexAP.from_mpc(v, self.precision_bits)

    def __neg__(self):
        return ComplexAP(-self.real, -self.imag, self.precision_bits)

    def conjugate(self) -> "ComplexAP":
        return ComplexAP(self.real, -self.imag, self.precision_bits)

    def __abs__(self) -> mpf:
        with workprec(self.precision_bits):
            return abs(self.to_mpc())

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def is_real(self, tol=None) -> bool:
        t = tol if tol is not None else eps_zero(self.precision_bits)
        return abs(self.imag) <= t

    def __str__(self):
        d = decimal_digits(self.precision_bits)
        return mpmath.nstr(self.to_mpc(), d)

    def __repr__(self):
        return f"ComplexAP({self!s}, prec={self.precision_bits})"
