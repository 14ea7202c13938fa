"""Truncated univariate complex power series at a fixed working precision.

A :class:`FormalSeries` holds coefficients c_0..c_N of an expansion whose
terms beyond the truncation order N are unknown, not zero.  Operations
never read past the information they actually have: results carry the
minimum of the operand orders, adjusted for the operation (a derivative
loses one order, an integral gains one, a k-th root of a series vanishing
to order k gains back k-1, and so on).

Coefficients are raw mpmath numbers; kernels run with guard bits so the
advertised precision survives the O(N^2)/O(N^3) convolutions.  Dense
storage is deliberate: the truncation orders used here stay small.
"""

from __future__ import annotations

from mpmath import mpc, mpf, workprec
import mpmath

from .errors import ValidationError
from .precision import (
    DEFAULT_PRECISION,
    GUARD_BITS,
    ComplexAP,
    eps_zero,
    to_mpc,
)


class FormalSeries:
    __slots__ = ("_c", "order", "prec")

    def __init__(self, coeffs, order: int, prec: int = DEFAULT_PRECISION):
        if order < 0:
            raise ValidationError("truncation order must be nonnegative")
        c = [to_mpc(x, prec) for x in coeffs]
        if len(c) < order + 1:
            c = c + [mpc(0)] * (order + 1 - len(c))
        elif len(c) > order + 1:
            c = c[: order + 1]
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("FormalSeries is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, order, prec=DEFAULT_PRECISION):
        return cls([], order, prec)

    @classmethod
    def monomial(cls, coeff, degree, order, prec=DEFAULT_PRECISION):
        c = [mpc(0)] * (order + 1)
        if degree <= order:
            c[degree] = to_mpc(coeff, prec)
        return cls(c, order, prec)

    @classmethod
    def identity(cls, order, prec=DEFAULT_PRECISION):
        return cls.monomial(1, 1, order, prec)

    # -- access ----------------------------------------------------------------

    def raw(self, j) -> mpc:
        return self._c[j]

    def raw_list(self):
        return list(self._c)

    def coefficient(self, j) -> ComplexAP:
        if not 0 <= j <= self.order:
            raise ValidationError(f"coefficient index {j} beyond order {self.order}")
        return ComplexAP.from_mpc(self._c[j], self.prec)

    def coefficients(self):
        return [ComplexAP.from_mpc(c, self.prec) for c in self._c]

    def truncate(self, order) -> "FormalSeries":
        if order > self.order:
            raise ValidationError(
                f"cannot extend a series from order {self.order} to {order}"
            )
        return FormalSeries(self._c[: order + 1], order, self.prec)

    def vanishing_order(self, tol=None):
        """Smallest j with |c_j| above the zero threshold, or None."""
        t = tol if tol is not None else eps_zero(self.prec)
        for j, c in enumerate(self._c):
            if abs(c) > t:
                return j
        return None

    # -- ring operations ---------------------------------------------------------

    def _meet(self, other):
        if not isinstance(other, FormalSeries):
            raise TypeError("expected a FormalSeries")
        return min(self.order, other.order), min(self.prec, other.prec)

    def __add__(self, other):
        if isinstance(other, FormalSeries):
            n, p = self._meet(other)
            with workprec(p + GUARD_BITS):
                c = [self._c[j] + other._c[j] for j in range(n + 1)]
            return FormalSeries(c, n, p)
        with workprec(self.prec + GUARD_BITS):
            c = list(self._c)
            c[0] = c[0] + to_mpc(other, self.prec)
        return FormalSeries(c, self.order, self.prec)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries([-x for x in self._c], self.order, self.prec)

    def __sub__(self, other):
        if isinstance(other, FormalSeries):
            return self + (-other)
        return self + (-to_mpc(other, self.prec))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            s = to_mpc(other, self.prec)
            with workprec(self.prec + GUARD_BITS):
                return FormalSeries([x * s for x in self._c], self.order, self.prec)
        n, p = self._meet(other)
        with workprec(p + GUARD_BITS):
            out = [mpc(0)] * (n + 1)
            for i in range(n + 1):
                a = self._c[i]
                if not a:
                    continue
                for j in range(n + 1 - i):
                    b = other._c[j]
                    if b:
                        out[i + j] += a * b
        return FormalSeries(out, n, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FormalSeries):
            return self * other.inverse()
        s = to_mpc(other, self.prec)
        with workprec(self.prec + GUARD_BITS):
            return FormalSeries([x / s for x in self._c], self.order, self.prec)

    def inverse(self) -> "FormalSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        if abs(self._c[0]) <= eps_zero(self.prec):
            raise ValidationError("series with (near-)zero constant term has no inverse")
        n, p = self.order, self.prec
        with workprec(p + GUARD_BITS):
            inv0 = 1 / self._c[0]
            out = [inv0] + [mpc(0)] * n
            for m in range(1, n + 1):
                acc = mpc(0)
                for j in range(1, m + 1):
                    cj = self._c[j]
                    if cj:
                        acc += cj * out[m - j]
                out[m] = -inv0 * acc
        return FormalSeries(out, n, p)

    def derivative(self) -> "FormalSeries":
        if self.order == 0:
            return FormalSeries([], 0, self.prec)
        with workprec(self.prec + GUARD_BITS):
            c = [self._c[j] * j for j in range(1, self.order + 1)]
        return FormalSeries(c, self.order - 1, self.prec)

    def integral(self) -> "FormalSeries":
        """Antiderivative with zero constant term; gains one order."""
        with workprec(self.prec + GUARD_BITS):
            c = [mpc(0)] + [self._c[j] / (j + 1) for j in range(self.order + 1)]
        return FormalSeries(c, self.order + 1, self.prec)

    def __repr__(self):
        shown = ", ".join(mpmath.nstr(c, 8) for c in self._c[: min(6, self.order + 1)])
        tail = ", ..." if self.order >= 6 else ""
        return f"FormalSeries([{shown}{tail}], order={self.order}, prec={self.prec})"


def _require_zero_constant(s: FormalSeries, what: str):
    if abs(s._c[0]) > eps_zero(s.prec):
        raise ValidationError(
            f"{what} requires a zero constant term, got magnitude {abs(s._c[0])}"
        )


def ps_log1p(s: FormalSeries) -> FormalSeries:
    """log(1 + s) for s with zero constant term.

    Computed through the integrated-derivative identity
    (log(1+s))' = s' / (1+s), which keeps the cost at one series division.
    """
    _require_zero_constant(s, "ps_log1p")
    one_plus = s + 1
    q = s.derivative() * one_plus.inverse().truncate(max(s.order - 1, 0))
    return q.integral().truncate(s.order)


def ps_exp(s: FormalSeries) -> FormalSeries:
    """exp(s) for s with zero constant term, via p' = s' p."""
    _require_zero_constant(s, "ps_exp")
    n, p = s.order, s.prec
    with workprec(p + GUARD_BITS):
        out = [mpc(1)] + [mpc(0)] * n
        for m in range(1, n + 1):
            acc = mpc(0)
            for j in range(1, m + 1):
                cj = s._c[j]
                if cj:
                    acc += j * cj * out[m - j]
            out[m] = acc / m
    return FormalSeries(out, n, p)


def _pow_one_plus(u: FormalSeries, alpha) -> FormalSeries:
    """(1 + u)^alpha for u with zero constant term and any complex alpha."""
    a = to_mpc(alpha, u.prec)
    return ps_exp(ps_log1p(u) * a)


def ps_kth_root(s: FormalSeries, k: int) -> FormalSeries:
    """Principal k-th root of a series vanishing to order exactly k.

    Writes s = c_k x^k (1 + u) and returns c_k^{1/k} x (1+u)^{1/k}, where
    the argument of c_k^{1/k} lies in (-pi/(2k), pi/(2k)] (the principal
    branch, which is the right one whenever Re c_k >= 0).
    """
    if k < 1:
        raise ValidationError("k must be a positive integer")
    m = s.vanishing_order()
    if m is None:
        raise ValidationError("cannot take a root of a numerically zero series")
    if m != k:
        raise ValidationError(
            f"series vanishes to order {m}, not the requested {k}"
        )
    from fractions import Fraction

    n, p = s.order, s.prec
    with workprec(p + GUARD_BITS):
        ck = s._c[k]
        root = mpmath.exp(mpmath.log(mpc(ck)) / k)
        ucoeffs = [mpc(0)] + [s._c[k + j] / ck for j in range(1, n - k + 1)]
    u = FormalSeries(ucoeffs, n - k, p)
    body = _pow_one_plus(u, Fraction(1, k)) * root
    out = [mpc(0)] + body.raw_list()
    return FormalSeries(out, n - k + 1, p)


def ps_revert(y: FormalSeries) -> FormalSeries:
    """Compositional inverse of y (zero constant, nonzero linear term).

    Lagrange inversion: the n-th coefficient of the inverse is the
    (n-1)-st coefficient of (x / y(x))^n divided by n, with the powers
    built up incrementally.
    """
    _require_zero_constant(y, "ps_revert")
    n, p = y.order, y.prec
    if n < 1 or abs(y._c[1]) <= eps_zero(p):
        raise ValidationError("ps_revert requires a nonzero linear coefficient")
    v = FormalSeries(y._c[1:], n - 1, p).inverse()  # (x / y)  as a series
    with workprec(p + GUARD_BITS):
        out = [mpc(0)] * (n + 1)
        pw = FormalSeries([1], n - 1, p)
        for m in range(1, n + 1):
            pw = pw * v
            out[m] = pw._c[m - 1] / m
    return FormalSeries(out, n, p)


def ps_compose(outer: FormalSeries, inner: FormalSeries) -> FormalSeries:
    """outer(inner(x)); the inner series must have zero constant term."""
    _require_zero_constant(inner, "ps_compose (inner argument)")
    n = min(outer.order, inner.order)
    p = min(outer.prec, inner.prec)
    acc = FormalSeries([outer._c[n]], n, p)
    for j in range(n - 1, -1, -1):
        acc = acc * inner + outer._c[j]
    return acc


def ps_derivative(s: FormalSeries) -> FormalSeries:
    return s.derivative()
