"""Exact Sylvester resultants for eliminating one variable.

The resultant of two polynomials with respect to a chosen variable is the
determinant of their Sylvester matrix, whose entries are exact polynomials
in the remaining variables.  The determinant is expanded by minors with
memoization over column subsets, which is comfortably fast for the small
matrices produced by bivariate critical-point systems.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError
from .poly import MultiPoly

_MAX_SYLVESTER = 16


def sylvester_matrix(p: MultiPoly, q: MultiPoly, var_index: int):
    pc = p.univariate_in(var_index)
    qc = q.univariate_in(var_index)
    m = len(pc) - 1
    n = len(qc) - 1
    size = m + n
    zero = MultiPoly(p.vars, {})
    rows = []
    pdesc = list(reversed(pc))
    qdesc = list(reversed(qc))
    for i in range(n):
        rows.append([zero] * i + pdesc + [zero] * (size - i - m - 1))
    for i in range(m):
        rows.append([zero] * i + qdesc + [zero] * (size - i - n - 1))
    return rows


def _determinant(rows) -> MultiPoly:
    n = len(rows)
    if n == 0:
        raise ValidationError("determinant of an empty matrix")
    variables = rows[0][0].vars
    memo: dict[tuple[int, ...], MultiPoly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> MultiPoly:
        if not cols:
            return MultiPoly.constant(variables, 1)
        key = cols
        cached = memo.get(key)
        if cached is not None:
            return cached
        acc = MultiPoly(variables, {})
        sign = 1
        for t, col in enumerate(cols):
            entry = rows[row][col]
            if entry:
                sub = minor(row + 1, cols[:t] + cols[t + 1 :])
                term = entry * sub
                acc = acc + (term if sign > 0 else -term)
            sign = -sign
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def resultant(p: MultiPoly, q: MultiPoly, var_index: int) -> MultiPoly:
    """Res_var(p, q) as an exact polynomial in the remaining variables.

    Conventions for degenerate degrees: if either input is the zero
    polynomial the resultant is zero; if p is free of the variable,
    Res = p^{deg q} (and symmetrically).
    """
    if p.is_zero() or q.is_zero():
        return MultiPoly(p.vars, {})
    m = p.degree(var_index)
    n = q.degree(var_index)
    if m == 0 and n == 0:
        return MultiPoly.constant(p.vars, 1)
    if m == 0:
        return p**n
    if n == 0:
        return q**m
    if m + n > _MAX_SYLVESTER:
        raise ValidationError(
            f"Sylvester matrix of size {m + n} exceeds the supported {_MAX_SYLVESTER}"
        )
    return _determinant(sylvester_matrix(p, q, var_index))
