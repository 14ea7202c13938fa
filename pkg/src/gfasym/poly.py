"""Exact multivariate polynomial arithmetic and the generating-function pair.

A :class:`MultiPoly` stores a canonical map from exponent tuples to exact
coefficients (rational or Gaussian rational): zero coefficients are dropped
and terms are kept sorted, so two polynomials are equal exactly when their
representations are.  Floating point enters only through the evaluation
methods, which round exact coefficients at the requested working precision.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType

import re as _re

from mpmath import mpc, workprec

from .errors import LAURENT_HINT, PolyParseError, ValidationError
from .precision import GUARD_BITS, ComplexAP, to_mpc
from .scalars import (
    Coefficient,
    GaussianRational,
    as_coefficient,
    coefficient_is_rational,
    coefficient_is_zero,
    parse_rational,
)

Exponent = tuple[int, ...]


class MultiPoly:
    """Immutable multivariate polynomial with exact coefficients."""

    __slots__ = ("vars", "_terms", "_cache")

    def __init__(self, variables, terms):
        variables = tuple(str(v) for v in variables)
        if len(set(variables)) != len(variables):
            raise PolyParseError(f"duplicate variable names in {variables}")
        clean: dict[Exponent, Coefficient] = {}
        for exps, coeff in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise PolyParseError(
                    f"exponent vector {exps} has length {len(exps)}, "
                    f"expected {len(variables)} for variables {variables}"
                )
            if any(e < 0 for e in exps):
                raise PolyParseError(
                    f"exponent vector {exps} contains a negative entry; "
                    + LAURENT_HINT
                )
            coeff = as_coefficient(coeff)
            if coefficient_is_zero(coeff):
                continue
            if exps in clean:
                coeff = clean[exps] + coeff
                if coefficient_is_zero(coeff):
                    del clean[exps]
                    continue
            clean[exps] = coeff
        object.__setattr__(self, "vars", variables)
        object.__setattr__(
            self, "_terms", dict(sorted(clean.items()))
        )
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- structure ---------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Coefficient:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def degree(self, var_index=None) -> int:
        """Degree in one variable, or total degree when var_index is None."""
        if self.is_zero():
            return 0
        if var_index is None:
            return max(sum(e) for e in self._terms)
        return max(e[var_index] for e in self._terms)

    def all_rational(self) -> bool:
        return all(coefficient_is_rational(c) for c in self._terms.values())

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.vars == other.vars
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.vars, tuple(self._terms.items())))

    def __bool__(self):
        return not self.is_zero()

    # -- exact arithmetic ----------------------------------------------------

    def _check_same_vars(self, other):
        if self.vars != other.vars:
            raise ValidationError(
                f"variable lists differ: {self.vars} vs {other.vars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = MultiPoly.constant(self.vars, other)
        self._check_same_vars(other)
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            out[exps] = out.get(exps, Fraction(0)) + coeff
        return MultiPoly(self.vars, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return MultiPoly(
                self.vars, {e: c * other for e, c in self._terms.items()}
            )
        self._check_same_vars(other)
        out: dict[Exponent, Coefficient] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValidationError("negative polynomial powers are not defined")
        result = MultiPoly.constant(self.vars, 1)
        for _ in range(n):
            result = result * self
        return result

    @classmethod
    def constant(cls, variables, value):
        return cls(variables, {(0,) * len(tuple(variables)): value})

    @classmethod
    def variable(cls, variables, index):
        variables = tuple(variables)
        exps = [0] * len(variables)
        exps[index] = 1
        return cls(variables, {tuple(exps): Fraction(1)})

    def partial(self, var_index: int) -> "MultiPoly":
        """Exact formal partial derivative with respect to one variable."""
        if not 0 <= var_index < self.nvars:
            raise ValidationError(
                f"variable index {var_index} out of range for {self.nvars} variables"
            )
        out: dict[Exponent, Coefficient] = {}
        for exps, coeff in self._terms.items():
            e = exps[var_index]
            if e == 0:
                continue
            ne = list(exps)
            ne[var_index] = e - 1
            out[tuple(ne)] = coeff * e
        return MultiPoly(self.vars, out)

    def permute_vars(self, perm) -> "MultiPoly":
        """Reorder variables: new variable j is old variable perm[j]."""
        perm = tuple(perm)
        newvars = tuple(self.vars[p] for p in perm)
        newterms = {
            tuple(exps[p] for p in perm): c for exps, c in self._terms.items()
        }
        return MultiPoly(newvars, newterms)

    def univariate_in(self, var_index: int) -> list["MultiPoly"]:
        """Coefficients (ascending) as a polynomial in one chosen variable."""
        deg = self.degree(var_index) if not self.is_zero() else 0
        buckets: list[dict] = [dict() for _ in range(deg + 1)]
        for exps, coeff in self._terms.items():
            ne = list(exps)
            k = ne[var_index]
            ne[var_index] = 0
            buckets[k][tuple(ne)] = coeff
        return [MultiPoly(self.vars, b) for b in buckets]

    # -- evaluation ----------------------------------------------------------

    def eval_exact(self, point) -> Coefficient:
        """Exact evaluation at rational / Gaussian-rational coordinates."""
        point = [as_coefficient(x) for x in point]
        if len(point) != self.nvars:
            raise ValidationError(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        total: Coefficient = Fraction(0)
        for exps, coeff in self._terms.items():
            term = coeff
            for x, e in zip(point, exps):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def _compiled(self, prec: int):
        """Coefficient list rounded once at prec, cached per precision."""
        cached = self._cache.get(prec)
        if cached is None:
            with workprec(prec):
                cached = [
                    (exps, to_mpc(coeff, prec))
                    for exps, coeff in self._terms.items()
                ]
            self._cache[prec] = cached
        return cached

    def eval_mpc(self, point, prec: int) -> mpc:
        """Kernel evaluation at raw mpc coordinates under workprec(prec).

        Uses per-variable power tables; cost is one multiply per variable
        per term after the tables are filled.
        """
        if len(point) != self.nvars:
            raise ValidationError(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        compiled = self._compiled(prec)
        with workprec(prec):
            if not compiled:
                return mpc(0)
            maxdeg = [0] * self.nvars
            for exps, _ in compiled:
                for j, e in enumerate(exps):
                    if e > maxdeg[j]:
                        maxdeg[j] = e
            powers = []
            for j, x in enumerate(point):
                row = [mpc(1)]
                for _ in range(maxdeg[j]):
                    row.append(row[-1] * x)
                powers.append(row)
            total = mpc(0)
            for exps, coeff in compiled:
                term = coeff
                for j, e in enumerate(exps):
                    if e:
                        term = term * powers[j][e]
                total += term
        return total

    def eval_ap(self, point) -> ComplexAP:
        """Evaluate at ComplexAP coordinates; result carries the minimum
        of the operand precisions, computed with guard bits."""
        pts = [ComplexAP.from_value(x) for x in point]
        if not pts:
            raise ValidationError("empty evaluation point")
        prec = min(p.precision_bits for p in pts)
        v = self.eval_mpc([p.to_mpc() for p in pts], prec + GUARD_BITS)
        return ComplexAP.from_mpc(v, prec)

    def taylor_mpc(self, center, prec: int) -> dict[Exponent, mpc]:
        """Coefficients of P(center + u) as a polynomial in the offsets u.

        Exact binomial expansion of each stored term, rounded at prec.
        """
        compiled = self._compiled(prec)
        from math import comb

        with workprec(prec):
            out: dict[Exponent, mpc] = {}
            cpow = []
            for j, c in enumerate(center):
                deg = self.degree(j) if not self.is_zero() else 0
                row = [mpc(1)]
                for _ in range(deg):
                    row.append(row[-1] * c)
                cpow.append(row)

            def expand(j, exps, coeff, acc):
                if j == len(exps):
                    out[tuple(acc)] = out.get(tuple(acc), mpc(0)) + coeff
                    return
                e = exps[j]
                for i in range(e + 1):
                    acc.append(i)
                    expand(j + 1, exps, coeff * comb(e, i) * cpow[j][e - i], acc)
                    acc.pop()

            for exps, coeff in compiled:
                expand(0, exps, coeff, [])
        return out

    # -- text form -----------------------------------------------------------

    def to_text(self) -> str:
        """Canonical monomial-list string; parses back to an equal polynomial."""
        if self.is_zero():
            return "0"
        pieces = []
        for exps, coeff in self._terms.items():
            factors = []
            for name, e in zip(self.vars, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if isinstance(coeff, GaussianRational):
                cs = f"({coeff})"
                body = "*".join([cs] + factors) if factors else cs
                pieces.append(("+", body))
                continue
            sign = "+" if coeff >= 0 else "-"
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.vars}, {self.to_text()!r})"


_TOKEN = _re.compile(
    r"""(?P<rat>\d+\s*/\s*\d+)
      | (?P<int>\d+)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<pow>\^)
      | (?P<mul>\*)
      | (?P<sign>[+-])
      | (?P<ws>\s+)
    """,
    _re.VERBOSE,
)


def poly_parse(text: str, variables) -> MultiPoly:
    """Parse a monomial-list expression like ``"3 - 3z - w + z^2"``.

    Grammar: a signed sum of monomials; each monomial is an optional exact
    rational coefficient (``p`` or ``p/q``) times ``*``-separated variable
    powers ``name`` or ``name^k`` with nonnegative integer k.  The ``*`` is
    optional between a coefficient and a variable.
    """
    variables = tuple(str(v) for v in variables)
    index = {name: i for i, name in enumerate(variables)}

    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos]!r} in {text!r}")
        pos = m.end()
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group()))
    tokens.append(("end", ""))

    terms: dict[Exponent, Coefficient] = {}
    i = 0

    def peek():
        return tokens[i][0]

    while peek() != "end":
        sign = Fraction(1)
        while peek() == "sign":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if peek() == "end":
            raise PolyParseError(f"dangling sign at end of {text!r}")

        coeff = sign
        exps = [0] * len(variables)
        saw_factor = False
        expect_factor = True
        while True:
            kind, val = tokens[i]
            if kind in ("rat", "int"):
                coeff = coeff * parse_rational(val)
                i += 1
                saw_factor = True
            elif kind == "name":
                if val not in index:
                    raise PolyParseError(
                        f"unknown variable {val!r}; declared variables are {variables}"
                    )
                i += 1
                e = 1
                if peek() == "pow":
                    i += 1
                    k2, v2 = tokens[i]
                    neg = False
                    if k2 == "sign":
                        neg = v2 == "-"
                        i += 1
                        k2, v2 = tokens[i]
                    if k2 != "int":
                        raise PolyParseError(f"malformed exponent after '^' in {text!r}")
                    e = int(v2)
                    i += 1
                    if neg:
                        raise PolyParseError(
                            f"negative exponent on {val!r}; " + LAURENT_HINT
                        )
                exps[index[val]] += e
                saw_factor = True
            else:
                if expect_factor and not saw_factor:
                    raise PolyParseError(f"missing monomial in {text!r}")
                break
            expect_factor = False
            if peek() == "mul":
                i += 1
                expect_factor = True
                continue
            if peek() in ("rat", "int", "name"):
                # implicit product, e.g. "3z" or "z w"
                continue
            break
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff

    return MultiPoly(variables, terms)


def poly_eval(p: MultiPoly, point) -> ComplexAP:
    return p.eval_ap(point)


def poly_partial(p: MultiPoly, var_index: int) -> MultiPoly:
    return p.partial(var_index)


class RationalGF:
    """A validated pair G/H whose power series at the origin is studied."""

    __slots__ = ("numerator", "denominator", "dim")

    def __init__(self, numerator: MultiPoly, denominator: MultiPoly):
        if numerator.vars != denominator.vars:
            raise ValidationError(
                "numerator and denominator must share one variable list, got "
                f"{numerator.vars} and {denominator.vars}"
            )
        h0 = denominator.constant_term()
        if coefficient_is_zero(h0):
            raise ValidationError(
                "denominator vanishes at the origin, so the power series "
                "of G/H at 0 is undefined; recentre or reweight the "
                "generating function before analysis"
            )
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "denominator", denominator)
        object.__setattr__(self, "dim", numerator.nvars)

    def __setattr__(self, name, value):
        raise AttributeError("RationalGF is immutable")

    @property
    def vars(self):
        return self.numerator.vars

    def permute_vars(self, perm) -> "RationalGF":
        return RationalGF(
            self.numerator.permute_vars(perm),
            self.denominator.permute_vars(perm),
        )

    def eval_mpc(self, point, prec: int) -> mpc:
        with workprec(prec):
            return self.numerator.eval_mpc(point, prec) / self.denominator.eval_mpc(
                point, prec
            )

    def __repr__(self):
        return f"RationalGF(({self.numerator.to_text()}) / ({self.denominator.to_text()}))"


def gf_new(numerator: MultiPoly, denominator: MultiPoly) -> RationalGF:
    """Validated construction of G/H (H must not vanish at the origin)."""
    return RationalGF(numerator, denominator)
