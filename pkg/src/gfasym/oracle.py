"""Exact coefficient extraction from the denominator recurrence.

If F = G/H = sum a_r z^r with H(0) != 0, convolving the coefficient maps
gives sum_m h_m a_{r-m} = g_r, hence

    a_r = (g_r - sum_{m != 0} h_m a_{r-m}) / h_0

computed in any order compatible with the componentwise partial order.
This module is the package's ground truth: everything downstream is
validated against it.

Internally the recurrence is run over plain integers.  Both polynomials
are first scaled by the least common denominator lam (which leaves G/H
unchanged), and with u_r := a_r * h0^(|r|+1) (|r| = sum of components,
h0 = the scaled constant term) the recurrence becomes integer:

    u_r = g_r * h0^|r| - sum_{m != 0} (h_m * h0^(|m|-1)) * u_{r-m}.

Fractions appear only when values are read out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from .errors import ValidationError
from .poly import MultiPoly, RationalGF


def _cleared_integer_data(gf: RationalGF):
    """Scale G and H to integer coefficients; return term maps and h0."""
    if not (gf.numerator.all_rational() and gf.denominator.all_rational()):
        raise ValidationError(
            "the coefficient oracle supports rational coefficients only; "
            "Gaussian-rational generating functions are out of its scope"
        )
    lcm = 1
    for poly in (gf.numerator, gf.denominator):
        for c in poly.terms.values():
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    g_terms = {e: int(c * lcm) for e, c in gf.numerator.terms.items()}
    h_terms = {e: int(c * lcm) for e, c in gf.denominator.terms.items()}
    h0 = h_terms[(0,) * gf.dim]
    return g_terms, h_terms, h0


@dataclass(frozen=True)
class CoefficientLattice:
    """Dense box of exact coefficients a_r for r <= bounds componentwise."""

    bounds: tuple[int, ...]
    values: tuple[Fraction, ...]

    def _flat(self, index) -> int:
        flat = 0
        for r, b in zip(index, self.bounds):
            if r > b:
                raise ValidationError(f"index {tuple(index)} outside bounds {self.bounds}")
            flat = flat * (b + 1) + r
        return flat

    def value(self, index) -> Fraction:
        """a_index; indices with any negative component are 0 by convention."""
        index = tuple(int(i) for i in index)
        if len(index) != len(self.bounds):
            raise ValidationError(
                f"index length {len(index)} != dimension {len(self.bounds)}"
            )
        if any(i < 0 for i in index):
            return Fraction(0)
        return self.values[self._flat(index)]

    def export_text(self) -> str:
        """One line per index: ``r1,...,rd: p/q``."""
        lines = []
        ranges = [range(b + 1) for b in self.bounds]
        for idx in product(*ranges):
            frac = self.values[self._flat(idx)]
            lines.append(",".join(str(i) for i in idx) + f": {frac}")
        return "\n".join(lines) + "\n"


def extract_coefficients(gf: RationalGF, bounds) -> CoefficientLattice:
    """All coefficients a_r with r <= bounds componentwise, exactly."""
    bounds = tuple(int(b) for b in bounds)
    if len(bounds) != gf.dim:
        raise ValidationError(
            f"bounds length {len(bounds)} != dimension {gf.dim}"
        )
    if any(b < 0 for b in bounds):
        raise ValidationError(f"bounds {bounds} contain a negative component")

    g_terms, h_terms, h0 = _cleared_integer_data(gf)
    dim = gf.dim
    total = sum(bounds) + dim
    h0pow = [1] * (total + 1)
    for i in range(1, total + 1):
        h0pow[i] = h0pow[i - 1] * h0
    # h-step table: (offset m, h_m * h0^(|m|-1)) for m != 0
    steps = [
        (m, c * h0pow[sum(m) - 1])
        for m, c in h_terms.items()
        if any(m)
    ]

    sizes = [b + 1 for b in bounds]
    strides = [0] * dim
    acc = 1
    for j in range(dim - 1, -1, -1):
        strides[j] = acc
        acc *= sizes[j]
    u = [0] * acc

    ranges = [range(s) for s in sizes]
    for idx in product(*ranges):
        flat = sum(i * s for i, s in zip(idx, strides))
        g = g_terms.get(idx)
        val = g * h0pow[sum(idx)] if g else 0
        for m, c in steps:
            ok = True
            off = flat
            for j in range(dim):
                t = idx[j] - m[j]
                if t < 0:
                    ok = False
                    break
                off -= m[j] * strides[j]
            if ok:
                val -= c * u[off]
        u[flat] = val

    values = []
    for idx in product(*ranges):
        flat = sum(i * s for i, s in zip(idx, strides))
        values.append(Fraction(u[flat], h0pow[sum(idx) + 1]))
    return CoefficientLattice(bounds, tuple(values))


def extract_ray(gf: RationalGF, direction, count: int) -> list[Fraction]:
    """Exact a_{m * direction} for m = 0..count along an integer ray.

    Streams the recurrence one slice of the leading axis at a time, so the
    memory footprint is a few slices rather than the whole box.  This is
    what makes desk-scale sweeps (diagonal index around 1000) practical.
    """
    direction = tuple(int(p) for p in direction)
    if len(direction) != gf.dim or any(p <= 0 for p in direction):
        raise ValidationError(
            f"ray direction {direction} must have {gf.dim} positive components"
        )
    if count < 0:
        raise ValidationError("count must be nonnegative")

    g_terms, h_terms, h0 = _cleared_integer_data(gf)
    dim = gf.dim
    bounds = tuple(p * count for p in direction)
    total = sum(bounds) + dim
    h0pow = [1] * (total + 1)
    for i in range(1, total + 1):
        h0pow[i] = h0pow[i - 1] * h0
    steps = [
        (m, c * h0pow[sum(m) - 1])
        for m, c in h_terms.items()
        if any(m)
    ]

    depth = max((m[0] for m, _ in steps), default=0) + 1
    rest_sizes = [b + 1 for b in bounds[1:]]
    rest_strides = [0] * (dim - 1)
    acc = 1
    for j in range(dim - 2, -1, -1):
        rest_strides[j] = acc
        acc *= rest_sizes[j]
    plane_len = acc

    rest_indices = list(product(*[range(s) for s in rest_sizes])) if dim > 1 else [()]
    planes: dict[int, list[int]] = {}
    out: list[Fraction] = []
    harvest = {m * direction[0]: m for m in range(count + 1)}

    for r0 in range(bounds[0] + 1):
        cur = [0] * plane_len
        for flat, rest in enumerate(rest_indices):
            idx0_sum = r0 + sum(rest)
            g = g_terms.get((r0, *rest))
            val = g * h0pow[idx0_sum] if g else 0
            for m, c in steps:
                t0 = r0 - m[0]
                if t0 < 0:
                    continue
                off = flat
                ok = True
                for j in range(dim - 1):
                    t = rest[j] - m[j + 1]
                    if t < 0:
                        ok = False
                        break
                    off -= m[j + 1] * rest_strides[j]
                if not ok:
                    continue
                src = cur if t0 == r0 else planes[t0]
                val -= c * src[off]
            cur[flat] = val
        planes[r0] = cur
        stale = r0 - depth + 1
        if stale >= 0:
            planes.pop(stale, None)
        m = harvest.get(r0)
        if m is not None:
            rest = tuple(p * m for p in direction[1:])
            off = sum(i * s for i, s in zip(rest, rest_strides))
            out.append(Fraction(cur[off], h0pow[r0 + sum(rest) + 1]))
    return out


def coefficient_at(gf: RationalGF, index) -> Fraction:
    """Single exact coefficient a_index (streaming, memory-light)."""
    index = tuple(int(i) for i in index)
    if len(index) != gf.dim:
        raise ValidationError(
            f"index length {len(index)} != dimension {gf.dim}"
        )
    if any(i < 0 for i in index):
        return Fraction(0)
    if all(i == 0 for i in index):
        g0 = gf.numerator.constant_term()
        h0 = gf.denominator.constant_term()
        return Fraction(g0) / Fraction(h0)
    # reuse the ray streamer on the degenerate ray through the index
    g = gcd(*index) if len(index) > 1 else index[0]
    g = g or 1
    reduced = tuple(i // g for i in index)
    if all(i > 0 for i in reduced):
        return extract_ray(gf, reduced, g)[g]
    # some component is zero: fall back to a dense box on the support
    lattice = extract_coefficients(gf, index)
    return lattice.value(index)
