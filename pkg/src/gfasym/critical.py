"""Critical points of the singular variety for a given direction.

For F = G/H and a projective direction r, the governing points solve

    H = 0   and   r_d * z_j H_j - r_j * z_d H_d = 0   (j < d),

i.e. the gradient-weighted coordinates (z_1 H_1 : ... : z_d H_d) line up
with r.  In two variables the system is solved completely: the second
variable is eliminated by an exact Sylvester resultant, the resulting
univariate polynomial is solved by simultaneous iteration, and candidates
are polished by Newton on the full system.  In three or more variables a
seeded Newton multistart is used, with no completeness guarantee.

Minimality (no other point of the variety inside the closed polydisk off
the torus) is certified at a tolerance by scanning concentric slices and
solving for the distinguished coordinate on each; it is a numerical
procedure, not a symbolic proof.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd

import mpmath
from mpmath import mpc, mpf, workprec

from .errors import (
    NoConvergentStartError,
    NonConvergenceError,
    OutOfScopeError,
    ValidationError,
)
from .poly import MultiPoly, RationalGF
from .precision import (
    DEFAULT_PRECISION,
    GUARD_BITS,
    ComplexAP,
    eps_residual,
    eps_zero,
    to_mpc,
)
from .resultants import resultant
from .roots import newton_system, roots_univariate

STRICT = "strict"
FINITELY_MINIMAL = "finitely_minimal"
TORAL_SUSPECTED = "toral_suspected"
NOT_MINIMAL = "not_minimal"
UNKNOWN = "unknown"

NON_SIMPLE_MESSAGE = "pole not simple: out of scope (see companion-paper taxonomy)"


@dataclass(frozen=True)
class Direction:
    """A projective direction with rational component ratios.

    Stored as a coprime integer tuple with positive last nonzero entry,
    so equal directions compare equal.
    """

    components: tuple[int, ...]

    @classmethod
    def of(cls, values) -> "Direction":
        fracs = [Fraction(v) for v in values]
        if not fracs or all(f == 0 for f in fracs):
            raise ValidationError("direction must be a nonzero vector")
        lcm = 1
        for f in fracs:
            lcm = lcm * f.denominator // gcd(lcm, f.denominator)
        ints = [int(f * lcm) for f in fracs]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        ints = [v // g for v in ints]
        last = next(v for v in reversed(ints) if v)
        if last < 0:
            ints = [-v for v in ints]
        return cls(tuple(ints))

    @property
    def dim(self) -> int:
        return len(self.components)

    def ratio(self, j: int, d: int) -> Fraction:
        """r_j / r_d as an exact rational."""
        if self.components[d] == 0:
            raise ValidationError("direction has zero scale component")
        return Fraction(self.components[j], self.components[d])

    def permuted(self, perm) -> "Direction":
        return Direction(tuple(self.components[p] for p in perm))

    def index(self, m: int) -> tuple[int, ...]:
        """The integer multi-index m * r (requires positive components)."""
        if any(c <= 0 for c in self.components):
            raise ValidationError(
                f"direction {self.components} is not strictly positive"
            )
        return tuple(m * c for c in self.components)

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class CriticalPoint:
    """A solved point on the variety together with its certificates."""

    coords: tuple[ComplexAP, ...]
    direction: Direction
    pole_simple: bool
    nonvanishing_axis: int
    minimality: str
    siblings: tuple[tuple[ComplexAP, ...], ...]
    residual: mpf
    precision_bits: int

    @property
    def dim(self) -> int:
        return len(self.coords)

    def mpc_coords(self):
        return [c.to_mpc() for c in self.coords]

    def with_classification(self, tag, siblings) -> "CriticalPoint":
        return replace(self, minimality=tag, siblings=tuple(siblings))


def _coords_of(point):
    if isinstance(point, CriticalPoint):
        return point.mpc_coords()
    return [ComplexAP.from_value(c).to_mpc() for c in point]


def critical_system(gf: RationalGF, direction: Direction) -> list[MultiPoly]:
    """The defining polynomial system {H} + cross equations, exactly."""
    if direction.dim != gf.dim:
        raise ValidationError(
            f"direction has {direction.dim} components, the function {gf.dim}"
        )
    H = gf.denominator
    d = gf.dim
    rd = direction.components[-1]
    system = [H]
    zh = [MultiPoly.variable(H.vars, j) * H.partial(j) for j in range(d)]
    for j in range(d - 1):
        rj = direction.components[j]
        system.append(zh[j] * rd - zh[-1] * rj)
    return system


def check_simple_pole(gf: RationalGF, point, precision: int = DEFAULT_PRECISION):
    """(is_simple, axis): axis maximizes |z_j H_j|, ties prefer the last."""
    coords = _coords_of(point)
    p = precision + GUARD_BITS
    with workprec(p):
        mags = []
        for j in range(gf.dim):
            hj = gf.denominator.partial(j).eval_mpc(coords, p)
            mags.append(abs(coords[j] * hj))
        best = max(mags)
        if best <= eps_zero(precision):
            return False, -1
        near = best * (1 - mpf(2) ** -16)
        axis = max(j for j, m in enumerate(mags) if m >= near)
    return True, axis


@dataclass(frozen=True)
class DirectionalDiagnostics:
    """dir(z) as computed from the point, with realness diagnostics."""

    projective: tuple[ComplexAP, ...]
    flagged: tuple[int, ...]
    precision_bits: int

    @property
    def consistent(self) -> bool:
        return not self.flagged

    def rationalize(self, max_denominator: int = 10**6) -> Direction:
        comps = [
            Fraction(str(c.real)).limit_denominator(max_denominator)
            for c in self.projective
        ]
        return Direction.of(comps)


def dir_of(
    gf: RationalGF,
    point,
    precision: int = DEFAULT_PRECISION,
    tol: float = 1e-10,
) -> DirectionalDiagnostics:
    """Projective class of (z_1 H_1, ..., z_d H_d), normalized by the last.

    Ratios of a locally minimal simple pole are real and nonnegative;
    any ratio with a large imaginary part or a clearly negative real part
    is flagged (it indicates non-minimality or an upstream error).
    """
    coords = _coords_of(point)
    p = precision + GUARD_BITS
    with workprec(p):
        vec = []
        for j in range(gf.dim):
            hj = gf.denominator.partial(j).eval_mpc(coords, p)
            vec.append(coords[j] * hj)
        if abs(vec[-1]) <= eps_zero(precision):
            raise ValidationError(
                "z_d H_d is numerically zero at this point; the last axis "
                "cannot normalize the direction"
            )
        ratios = [v / vec[-1] for v in vec]
        flagged = tuple(
            j
            for j, r in enumerate(ratios)
            if abs(r.imag) > tol or r.real < -tol
        )
    proj = tuple(ComplexAP.from_mpc(r, precision) for r in ratios)
    return DirectionalDiagnostics(proj, flagged, precision)


def _repeated_factor(gf: RationalGF, var_index: int) -> bool:
    H = gf.denominator
    if H.degree(var_index) == 0:
        return False
    return resultant(H, H.partial(var_index), var_index).is_zero()


def _sort_key(coords):
    return tuple((c.real, c.imag) for c in coords)


def _dedup(points, tol):
    out = []
    for c in points:
        if not any(
            max(abs(a - b) for a, b in zip(c, o)) < tol for o in out
        ):
            out.append(c)
    return out


def _build_point(gf, coords, direction, precision) -> CriticalPoint:
    p = precision + GUARD_BITS
    with workprec(p):
        res = abs(gf.denominator.eval_mpc(coords, p))
    simple, axis = check_simple_pole(gf, coords, precision)
    return CriticalPoint(
        coords=tuple(ComplexAP.from_mpc(c, precision) for c in coords),
        direction=direction,
        pole_simple=simple,
        nonvanishing_axis=axis,
        minimality=UNKNOWN,
        siblings=(),
        residual=res,
        precision_bits=precision,
    )


def solve_critical_2d(
    gf: RationalGF,
    direction,
    precision: int = DEFAULT_PRECISION,
) -> list[CriticalPoint]:
    """All isolated critical points in two variables.

    Eliminates the second variable by an exact Sylvester resultant, finds
    the roots of the univariate eliminant, back-substitutes, and polishes
    each candidate by Newton on the 2x2 system.  Every returned point has
    |H| below 2^-(precision-8).
    """
    if gf.dim != 2:
        raise ValidationError("solve_critical_2d requires exactly two variables")
    direction = direction if isinstance(direction, Direction) else Direction.of(direction)
    H, P = critical_system(gf, direction)

    if gf.denominator.degree(1) == 0 or P.is_zero():
        if _repeated_factor(gf, 1) or _repeated_factor(gf, 0):
            raise OutOfScopeError(NON_SIMPLE_MESSAGE, kind="non_simple")
        raise OutOfScopeError(
            "critical-point system has non-isolated solutions for this "
            "direction; cannot enumerate isolated points",
            kind="non_isolated",
        )

    R = resultant(H, P, 1)
    if R.is_zero():
        if _repeated_factor(gf, 1):
            raise OutOfScopeError(NON_SIMPLE_MESSAGE, kind="non_simple")
        raise OutOfScopeError(
            "the eliminant vanishes identically: the critical set is not "
            "isolated for this direction",
            kind="non_isolated",
        )

    p = precision + GUARD_BITS
    rcoeffs = [c.constant_term() for c in R.univariate_in(0)]
    with workprec(p):
        rc = [
            mpc(mpf(f.numerator)) / mpf(f.denominator) if f.denominator != 1
            else mpc(f.numerator)
            for f in rcoeffs
        ]
    zroots = roots_univariate(rc, precision)

    wpolys = gf.denominator.univariate_in(1)
    accepted = []
    loose = mpf(2) ** -(precision // 4)
    with workprec(p):
        for z0 in zroots:
            wc = [cp.eval_mpc([z0, mpc(0)], p) for cp in wpolys]
            for w0 in roots_univariate(wc, precision):
                if abs(P.eval_mpc([z0, w0], p)) > loose:
                    continue
                try:
                    sol, res = newton_system([H, P], [z0, w0], precision)
                except NonConvergenceError:
                    continue
                if res <= eps_residual(precision):
                    accepted.append(sol)
        accepted = _dedup(accepted, mpf(2) ** -(precision // 2))
        accepted.sort(key=_sort_key)
    return [_build_point(gf, c, direction, precision) for c in accepted]


def solve_critical_nd(
    gf: RationalGF,
    direction,
    starts: int = 32,
    precision: int = DEFAULT_PRECISION,
    seed: int = 0,
    radius_range=(0.25, 2.0),
) -> list[CriticalPoint]:
    """Newton multistart on the critical system for three or more variables.

    Starts are drawn from a seeded pseudorandom polyannulus plus positive
    real diagonal seeds.  The search is deterministic for a fixed seed and
    carries no completeness guarantee.
    """
    if gf.dim < 3:
        raise ValidationError("solve_critical_nd requires at least three variables")
    direction = direction if isinstance(direction, Direction) else Direction.of(direction)
    system = critical_system(gf, direction)
    d = gf.dim

    import random

    rng = random.Random(seed)
    lo, hi = radius_range
    seeds = [[mpc(t)] * d for t in (0.3, 0.6, 0.9, 1.2)]
    for _ in range(starts):
        pt = []
        for _ in range(d):
            r = lo + (hi - lo) * rng.random()
            a = 2 * 3.141592653589793 * rng.random()
            pt.append(mpc(r) * mpc(mpmath.cos(a), mpmath.sin(a)))
        seeds.append(pt)

    accepted = []
    p = precision + GUARD_BITS
    with workprec(p):
        for s in seeds:
            try:
                sol, res = newton_system(system, s, precision, max_iterations=300)
            except NonConvergenceError:
                continue
            if res <= eps_residual(precision):
                accepted.append(sol)
        accepted = _dedup(accepted, mpf(2) ** -(precision // 3))
        accepted.sort(key=_sort_key)
    if not accepted:
        raise NoConvergentStartError(
            "no convergent start: every Newton seed failed to reach a "
            "certified critical point"
        )
    return [_build_point(gf, c, direction, precision) for c in accepted]


# -- minimality classification ------------------------------------------------


def _pick_scan_axis(gf: RationalGF, coords, precision):
    simple, axis = check_simple_pole(gf, coords, precision)
    H = gf.denominator
    if axis >= 0 and H.degree(axis) >= 1:
        return axis
    for j in reversed(range(gf.dim)):
        if H.degree(j) >= 1:
            return j
    raise ValidationError("denominator is constant in every variable")


class _SliceSolver:
    """Roots of H(hat-z, .) in the scan axis, for many hat-points.

    Two speeds: ``roots`` works at the full working precision and backs
    every decision that matters; ``fast_roots`` runs in hardware doubles
    and is used only to pre-screen the dense grid (any event it reports
    is re-confirmed at full precision before it affects the verdict).
    """

    def __init__(self, gf: RationalGF, axis: int, precision: int):
        d = gf.dim
        perm = [j for j in range(d) if j != axis] + [axis]
        self.perm = perm
        self.hcoeffs = gf.denominator.permute_vars(perm).univariate_in(d - 1)
        self.prec = precision
        self.work = precision + GUARD_BITS
        # native-complex term lists [(hat_exps, coeff), ...] per axis power
        self.fast_terms = []
        for cp in self.hcoeffs:
            terms = []
            for exps, coeff in cp.terms.items():
                cf = complex(to_mpc(coeff, 64))
                terms.append((exps[: d - 1], cf))
            self.fast_terms.append(terms)

    def roots(self, hat):
        point = list(hat) + [mpc(0)]
        cs = [c.eval_mpc(point, self.work) for c in self.hcoeffs]
        return roots_univariate(cs, self.prec)

    def fast_roots(self, hat):
        cs = []
        for terms in self.fast_terms:
            acc = 0j
            for exps, cf in terms:
                t = cf
                for x, e in zip(hat, exps):
                    if e == 1:
                        t *= x
                    elif e:
                        t *= x**e
                acc += t
            cs.append(acc)
        return _fast_poly_roots(cs)


def _fast_poly_roots(coeffs):
    """All roots of a small native-complex polynomial (ascending coeffs)."""
    maxmag = max(abs(c) for c in coeffs) if coeffs else 0.0
    if maxmag == 0.0:
        return []
    c = list(coeffs)
    while len(c) > 1 and abs(c[-1]) < 1e-14 * maxmag:
        c.pop()
    n = len(c) - 1
    if n <= 0:
        return []
    if n == 1:
        return [-c[0] / c[1]]
    if n == 2:
        a, b, c0 = c[2], c[1], c[0]
        disc = (b * b - 4 * a * c0) ** 0.5
        if (b.conjugate() * disc).real > 0:
            disc = -disc
        q = (-b + disc) / 2
        r1 = q / a
        r2 = c0 / q if q != 0 else 0j
        return [r1, r2]
    import numpy as _np

    return [complex(r) for r in _np.roots(list(reversed(c)))]


def _golden_minimize(fn, a, b, iterations=80):
    """Golden-section minimum of a smooth real function on [a, b]."""
    phi = (mpf(5) ** mpf("0.5") - 1) / 2
    x1 = b - phi * (b - a)
    x2 = a + phi * (b - a)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iterations):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = fn(x2)
    xm = (a + b) / 2
    return xm, fn(xm)


def classify_minimality(
    gf: RationalGF,
    point,
    grid: int = 720,
    radial_levels: int = 64,
    tol: float = 1e-10,
    precision: int = DEFAULT_PRECISION,
):
    """Classify a variety point as strict / finitely_minimal / toral_suspected
    / not_minimal / unknown; returns (tag, siblings).

    Two variables get the full concentric-slice scan: ``grid`` angular
    samples on ``radial_levels`` circles of radius t*|z| check the open
    polydisk, the t=1 circle collects torus companions, and local minima of
    the modulus gap are refined so companions between grid angles are not
    missed.  Higher dimensions use a coarser torus-sampling heuristic and
    answer ``unknown`` when inconclusive.
    """
    if grid < 16:
        raise ValidationError("grid must be at least 16 angular samples")
    coords = _coords_of(point)
    if gf.dim == 2:
        return _classify_2d(gf, coords, point, grid, radial_levels, tol, precision)
    return _classify_nd(gf, coords, grid, tol, precision)


def _classify_2d(gf, coords, point, grid, radial_levels, tol, precision):
    axis = _pick_scan_axis(gf, coords, precision)
    hat_index = 1 - axis
    z0, w0 = coords[hat_index], coords[axis]
    solver = _SliceSolver(gf, axis, precision)
    p = precision + GUARD_BITS
    tol = mpf(tol)

    import cmath as _cmath

    with workprec(p):
        rz, rw = abs(z0), abs(w0)
        two_pi = 2 * mpmath.pi
        inner_cut = rw * (1 - tol)
        match_cut = rw * tol

        def min_gap_at(theta):
            zp = rz * mpmath.exp(mpc(0, theta))
            best_gap, best_root = None, None
            for r in solver.roots([zp]):
                g = abs(abs(r) - rw)
                if best_gap is None or g < best_gap:
                    best_gap, best_root = g, r
            return best_gap, best_root

        def confirmed_violation(theta, radius):
            zp = radius * mpmath.exp(mpc(0, theta))
            return any(abs(r) < inner_cut for r in solver.roots([zp]))

        # interior circles: a root strictly inside the open polydisk kills
        # minimality.  The dense grid runs in doubles; any flagged sample
        # is re-checked at full precision before the verdict.
        rz_f, rw_f = float(rz), float(rw)
        screen_cut = rw_f * (1 - 0.5 * float(tol))
        tau = 2 * 3.141592653589793
        angles_f = [tau * a / grid for a in range(grid)]
        units_f = [_cmath.exp(1j * t) for t in angles_f]
        for lev in range(1, radial_levels):
            radius_f = (lev / radial_levels) * rz_f
            for a in range(grid):
                zp = radius_f * units_f[a]
                for r in solver.fast_roots([zp]):
                    if abs(r) < screen_cut:
                        if confirmed_violation(
                            two_pi * a / grid, mpf(lev) / radial_levels * rz
                        ):
                            return NOT_MINIMAL, ()
                        break

        # torus circle (same two-speed scheme)
        gaps = []
        raw_matches = 0
        for a in range(grid):
            best_gap, best_root = None, None
            for r in solver.fast_roots([rz_f * units_f[a]]):
                g = abs(abs(r) - rw_f)
                if best_gap is None or g < best_gap:
                    best_gap, best_root = g, r
            if best_root is None:
                gaps.append((None, None))
                continue
            if abs(best_root) < screen_cut:
                if confirmed_violation(two_pi * a / grid, rz):
                    return NOT_MINIMAL, ()
            gaps.append((mpf(best_gap), best_root))
            if best_gap <= float(match_cut):
                raw_matches += 1

        if raw_matches >= max(4, grid // 5):
            return TORAL_SUSPECTED, ()

        # refine local minima of the gap so that companions falling between
        # grid angles are still located
        step = two_pi / grid
        refine_cut = rw * max(100 * tol, 4 * step * step)
        found = []
        for a in range(grid):
            g, _ = gaps[a]
            if g is None or g > refine_cut:
                continue
            gl = gaps[(a - 1) % grid][0]
            gr = gaps[(a + 1) % grid][0]
            if gl is not None and gl < g:
                continue
            if gr is not None and gr <= g:
                continue
            theta0 = two_pi * a / grid

            def gap_only(th):
                gg, _ = min_gap_at(th)
                return gg if gg is not None else mpf(10) * rw

            theta_star, gap_star = _golden_minimize(
                gap_only, theta0 - step, theta0 + step
            )
            gmin, root = min_gap_at(theta_star)
            if root is not None and abs(root) < inner_cut:
                return NOT_MINIMAL, ()
            if gmin is not None and gmin <= match_cut:
                found.append((theta_star, root))

        # cluster refined matches into distinct torus companions
        clusters = []
        for theta_star, root in found:
            placed = False
            for cl in clusters:
                if (
                    abs(mpmath.exp(mpc(0, theta_star)) - mpmath.exp(mpc(0, cl[0])))
                    < mpf("1e-6")
                    and abs(root - cl[1]) < mpf("1e-6") * (1 + rw)
                ):
                    placed = True
                    break
            if not placed:
                clusters.append((theta_star, root))

        own = None
        others = []
        for theta_star, root in clusters:
            zp = rz * mpmath.exp(mpc(0, theta_star))
            if abs(zp - z0) < mpf("1e-6") * (1 + rz) and abs(root - w0) < mpf(
                "1e-6"
            ) * (1 + rw):
                own = (theta_star, root)
            else:
                others.append((theta_star, root))

        if own is None:
            return UNKNOWN, ()
        if not others:
            return STRICT, ()

        siblings = []
        direction = point.direction if isinstance(point, CriticalPoint) else None
        for theta_star, root in others:
            zp = rz * mpmath.exp(mpc(0, theta_star))
            sib = [None, None]
            sib[hat_index], sib[axis] = zp, root
            if direction is not None:
                # polish onto the critical system when the direction is known
                try:
                    system = critical_system(gf, direction)
                    sol, res = newton_system(system, sib, precision)
                    if res <= eps_residual(precision) and all(
                        abs(abs(a) - abs(b)) < mpf("1e-8") * (1 + abs(b))
                        for a, b in zip(sol, coords)
                    ):
                        sib = sol
                except NonConvergenceError:
                    pass
            siblings.append(
                tuple(ComplexAP.from_mpc(c, precision) for c in sib)
            )
        return FINITELY_MINIMAL, tuple(siblings)


def _classify_nd(gf, coords, grid, tol, precision):
    """Torus-sampling heuristic for three or more variables."""
    axis = _pick_scan_axis(gf, coords, precision)
    d = gf.dim
    hats = [j for j in range(d) if j != axis]
    solver = _SliceSolver(gf, axis, precision)
    p = precision + GUARD_BITS
    tol = mpf(tol)

    per_axis = max(8, min(48, int(round(grid ** (1.0 / (d - 1))))))
    import cmath as _cmath

    with workprec(p):
        rw = abs(coords[axis])
        radii = [abs(coords[j]) for j in hats]
        inner_cut = rw * (1 - tol)
        match_cut = rw * tol
        two_pi = 2 * mpmath.pi
        rw_f = float(rw)
        radii_f = [float(r) for r in radii]
        screen_cut = rw_f * (1 - 0.5 * float(tol))
        tau = 2 * 3.141592653589793

        def hat_point(angles, scale=mpf(1)):
            return [
                scale * radii[i] * mpmath.exp(mpc(0, angles[i]))
                for i in range(d - 1)
            ]

        def confirmed_violation(angles, scale):
            hp = hat_point(angles, scale)
            return any(abs(r) < inner_cut for r in solver.roots(hp))

        # coarse interior shells (double-precision screen, confirmed events)
        coarse = max(6, per_axis // 2)
        from itertools import product as _product

        for lev in range(1, 8):
            t = lev / 8
            for cells in _product(*[range(coarse)] * (d - 1)):
                hp_f = [
                    t * radii_f[i] * _cmath.exp(1j * tau * a / coarse)
                    for i, a in enumerate(cells)
                ]
                if any(abs(r) < screen_cut for r in solver.fast_roots(hp_f)):
                    if confirmed_violation(
                        [two_pi * a / coarse for a in cells], mpf(lev) / 8
                    ):
                        return NOT_MINIMAL, ()

        # torus grid
        matches = {}
        total = 0
        for cells in _product(*[range(per_axis)] * (d - 1)):
            hp_f = [
                radii_f[i] * _cmath.exp(1j * tau * a / per_axis)
                for i, a in enumerate(cells)
            ]
            total += 1
            interesting = False
            for r in solver.fast_roots(hp_f):
                if abs(r) < screen_cut or abs(abs(r) - rw_f) <= 2 * float(match_cut):
                    interesting = True
            if not interesting:
                continue
            angles = [two_pi * a / per_axis for a in cells]
            hp = hat_point(angles)
            for r in solver.roots(hp):
                if abs(r) < inner_cut:
                    return NOT_MINIMAL, ()
                if abs(abs(r) - rw) <= match_cut:
                    matches[cells] = (hp, r)

        if len(matches) >= max(4, total // 5):
            return TORAL_SUSPECTED, ()

        # connected clusters on the torus grid
        remaining = set(matches)
        clusters = []
        while remaining:
            seed_cell = remaining.pop()
            comp = [seed_cell]
            frontier = [seed_cell]
            while frontier:
                cell = frontier.pop()
                for j in range(d - 1):
                    for dlt in (-1, 1):
                        nb = list(cell)
                        nb[j] = (nb[j] + dlt) % per_axis
                        nb = tuple(nb)
                        if nb in remaining:
                            remaining.remove(nb)
                            comp.append(nb)
                            frontier.append(nb)
            clusters.append(comp)

        if any(len(c) > 3 ** (d - 1) for c in clusters):
            return UNKNOWN, ()

        own = None
        others = []
        for comp in clusters:
            hp, r = matches[comp[0]]
            full = [None] * d
            for i, j in enumerate(hats):
                full[j] = hp[i]
            full[axis] = r
            if all(
                abs(a - b) < mpf(2) * two_pi / per_axis * (1 + abs(b))
                for a, b in zip(full, coords)
            ):
                own = full
            else:
                others.append(full)

        if own is None:
            return UNKNOWN, ()
        if not others:
            return STRICT, ()
        sibs = tuple(
            tuple(ComplexAP.from_mpc(c, precision) for c in full) for full in others
        )
        return FINITELY_MINIMAL, sibs


def classify_and_attach(
    gf: RationalGF,
    cp: CriticalPoint,
    grid: int = 720,
    radial_levels: int = 64,
    tol: float = 1e-10,
) -> CriticalPoint:
    tag, sibs = classify_minimality(
        gf, cp, grid=grid, radial_levels=radial_levels, tol=tol,
        precision=cp.precision_bits,
    )
    return cp.with_classification(tag, sibs)
