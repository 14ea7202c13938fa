"""Numerical validation integrals: the reduced coefficient integral and
the one-/two-sided model integrals behind the Gamma-constants.

The reduced integral evaluates

    (2 pi)^(1-d) * integral over a torus patch of exp(-r_d ft) * at

with the phase ft and amplitude at computed *pointwise* (root tracking
along the variety, then logs and residues), completely independently of
the series pipeline.  For a minimal point the integrand decays away from
the center, so straight adaptive panel quadrature on the real angle
interval suffices; no contour deformation is attempted.

The model integral computes int x^l exp(-lambda c x^k) dx over [0, B] or
[-B, B] by quadrature plus an analytic integration-by-parts series for
the [B, infinity) tail, which is what makes purely imaginary phases
(where the tail only decays algebraically in B) computable.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpc, mpf, workprec

from .critical import CriticalPoint, Direction, _SliceSolver
from .errors import (
    BranchTrackingError,
    NonConvergenceError,
    ValidationError,
)
from .poly import RationalGF
from .precision import (
    DEFAULT_PRECISION,
    GUARD_BITS,
    ComplexAP,
    to_mpc,
)

_GL_CACHE: dict = {}


def gauss_legendre_rule(n: int, prec: int):
    """Nodes and weights on [-1, 1], computed once per (n, precision)."""
    key = (n, prec)
    got = _GL_CACHE.get(key)
    if got is not None:
        return got
    with workprec(prec + GUARD_BITS):
        nodes, weights = [], []
        for i in range(1, n + 1):
            x = mpmath.cos(mpmath.pi * (i - mpf(1) / 4) / (n + mpf(1) / 2))
            for _ in range(60):
                p0, p1 = mpf(1), x
                for j in range(2, n + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpf(2) ** (-(prec + 8)):
                    break
            p0, p1 = mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    _GL_CACHE[key] = (nodes, weights)
    return nodes, weights


def _panel_estimates(f, a, b, prec, order):
    """(refined value, error estimate) from nested Gauss rules."""
    lo_n, lo_w = gauss_legendre_rule(order, prec)
    hi_n, hi_w = gauss_legendre_rule(2 * order, prec)
    mid = (a + b) / 2
    half = (b - a) / 2
    lo = sum(w * f(mid + half * x) for x, w in zip(lo_n, lo_w)) * half
    hi = sum(w * f(mid + half * x) for x, w in zip(hi_n, hi_w)) * half
    return hi, abs(hi - lo)


def adaptive_quadrature(
    f,
    a,
    b,
    rel_tol,
    prec: int,
    initial_panels: int = 8,
    max_refinements: int = 4000,
    order: int = 12,
):
    """Deterministic adaptive panel bisection with nested Gauss rules.

    Splits the worst panel until the summed error estimate drops below
    rel_tol relative to the integral's magnitude (with the summed panel
    magnitudes as a cancellation-aware floor).  Raises on exhaustion.
    """
    with workprec(prec + GUARD_BITS):
        a, b = mpf(a), mpf(b)
        rel_tol = mpf(rel_tol)
        panels = []
        width = (b - a) / initial_panels
        for i in range(initial_panels):
            pa = a + i * width
            pb = b if i == initial_panels - 1 else a + (i + 1) * width
            val, err = _panel_estimates(f, pa, pb, prec, order)
            panels.append([err, pa, pb, val])
        splits = 0
        while True:
            total = mpc(0)
            mag = mpf(0)
            toterr = mpf(0)
            for err, _, _, val in panels:
                total += val
                mag += abs(val)
                toterr += err
            scale = max(abs(total), mag * rel_tol)
            if toterr <= rel_tol * max(scale, mpf(2) ** (-prec)):
                panels.sort(key=lambda t: t[1])
                total = mpc(0)
                for _, _, _, val in panels:
                    total += val
                return total, toterr
            if splits >= max_refinements:
                raise NonConvergenceError(
                    f"quadrature did not reach tolerance {rel_tol} after "
                    f"{splits} panel refinements (error ~ {toterr})"
                )
            worst = max(range(len(panels)), key=lambda i: (panels[i][0], -i))
            err, pa, pb, _ = panels.pop(worst)
            mid = (pa + pb) / 2
            for lo, hi_ in ((pa, mid), (mid, pb)):
                val, err = _panel_estimates(f, lo, hi_, prec, order)
                panels.append([err, lo, hi_, val])
            splits += 1


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the reduced-integral evaluation."""

    neighborhood_halfwidth: float = 1.5707963267948966  # pi/2
    panels: int = 16
    tolerance: float = 1e-10
    max_refinements: int = 4000

    def __post_init__(self):
        hw = float(self.neighborhood_halfwidth)
        if not 0 < hw <= 3.14159265358979324:
            raise ValidationError("halfwidth must lie in (0, pi]")
        if self.panels < 8:
            raise ValidationError("at least 8 initial panels are required")
        if self.tolerance <= 0:
            raise ValidationError("tolerance must be positive")


class _BranchTracker:
    """Follows one root of H(hat(theta), .) continuously in one angle.

    ``hat_fn(theta)`` supplies the hat coordinates of the slice.  Nearest
    -root continuation in steps bounded by max_step; errors out if another
    root comes within ``collision_cut`` of the tracked one (a sign that
    two sheets of the variety are about to exchange).  Also carries a
    continuous argument so log(w(theta)) has no branch jumps.
    """

    def __init__(self, solver, hat_fn, w0, arg0, prec, max_step, collision_cut):
        self.solver = solver
        self.hat_fn = hat_fn
        self.prec = prec
        self.max_step = max_step
        self.cut = collision_cut
        # validate the starting branch: w0 must be an unambiguous root
        roots = solver.roots(hat_fn(mpf(0)))
        if not roots:
            raise BranchTrackingError("no finite root at the tracking start")
        roots.sort(key=lambda r: abs(r - w0))
        if abs(roots[0] - w0) > max(mpf("1e-6"), self.cut) * (1 + abs(w0)):
            raise BranchTrackingError(
                "the starting value is not a root of the slice polynomial"
            )
        if len(roots) > 1 and abs(roots[1] - roots[0]) < self.cut:
            raise BranchTrackingError(
                "two roots of the slice polynomial coincide at the tracking "
                "start; branch identity is ambiguous"
            )
        self.states = {mpf(0): (roots[0], arg0)}
        self.known = [mpf(0)]

    def _advance(self, theta_from, state, theta_to):
        w_prev, arg_prev = state
        t = theta_from
        while t != theta_to:
            step = theta_to - t
            if abs(step) > self.max_step:
                step = self.max_step if step > 0 else -self.max_step
            t = t + step
            if (theta_to > theta_from and t > theta_to) or (
                theta_to < theta_from and t < theta_to
            ):
                t = theta_to
            roots = self.solver.roots(self.hat_fn(t))
            if not roots:
                raise BranchTrackingError(
                    "the slice polynomial lost all finite roots during tracking"
                )
            roots.sort(key=lambda r: abs(r - w_prev))
            w = roots[0]
            if len(roots) > 1 and abs(roots[1] - w) < self.cut:
                raise BranchTrackingError(
                    "two roots of the slice polynomial collided within the "
                    "tracking tolerance; branch identity is ambiguous"
                )
            darg = mpmath.arg(w / w_prev)
            arg_prev = arg_prev + darg
            w_prev = w
        return w_prev, arg_prev

    def at(self, theta):
        """(w(theta), continuous log w(theta))."""
        import bisect

        theta = mpf(theta)
        got = self.states.get(theta)
        if got is None:
            i = bisect.bisect_left(self.known, theta)
            cands = []
            if i > 0:
                cands.append(self.known[i - 1])
            if i < len(self.known):
                cands.append(self.known[i])
            start = min(cands, key=lambda t: abs(theta - t))
            got = self._advance(start, self.states[start], theta)
            self.states[theta] = got
            bisect.insort(self.known, theta)
        w, argw = got
        return w, mpmath.log(abs(w)) + mpc(0, argw)


def xi_quadrature(
    gf: RationalGF,
    point,
    direction,
    r,
    spec: QuadratureSpec | None = None,
    precision: int = DEFAULT_PRECISION,
) -> ComplexAP:
    """The normalized reduced integral (2 pi)^(1-d) * int exp(-r_d ft) at.

    Equals z^r a_r up to a remainder that decays exponentially in r_d, so
    it arbitrates the series-built expansions without sharing any code
    with them.  Pointwise evaluation: the distinguished coordinate is
    obtained by root tracking, the phase from its continuous logarithm,
    the amplitude from the residue formula.
    """
    spec = spec or QuadratureSpec()
    direction = direction if isinstance(direction, Direction) else Direction.of(direction)
    r = tuple(int(x) for x in r)
    if len(r) != gf.dim:
        raise ValidationError(f"index length {len(r)} != dimension {gf.dim}")

    coords = (
        point.mpc_coords()
        if isinstance(point, CriticalPoint)
        else [ComplexAP.from_value(c).to_mpc() for c in point]
    )
    d = gf.dim
    p = precision + GUARD_BITS

    from .asymptotics import _axis_and_perm

    axis, perm = _axis_and_perm(gf, coords, precision)
    rd = r[axis]
    if rd < 1:
        raise ValidationError("the scale-axis component of r must be >= 1")

    solver = _SliceSolver(gf, axis, precision)
    hats = [j for j in range(d) if j != axis]
    Hd = gf.denominator.partial(axis)

    with workprec(p):
        w0 = coords[axis]
        logw0 = mpmath.log(w0)
        hw = mpf(spec.neighborhood_halfwidth)
        max_step = hw / 256
        collision = 10 * mpf(spec.tolerance)

        if d == 2:
            z0 = coords[hats[0]]
            tracker = _BranchTracker(
                solver,
                lambda t: [z0 * mpmath.exp(mpc(0, t))],
                w0,
                mpmath.arg(w0),
                precision,
                max_step,
                collision,
            )
            ratio = mpf(r[hats[0]]) / rd

            def integrand(theta):
                zp = z0 * mpmath.exp(mpc(0, theta))
                w, logw = tracker.at(theta)
                ft = (logw - logw0) + mpc(0, 1) * ratio * theta
                hd = Hd.eval_mpc([zp, w] if axis == 1 else [w, zp], p)
                g = gf.numerator.eval_mpc([zp, w] if axis == 1 else [w, zp], p)
                at = g / (-w * hd)
                return mpmath.exp(-rd * ft) * at

            total, _ = adaptive_quadrature(
                integrand,
                -hw,
                hw,
                mpf(spec.tolerance),
                precision,
                initial_panels=spec.panels,
                max_refinements=spec.max_refinements,
            )
            value = total / (2 * mpmath.pi)
            return ComplexAP.from_mpc(value, precision)

        # d >= 3: tensor product over the torus patch, refined by doubling
        z0s = [coords[j] for j in hats]
        ratios = [mpf(r[j]) / rd for j in hats]

        def point_at(thetas, w):
            full = [mpc(0)] * d
            for i, j in enumerate(hats):
                full[j] = z0s[i] * mpmath.exp(mpc(0, thetas[i]))
            full[axis] = w
            return full

        def value_with(n):
            nodes, weights = gauss_legendre_rule(n, precision)
            base = _BranchTracker(
                solver,
                lambda t: [z0s[0] * mpmath.exp(mpc(0, t)), z0s[1]],
                w0,
                mpmath.arg(w0),
                precision,
                max_step,
                collision,
            )
            total = mpc(0)
            for i1, x1 in enumerate(nodes):
                t1 = hw * x1
                w_start, log_start = base.at(t1)
                z1p = z0s[0] * mpmath.exp(mpc(0, t1))
                sub = _BranchTracker(
                    solver,
                    lambda t, z1p=z1p: [z1p, z0s[1] * mpmath.exp(mpc(0, t))],
                    w_start,
                    mpmath.im(log_start),
                    precision,
                    max_step,
                    collision,
                )
                for i2, x2 in enumerate(nodes):
                    t2 = hw * x2
                    w, logw = sub.at(t2)
                    thetas = [t1, t2]
                    ft = (logw - logw0) + mpc(0, 1) * (
                        ratios[0] * t1 + ratios[1] * t2
                    )
                    full = point_at(thetas, w)
                    hd = Hd.eval_mpc(full, p)
                    g = gf.numerator.eval_mpc(full, p)
                    at = g / (-w * hd)
                    total += (
                        weights[i1] * weights[i2] * mpmath.exp(-rd * ft) * at
                    )
            return total * hw * hw

        if d != 3:
            raise ValidationError(
                "the product-grid reduced integral is implemented for "
                "two and three variables"
            )
        n = max(8, spec.panels)
        prev = value_with(n)
        for _ in range(spec.max_refinements):
            n *= 2
            cur = value_with(n)
            if abs(cur - prev) <= mpf(spec.tolerance) * max(
                abs(cur), mpf(2) ** (-precision)
            ):
                return ComplexAP.from_mpc(cur / (2 * mpmath.pi) ** (d - 1), precision)
            prev = cur
            if n > 4096:
                raise NonConvergenceError(
                    "product-grid refinement exceeded its node budget"
                )
        raise NonConvergenceError("product-grid refinement did not converge")


def _tail_series(k, l, c, lam, B, tol_abs, prec):
    """int_B^inf x^l exp(-lam c x^k) dx by repeated integration by parts.

    Valid asymptotically for large lam * c * B^k; each step lowers the
    power by k.  Returns None if the series fails to reach tol_abs before
    its terms start growing (caller should enlarge B).
    """
    with workprec(prec + GUARD_BITS):
        kc = k * lam * c
        ex = mpmath.exp(-lam * c * B**k)
        total = mpc(0)
        m = mpf(l)
        factor = ex * B ** (m - k + 1) / kc
        for _ in range(200):
            total += factor
            if abs(factor) < tol_abs:
                return total
            nxt = factor * ((m - k + 1) / kc) * B ** (-k)
            if abs(nxt) >= abs(factor):
                return None
            factor = nxt
            m -= k
        return None


def model_integral(
    k: int,
    l: int,
    c_k,
    lam,
    two_sided: bool = False,
    tolerance: float = 1e-12,
    precision: int = DEFAULT_PRECISION,
) -> ComplexAP:
    """int x^l exp(-lambda c_k x^k) dx over [0, inf) or (-inf, inf).

    The quadrature runs on [0, B] with B chosen so that lambda |c| B^k is
    moderately large, and the tail beyond B is added back analytically;
    the reported value therefore has tail error below the tolerance even
    for purely imaginary c_k, where the integrand never decays in
    magnitude.  Odd k with two_sided requires purely imaginary c_k.
    """
    if k < 1:
        raise ValidationError("k must be a positive integer")
    if l < 0:
        raise ValidationError("l must be nonnegative")
    p = precision + GUARD_BITS
    with workprec(p):
        c = to_mpc(c_k, precision)
        lam = mpf(lam)
        if lam <= 0:
            raise ValidationError("lambda must be positive")
        if abs(c) == 0:
            raise ValidationError("c_k must be nonzero")
        if c.real < -mpf(2) ** (-(precision // 2)):
            raise ValidationError(
                "Re c_k < 0: the model integral diverges"
            )
        if two_sided and k % 2 == 1 and abs(c.real) > mpf(2) ** (-(precision // 2)) * abs(c):
            raise ValidationError(
                "two-sided odd-k model integrals require purely imaginary c_k"
            )
        tol = mpf(tolerance)

        def one_sided(cc):
            omega = mpf(40)
            for _ in range(4):
                B = (omega / (lam * abs(cc))) ** (mpf(1) / k)

                def f(x):
                    return x**l * mpmath.exp(-lam * cc * x**k)

                val, _ = adaptive_quadrature(
                    f, mpf(0), B, tol / 4, precision,
                    initial_panels=16, max_refinements=6000,
                )
                scale = max(abs(val), mpf(2) ** (-precision))
                tail = _tail_series(k, l, cc, lam, B, tol * scale / 4, precision)
                if tail is not None:
                    return val + tail
                omega *= 4
            raise NonConvergenceError(
                "tail series failed to converge for the model integral"
            )

        value = one_sided(c)
        if two_sided:
            # x -> -x maps the negative half-line to [0, inf) with the
            # phase constant (-1)^k c and a parity sign on x^l
            value = value + (-1) ** l * one_sided(c * (-1) ** k)
    return ComplexAP.from_mpc(value, precision)
