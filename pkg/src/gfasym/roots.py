"""Complex root finding and small dense linear algebra.

The univariate solver is a simultaneous-iteration (Aberth-Ehrlich) scheme
on exact-coefficient polynomials converted once to the working precision,
with closed forms short-circuiting degrees one and two.  It is
self-contained on purpose: the same solver backs resultant roots, the
minimality scans, branch tracking, and the characteristic-polynomial
eigenvalues used for the multivariate leading constant.
"""

from __future__ import annotations

import mpmath
from mpmath import mpc, mpf, workprec

from .errors import NonConvergenceError, ValidationError
from .precision import GUARD_BITS


def _horner_with_derivative(coeffs, x):
    p = coeffs[-1]
    dp = mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * x + p
        p = p * x + c
    return p, dp


def roots_univariate(coeffs, prec: int, max_iterations: int = 200):
    """All complex roots of sum coeffs[j] x^j (ascending), with multiplicity.

    Exact zero leading coefficients are stripped (fewer finite roots);
    low-order zero coefficients become explicit zero roots.  Degrees one
    and two use closed forms; higher degrees run Aberth-Ehrlich from a
    perturbed circle.
    """
    with workprec(prec + GUARD_BITS):
        c = [mpc(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        if len(c) <= 1:
            return []
        maxmag = max(abs(x) for x in c)
        # near-zero leading coefficients push roots to infinity; drop them
        while len(c) > 1 and abs(c[-1]) < maxmag * mpf(2) ** (-(prec + 8)):
            c.pop()
        zero_roots = []
        while len(c) > 1 and not c[0]:
            zero_roots.append(mpc(0))
            c.pop(0)
        n = len(c) - 1
        if n == 0:
            return zero_roots
        if n == 1:
            return zero_roots + [-c[0] / c[1]]
        if n == 2:
            a, b, cc = c[2], c[1], c[0]
            disc = mpmath.sqrt(b * b - 4 * a * cc)
            # pick the sign that avoids cancellation in -b -/+ disc
            if mpmath.re(mpmath.conj(b) * disc) > 0:
                disc = -disc
            q = (-b + disc) / 2
            r1 = q / a
            r2 = (cc / q) if abs(q) > 0 else mpc(0)
            return zero_roots + [r1, r2]

        lead = c[-1]
        monic = [x / lead for x in c]
        radius = max(mpf(1) / 2, max(abs(x) for x in monic[:-1]) ** (mpf(1) / n))
        two_pi = 2 * mpmath.pi
        z = [
            radius * mpmath.exp(mpc(0, two_pi * (j + mpf("0.3711")) / n))
            * (1 + mpf(j % 7) / 1000)
            for j in range(n)
        ]
        target = mpf(2) ** (-(prec + 4))
        for _ in range(max_iterations):
            moved = mpf(0)
            for j in range(n):
                p, dp = _horner_with_derivative(monic, z[j])
                if not p:
                    continue
                if not dp:
                    z[j] = z[j] * (1 + mpf(1) / 1024) + mpf(1) / 1024
                    moved = mpf(1)
                    continue
                w = p / dp
                s = mpc(0)
                for i in range(n):
                    if i != j:
                        d = z[j] - z[i]
                        if not d:
                            d = mpc(target)
                        s += 1 / d
                denom = 1 - w * s
                step = w / denom if denom else w
                z[j] = z[j] - step
                rel = abs(step) / (1 + abs(z[j]))
                if rel > moved:
                    moved = rel
            if moved < target:
                return zero_roots + z
        raise NonConvergenceError(
            f"root finder did not converge for degree {n} at {prec} bits"
        )


def solve_linear(A, b, prec: int):
    """Gaussian elimination with partial pivoting on small mpc systems."""
    n = len(A)
    with workprec(prec + GUARD_BITS):
        M = [row[:] + [b[i]] for i, row in enumerate(A)]
        for col in range(n):
            piv = max(range(col, n), key=lambda r: abs(M[r][col]))
            if not M[piv][col]:
                raise NonConvergenceError("singular linear system")
            M[col], M[piv] = M[piv], M[col]
            inv = 1 / M[col][col]
            for r in range(col + 1, n):
                f = M[r][col] * inv
                if f:
                    for k in range(col, n + 1):
                        M[r][k] -= f * M[col][k]
        x = [mpc(0)] * n
        for r in range(n - 1, -1, -1):
            acc = M[r][n]
            for k in range(r + 1, n):
                acc -= M[r][k] * x[k]
            x[r] = acc / M[r][r]
    return x


def newton_system(polys, start, prec: int, max_iterations: int = 80):
    """Newton's method on a square exact-polynomial system.

    Returns (solution, residual) where residual is the max magnitude of
    the system polynomials at the solution.  Raises on non-convergence or
    a singular Jacobian met before any progress.
    """
    n = len(start)
    if len(polys) != n:
        raise ValidationError("newton_system needs as many equations as unknowns")
    jac = [[p.partial(j) for j in range(n)] for p in polys]
    with workprec(prec + GUARD_BITS):
        x = [mpc(v) for v in start]
        target = mpf(2) ** (-(prec + 4))
        best = None
        for _ in range(max_iterations):
            f = [p.eval_mpc(x, prec + GUARD_BITS) for p in polys]
            res = max(abs(v) for v in f)
            if best is None or res < best:
                best = res
            if res < target:
                return x, res
            J = [[jac[i][j].eval_mpc(x, prec + GUARD_BITS) for j in range(n)] for i in range(n)]
            try:
                step = solve_linear(J, [-v for v in f], prec)
            except NonConvergenceError:
                raise NonConvergenceError("singular Jacobian in Newton iteration")
            x = [x[j] + step[j] for j in range(n)]
        f = [p.eval_mpc(x, prec + GUARD_BITS) for p in polys]
        res = max(abs(v) for v in f)
        return x, res


def characteristic_polynomial(M, prec: int):
    """Coefficients (ascending) of det(x I - M) via Faddeev-LeVerrier."""
    n = len(M)
    with workprec(prec + GUARD_BITS):
        A = [[mpc(v) for v in row] for row in M]
        coeffs = [mpc(1)]  # leading first, reversed at the end
        B = [[mpc(1) if i == j else mpc(0) for j in range(n)] for i in range(n)]
        cur = [row[:] for row in A]
        cs = []
        Mk = [row[:] for row in A]
        c = mpc(0)
        Mprev = None
        for k in range(1, n + 1):
            if k == 1:
                Mk = [row[:] for row in A]
            else:
                # Mk = A (Mprev + c_{k-1} I)
                T = [row[:] for row in Mprev]
                for i in range(n):
                    T[i][i] += c
                Mk = [
                    [sum(A[i][t] * T[t][j] for t in range(n)) for j in range(n)]
                    for i in range(n)
                ]
            tr = sum(Mk[i][i] for i in range(n))
            c = -tr / k
            cs.append(c)
            Mprev = Mk
        # det(xI - M) = x^n + cs[0] x^{n-1} + ... + cs[n-1]
        return list(reversed(cs)) + [mpc(1)]


def eigenvalues(M, prec: int):
    """Eigenvalues of a small dense complex matrix via its char poly."""
    return roots_univariate(characteristic_polynomial(M, prec), prec)
