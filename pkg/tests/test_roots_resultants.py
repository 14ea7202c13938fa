from fractions import Fraction

import mpmath
import pytest
from mpmath import mpc, mpf, workprec

from gfasym import poly_parse
from gfasym.errors import NonConvergenceError
from gfasym.resultants import resultant, sylvester_matrix
from gfasym.roots import (
    characteristic_polynomial,
    eigenvalues,
    newton_system,
    roots_univariate,
)

ZW = ("z", "w")
PREC = 128


def sorted_roots(rs):
    return sorted(rs, key=lambda r: (float(r.real), float(r.imag)))


class TestRoots:
    def test_quadratic(self):
        r = sorted_roots(roots_univariate([mpc(-1), mpc(2), mpc(1)], PREC))
        with workprec(160):
            assert abs(r[0] + 1 + mpmath.sqrt(2)) < mpf(2) ** -120
            assert abs(r[1] + 1 - mpmath.sqrt(2)) < mpf(2) ** -120

    def test_roots_of_unity(self):
        rs = roots_univariate([mpc(-1), 0, 0, 0, 0, mpc(1)], PREC)
        assert len(rs) == 5
        with workprec(160):
            for r in rs:
                assert abs(r**5 - 1) < mpf(2) ** -110

    def test_zero_roots_stripped(self):
        # x^2 (x - 2)
        rs = sorted_roots(roots_univariate([0, 0, mpc(-2), mpc(1)], PREC))
        assert abs(rs[0]) == 0 and abs(rs[1]) == 0
        assert abs(rs[2] - 2) < mpf(2) ** -110

    def test_large_degree(self):
        # product of (x - j) for j = 1..12 via elementary symmetric build
        coeffs = [mpc(1)]
        for j in range(1, 13):
            nxt = [mpc(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i] -= c * j
                nxt[i + 1] += c
            coeffs = nxt
        rs = sorted_roots(roots_univariate(coeffs, PREC))
        for j, r in enumerate(rs, start=1):
            assert abs(r - j) < mpf(2) ** -96


class TestNewton:
    def test_delannoy_system(self, delannoy):
        H = delannoy.denominator
        P = poly_parse("w - z", ZW)
        sol, res = newton_system([H, P], [mpc("0.4"), mpc("0.45")], PREC)
        with workprec(160):
            target = mpmath.sqrt(2) - 1
            assert abs(sol[0] - target) < mpf(2) ** -120
        assert res < mpf(2) ** -120

    def test_square_system_required(self, delannoy):
        with pytest.raises(Exception):
            newton_system([delannoy.denominator], [mpc(0), mpc(0)], PREC)


class TestEigen:
    def test_symmetric_2x2(self):
        mu = sorted_roots(eigenvalues([[mpc(2), mpc(1)], [mpc(1), mpc(2)]], PREC))
        assert abs(mu[0] - 1) < mpf(2) ** -110
        assert abs(mu[1] - 3) < mpf(2) ** -110

    def test_complex_symmetric(self):
        M = [[mpc(0, 1), mpc(1)], [mpc(1), mpc(0, -1)]]
        # char poly x^2 - (tr) x + det = x^2 - 0x + (1 - 1i*(-1i)... ) = x^2 - 0x + (i*(-i) - 1) = x^2 + 0x + (1 - 1)
        cp = characteristic_polynomial(M, PREC)
        with workprec(160):
            assert abs(cp[1]) < mpf(2) ** -110  # trace is 0
            det = mpc(0, 1) * mpc(0, -1) - 1
            assert abs(cp[0] - det) < mpf(2) ** -110

    def test_triangular(self):
        M = [[mpc(5), mpc(7)], [mpc(0), mpc(-3)]]
        mu = sorted_roots(eigenvalues(M, PREC))
        assert abs(mu[0] + 3) < mpf(2) ** -110
        assert abs(mu[1] - 5) < mpf(2) ** -110


class TestResultant:
    def test_delannoy_eliminant(self, delannoy):
        H = delannoy.denominator
        P = poly_parse("w - z", ZW)
        R = resultant(H, P, 1)
        # the eliminant must vanish exactly on z^2 + 2z - 1 (up to sign)
        expected = poly_parse("z^2 + 2z - 1", ZW)
        assert R == expected or R == -expected

    def test_common_factor_gives_zero(self):
        p = poly_parse("1 - z - w", ZW)
        assert resultant(p * p, p * poly_parse("w - z", ZW), 1).is_zero()

    def test_degree_zero_conventions(self):
        c = poly_parse("3", ZW)
        q = poly_parse("w^2 - z", ZW)
        assert resultant(c, q, 1) == poly_parse("9", ZW)
        assert resultant(q, c, 1) == poly_parse("9", ZW)
        assert resultant(poly_parse("0", ZW), q, 1).is_zero()

    def test_sylvester_shape(self, chebyshev):
        H = chebyshev.denominator  # degree 2 in w
        P = poly_parse("z*w + w^2", ZW)
        m = sylvester_matrix(H, P, 1)
        assert len(m) == 4 and all(len(row) == 4 for row in m)

    def test_resultant_vanishes_at_common_roots(self, chebyshev):
        # common roots of H and -2w(z + w) lie over z = +-i/sqrt(3)
        H = chebyshev.denominator
        P = poly_parse("-2z*w - 2w^2", ZW)
        R = resultant(H, P, 1)
        cs = [c.constant_term() for c in R.univariate_in(0)]
        with workprec(200):
            z = mpc(0, 1) / mpmath.sqrt(3)
            acc = mpc(0)
            for j, c in enumerate(cs):
                acc += (mpf(c.numerator) / c.denominator) * z**j
            assert abs(acc) < mpf(2) ** -150
