import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mpc, mpf, workprec

from gfasym import (
    ComplexAP,
    Direction,
    NoConvergentStartError,
    OutOfScopeError,
    ValidationError,
    check_simple_pole,
    classify_minimality,
    critical_system,
    dir_of,
    gf_new,
    poly_parse,
    solve_critical_2d,
    solve_critical_nd,
)

ZW = ("z", "w")
ZWU = ("z", "w", "u")
PREC = 128


class TestDirection:
    def test_lowest_terms(self):
        assert Direction.of((2, 2)).components == (1, 1)
        assert Direction.of((Fraction(4, 3), 1)).components == (4, 3)
        assert Direction.of((8, 6)).components == (4, 3)

    def test_zero_rejected(self):
        with pytest.raises(ValidationError):
            Direction.of((0, 0))

    def test_index(self):
        assert Direction.of((4, 3)).index(10) == (40, 30)


class TestSystem:
    def test_delannoy_cross_equation_reduces(self, delannoy):
        sys_ = critical_system(delannoy, Direction.of((1, 1)))
        assert sys_[0] == delannoy.denominator
        assert sys_[1] == poly_parse("w - z", ZW)

    def test_cuberoot_system(self, cuberoot):
        sys_ = critical_system(cuberoot, Direction.of((1, 1)))
        # z(2z - 3) + w
        assert sys_[1] == poly_parse("2z^2 - 3z + w", ZW)

    def test_one_variable_has_no_cross_equations(self):
        gf = gf_new(poly_parse("1", ("z",)), poly_parse("1 - z", ("z",)))
        sys_ = critical_system(gf, Direction.of((1,)))
        assert sys_ == [gf.denominator]


class TestSolve2d:
    def test_delannoy_diagonal(self, delannoy):
        pts = solve_critical_2d(delannoy, (1, 1))
        with workprec(192):
            target = mpmath.sqrt(2) - 1
            hits = [
                p
                for p in pts
                if abs(p.coords[0].to_mpc() - target) < mpf(2) ** -(PREC - 16)
                and abs(p.coords[1].to_mpc() - target) < mpf(2) ** -(PREC - 16)
            ]
        assert len(hits) == 1
        assert all(p.residual < mpf(2) ** -(PREC - 8) for p in pts)

    def test_cuberoot_finds_one_one(self, cuberoot):
        pts = solve_critical_2d(cuberoot, (1, 1))
        assert any(
            abs(p.coords[0].to_mpc() - 1) < mpf(2) ** -(PREC - 16)
            and abs(p.coords[1].to_mpc() - 1) < mpf(2) ** -(PREC - 16)
            for p in pts
        )

    def test_chebyshev_conjugate_pair(self, chebyshev):
        pts = solve_critical_2d(chebyshev, (1, 2))
        assert len(pts) == 2
        with workprec(192):
            b = 1 / mpmath.sqrt(3)
            expected = {(-b, b), (b, -b)}
            found = {
                (
                    round(float(p.coords[0].imag), 9),
                    round(float(p.coords[1].imag), 9),
                )
                for p in pts
            }
            assert found == {
                (round(float(x), 9), round(float(y), 9)) for x, y in expected
            }
        for p in pts:
            assert abs(p.coords[0].real) < mpf(2) ** -100
            assert abs(p.coords[1].real) < mpf(2) ** -100

    def test_random_directions_match_closed_form(self, delannoy):
        # the minimal point solving a slope direction has the closed form
        # z = (sqrt(r^2+s^2) - s)/r, w = (sqrt(r^2+s^2) - r)/s
        rng = random.Random(7)
        for _ in range(20):
            r = rng.randint(1, 25)
            s = rng.randint(max(1, r // 5), 5 * r)
            pts = solve_critical_2d(delannoy, (r, s))
            with workprec(192):
                hyp = mpmath.sqrt(r * r + s * s)
                zt, wt = (hyp - s) / r, (hyp - r) / s
                ok = any(
                    abs(p.coords[0].to_mpc() - zt) < mpf(2) ** -(PREC - 16)
                    and abs(p.coords[1].to_mpc() - wt) < mpf(2) ** -(PREC - 16)
                    for p in pts
                )
            assert ok, (r, s)

    def test_zero_direction_rejected(self, delannoy):
        with pytest.raises(ValidationError):
            solve_critical_2d(delannoy, (0, 0))

    def test_torus_family_aborts(self, toral_gf):
        with pytest.raises(OutOfScopeError) as ei:
            solve_critical_2d(toral_gf, (1, 1))
        assert ei.value.kind == "non_isolated"

    def test_repeated_factor_reports_non_simple(self, squared_gf):
        with pytest.raises(OutOfScopeError) as ei:
            solve_critical_2d(squared_gf, (1, 1))
        assert ei.value.kind == "non_simple"


class TestSolveNd:
    def test_multinomial_fixed_point(self, multinomial3):
        pts = solve_critical_nd(multinomial3, (1, 1, 1), starts=12, seed=0)
        assert any(
            all(abs(c.to_mpc() - 1) < mpf(2) ** -(PREC - 16) for c in p.coords)
            for p in pts
        )

    def test_separable_product_point(self, delannoy):
        # (Delannoy) x 1/(1-u): the diagonal direction is governed by the
        # slice z = w = sqrt(2)-1 crossed with the u = 1 sheet
        H2 = delannoy.denominator
        H3terms = {}
        for (a, b), c in H2.terms.items():
            H3terms[(a, b, 0)] = H3terms.get((a, b, 0), Fraction(0)) + c
            H3terms[(a, b, 1)] = H3terms.get((a, b, 1), Fraction(0)) - c
        from gfasym import MultiPoly

        H3 = MultiPoly(ZWU, H3terms)
        gf3 = gf_new(poly_parse("1", ZWU), H3)
        pts = solve_critical_nd(gf3, (1, 1, 1), starts=48, seed=3)
        with workprec(160):
            t = mpmath.sqrt(2) - 1
            found = any(
                abs(p.coords[0].to_mpc() - t) < mpf(2) ** -40
                and abs(p.coords[1].to_mpc() - t) < mpf(2) ** -40
                and abs(p.coords[2].to_mpc() - 1) < mpf(2) ** -40
                for p in pts
            )
        assert found
        # the intersection of two sheets is not a simple pole
        hit = next(
            p
            for p in pts
            if abs(p.coords[2].to_mpc() - 1) < mpf(2) ** -40
            and abs(p.coords[0].to_mpc() - t) < mpf(2) ** -40
        )
        assert not hit.pole_simple

    def test_no_convergent_start(self):
        # H free of w and u makes the critical system inconsistent
        gf = gf_new(poly_parse("1", ZWU), poly_parse("1 - z", ZWU))
        with pytest.raises(NoConvergentStartError):
            solve_critical_nd(gf, (1, 1, 1), starts=6, seed=0)


class TestSimplePole:
    def test_delannoy(self, delannoy, delannoy_points):
        pos, _ = delannoy_points
        simple, axis = check_simple_pole(delannoy, pos)
        assert simple and axis in (0, 1)
        # |z H_z| = (sqrt(2)-1) sqrt(2) = 2 - sqrt(2)
        with workprec(160):
            hz = delannoy.denominator.partial(0).eval_mpc(pos.mpc_coords(), 160)
            val = abs(pos.coords[0].to_mpc() * hz)
            assert abs(val - (2 - mpmath.sqrt(2))) < mpf(2) ** -100

    def test_squared_factor_not_simple(self, squared_gf):
        half = ComplexAP.from_value(Fraction(1, 2), PREC)
        simple, _ = check_simple_pole(squared_gf, (half, half))
        assert not simple

    def test_cuberoot_axis(self, cuberoot, cuberoot_point):
        simple, axis = check_simple_pole(cuberoot, cuberoot_point)
        assert simple and axis == 1  # H_w = -1 dominates at (1,1)


class TestDirOf:
    def test_delannoy_diagonal(self, delannoy, delannoy_points):
        pos, _ = delannoy_points
        d = dir_of(delannoy, pos)
        assert d.consistent
        assert abs(d.projective[0].to_mpc() - 1) < mpf(2) ** -100
        assert d.rationalize().components == (1, 1)

    def test_interior_point_slope(self, delannoy):
        # z = 1/2 on the variety gives w = 1/3 and slope 4:3
        half = ComplexAP.from_value(Fraction(1, 2), PREC)
        third = ComplexAP.from_value(Fraction(1, 3), PREC)
        d = dir_of(delannoy, (half, third))
        assert d.consistent
        with workprec(192):
            assert abs(d.projective[0].to_mpc() - mpf(4) / 3) < mpf(2) ** -100
        assert d.rationalize().components == (4, 3)

    def test_chebyshev_ratios_real_nonnegative(self, chebyshev, chebyshev_points):
        for pt in chebyshev_points:
            d = dir_of(chebyshev, pt)
            assert d.consistent
            r = d.projective[0].to_mpc()
            assert abs(r.imag) < mpf("1e-20")
            assert r.real > -mpf("1e-20")
            assert d.rationalize().components == (1, 2)

    def test_degenerate_axis_rejected(self, chebyshev):
        one = ComplexAP.from_value(1, PREC)
        with pytest.raises(ValidationError):
            dir_of(chebyshev, (one, one))  # w H_w = 0 at (1, 1)


class TestClassify:
    def test_delannoy_strict(self, delannoy_points):
        pos, neg = delannoy_points
        assert pos.minimality == "strict"
        assert neg.minimality == "not_minimal"

    def test_chebyshev_finitely_minimal_with_sibling(self, chebyshev_points):
        for pt in chebyshev_points:
            assert pt.minimality == "finitely_minimal"
            assert len(pt.siblings) == 1
            sib = pt.siblings[0]
            # the companion is the antipodal point
            assert abs(sib[0].to_mpc() + pt.coords[0].to_mpc()) < mpf("1e-8")
            assert abs(sib[1].to_mpc() + pt.coords[1].to_mpc()) < mpf("1e-8")

    def test_cuberoot_strict(self, cuberoot_point):
        assert cuberoot_point.minimality == "strict"

    def test_toral_suspected(self, toral_gf):
        one = ComplexAP.from_value(1, PREC)
        tag, _ = classify_minimality(toral_gf, (one, one))
        assert tag == "toral_suspected"

    def test_grid_minimum(self, delannoy, delannoy_points):
        with pytest.raises(ValidationError):
            classify_minimality(delannoy, delannoy_points[0], grid=8)

    def test_grid_stability(
        self, delannoy, cuberoot, chebyshev, delannoy_points, cuberoot_point,
        chebyshev_points,
    ):
        cases = [
            (delannoy, delannoy_points[0]),
            (cuberoot, cuberoot_point),
            (chebyshev, chebyshev_points[0]),
        ]
        for gf, pt in cases:
            t720, _ = classify_minimality(gf, pt, grid=720)
            t1440, _ = classify_minimality(gf, pt, grid=1440)
            assert t720 == t1440 == pt.minimality

    def test_multinomial_strict(self, multinomial3):
        pts = solve_critical_nd(multinomial3, (1, 1, 1), starts=8, seed=0)
        tag, sibs = classify_minimality(multinomial3, pts[0])
        assert tag == "strict" and sibs == ()
