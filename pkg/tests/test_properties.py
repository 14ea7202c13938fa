"""Algebraic property suites: hypothesis-driven identities for the exact
layers, and a 50-seed random-quadratic suite for the local analytic data
(slope/curvature closed forms, the second-phase-derivative identity, and
the Q identity), each at the working-precision tolerances."""

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpc, mpf, workprec

from gfasym import (
    FormalSeries,
    MultiPoly,
    build_local_data,
    extract_coefficients,
    gf_new,
    poly_parse,
    ps_compose,
    ps_exp,
    ps_kth_root,
    ps_log1p,
    ps_revert,
    q_polynomial,
)
from gfasym.precision import GUARD_BITS

PREC = 128
ZW = ("z", "w")

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

small_fraction = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)

exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))

polys = st.dictionaries(exponents, small_fraction, min_size=0, max_size=6).map(
    lambda d: MultiPoly(ZW, d)
)

points = st.tuples(
    st.fractions(min_value=-3, max_value=3, max_denominator=8),
    st.fractions(min_value=-3, max_value=3, max_denominator=8),
)


class TestPolynomialLaws:
    @given(polys, polys, small_fraction, small_fraction)
    def test_differentiation_is_linear(self, p, q, a, b):
        combo = p * a + q * b
        for var in (0, 1):
            assert combo.partial(var) == p.partial(var) * a + q.partial(var) * b

    @given(polys, polys, points)
    def test_evaluation_commutes_with_product(self, p, q, point):
        from gfasym import ComplexAP

        pt = [ComplexAP.from_value(x, PREC) for x in point]
        with workprec(PREC + GUARD_BITS):
            lhs = (p * q).eval_ap(pt).to_mpc()
            rhs = p.eval_ap(pt).to_mpc() * q.eval_ap(pt).to_mpc()
            scale = max(mpf(1), abs(lhs), abs(rhs))
            assert abs(lhs - rhs) <= scale * mpf(2) ** -(PREC - 10)

    @given(polys)
    def test_parse_print_parse_identity(self, p):
        assert poly_parse(p.to_text(), ZW) == p

    @given(polys, points)
    def test_exact_eval_matches_float_eval(self, p, point):
        exact = p.eval_exact(point)
        from gfasym import ComplexAP

        pt = [ComplexAP.from_value(x, PREC) for x in point]
        v = p.eval_ap(pt).to_mpc()
        with workprec(PREC + GUARD_BITS):
            target = mpf(exact.numerator) / exact.denominator
            assert abs(v - target) <= mpf(2) ** -(PREC - 10) * (1 + abs(target))


series_coeffs = st.lists(
    st.tuples(
        st.fractions(min_value=-3, max_value=3, max_denominator=5),
        st.fractions(min_value=-3, max_value=3, max_denominator=5),
    ),
    min_size=2,
    max_size=9,
)

SER_TOL = mpf(2) ** -(PREC - 12)


def _series_from(data, zero_constant=True, order=None):
    coeffs = [mpc(0) if zero_constant else mpc(1)]
    with workprec(PREC + GUARD_BITS):
        for re, im in data:
            coeffs.append(
                mpc(mpf(re.numerator) / re.denominator,
                    mpf(im.numerator) / im.denominator)
            )
    n = order if order is not None else len(coeffs) - 1
    return FormalSeries(coeffs, n, PREC)


def _max_diff(a, b):
    n = min(a.order, b.order)
    return max(abs(a.raw(j) - b.raw(j)) for j in range(n + 1))


class TestSeriesLaws:
    @given(series_coeffs)
    def test_exp_log_roundtrip(self, data):
        s = _series_from(data)
        back = ps_log1p(ps_exp(s) - 1)
        assert _max_diff(back, s) < SER_TOL * 8

    @given(series_coeffs, st.integers(2, 4))
    def test_kth_root_power_roundtrip(self, data, k):
        body = _series_from(data, zero_constant=False)
        shifted = [mpc(0)] * k + body.raw_list()
        s = FormalSeries(shifted, body.order + k, PREC)
        y = ps_kth_root(s, k)
        power = y
        for _ in range(k - 1):
            power = power * y
        assert _max_diff(power, s.truncate(power.order)) < SER_TOL * 16

    @given(series_coeffs)
    def test_revert_then_compose_is_identity(self, data):
        y = _series_from(data)
        if abs(y.raw(1)) < mpf("0.01"):
            return  # stay away from near-degenerate linear terms
        eta = ps_revert(y)
        comp = ps_compose(eta, y)
        ident = FormalSeries.identity(comp.order, PREC)
        assert _max_diff(comp, ident) < SER_TOL * 64

    @given(series_coeffs, series_coeffs, series_coeffs)
    def test_compose_associativity(self, da, db, dc):
        a = _series_from(da, zero_constant=False)
        b = _series_from(db)
        c = _series_from(dc)
        lhs = ps_compose(ps_compose(a, b), c)
        rhs = ps_compose(a, ps_compose(b, c))
        assert _max_diff(lhs, rhs) < SER_TOL * 64


class TestLatticeRecurrence:
    def test_delannoy_recurrence_exact(self, delannoy):
        lat = extract_coefficients(delannoy, (12, 12))
        for r in range(1, 13):
            for s in range(1, 13):
                assert lat.value((r, s)) == lat.value((r - 1, s)) + lat.value(
                    (r, s - 1)
                ) + lat.value((r - 1, s - 1))


def _random_quadratic_cases(count=50, seed=20240803):
    """Seeded dense quadratics with a chosen variety point where the
    graph parametrization is well conditioned."""
    rng = random.Random(seed)
    cases = []
    guard = 0
    while len(cases) < count and guard < 4000:
        guard += 1
        terms = {}
        for a in range(3):
            for b in range(3 - a):
                c = rng.randint(-4, 4)
                if c:
                    terms[(a, b)] = Fraction(c)
        if (0, 0) not in terms or not any(b for (_, b) in terms):
            continue
        H = MultiPoly(ZW, terms)
        z0f = Fraction(rng.randint(1, 9), rng.randint(10, 19))
        with workprec(PREC + 2 * GUARD_BITS):
            z0 = mpf(z0f.numerator) / z0f.denominator
            wcoeffs = [
                cp.eval_mpc([mpc(z0), mpc(0)], PREC + 2 * GUARD_BITS)
                for cp in H.univariate_in(1)
            ]
            from gfasym.roots import roots_univariate

            try:
                roots = roots_univariate(wcoeffs, PREC)
            except Exception:
                continue
            best = None
            for w0 in roots:
                hw = H.partial(1).eval_mpc([mpc(z0), w0], PREC + 2 * GUARD_BITS)
                hz = H.partial(0).eval_mpc([mpc(z0), w0], PREC + 2 * GUARD_BITS)
                if (
                    abs(hw) > mpf("0.3")
                    and mpf("0.01") < abs(w0) < mpf(30)
                    and abs(w0 * hw) > mpf("0.05")
                ):
                    best = w0
                    break
            if best is None:
                continue
        cases.append((H, mpc(z0), best))
    assert len(cases) == count
    return cases


ALG_TOL = mpf(2) ** -(PREC - 16)


class TestRandomQuadraticSuite:
    """Closed-form cross-checks on 50 seeded dense quadratics."""

    @pytest.fixture(scope="class")
    def cases(self):
        return _random_quadratic_cases()

    def test_slope_curvature_phase_and_q(self, cases):
        failures = 0
        for H, z0, w0 in cases:
            gf = gf_new(MultiPoly(ZW, {(0, 0): 1}), H)
            p = PREC + GUARD_BITS
            with workprec(p + GUARD_BITS):
                pt = [z0, w0]
                hz = H.partial(0).eval_mpc(pt, p)
                hw = H.partial(1).eval_mpc(pt, p)
                hzz = H.partial(0).partial(0).eval_mpc(pt, p)
                hww = H.partial(1).partial(1).eval_mpc(pt, p)
                hzw = H.partial(0).partial(1).eval_mpc(pt, p)
                gp = -hz / hw
                gpp = -(hzz - 2 * (hz / hw) * hzw + (hz / hw) ** 2 * hww) / hw

                local = build_local_data(gf, (z0, w0), None, 6, PREC)
                v1 = local.g_series.raw(1)
                v2 = local.g_series.raw(2)
                scale1 = 1 + abs(gp)
                scale2 = 1 + abs(gpp)
                ok = abs(v1 - gp) <= ALG_TOL * scale1
                ok = ok and abs(2 * v2 - gpp) <= ALG_TOL * scale2

                # the second phase derivative from the slope closed forms
                ft2_closed = (
                    -z0 * (gp + z0 * gpp) / w0 + z0**2 * gp**2 / w0**2
                )
                ft2_series = 2 * local.phase.raw(2)
                ok = ok and abs(ft2_series - ft2_closed) <= ALG_TOL * (
                    1 + abs(ft2_closed)
                )

                # Q identity: Q(pt) = (-w H_w)^3 ft''(0)
                qv = q_polynomial(H).eval_mpc(pt, p)
                rhs = (-w0 * hw) ** 3 * ft2_series
                ok = ok and abs(qv - rhs) <= ALG_TOL * (1 + abs(qv))

                # residue amplitude closed form (numerator is 1 here)
                ok = ok and abs(
                    local.amplitude.raw(0) - 1 / (-w0 * hw)
                ) <= ALG_TOL * (1 + abs(1 / (-w0 * hw)))
            if not ok:
                failures += 1
        assert failures == 0
