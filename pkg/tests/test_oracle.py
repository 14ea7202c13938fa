import math
from fractions import Fraction

import pytest

from gfasym import (
    ValidationError,
    coefficient_at,
    extract_coefficients,
    extract_ray,
)


def hand_delannoy(n):
    """Independent oracle: the additive lattice-path recurrence."""
    a = [[0] * (n + 1) for _ in range(n + 1)]
    for r in range(n + 1):
        for s in range(n + 1):
            if r == 0 or s == 0:
                a[r][s] = 1
            else:
                a[r][s] = a[r - 1][s] + a[r][s - 1] + a[r - 1][s - 1]
    return a


def chebyshev_u_coeff(r, s):
    """Independent oracle: the classical closed form for the coefficient
    of z^r in the degree-s second-kind orthogonal polynomial."""
    if (s - r) % 2 or r > s:
        return 0
    m = (s - r) // 2
    return (-1) ** m * math.comb((s + r) // 2, m) * 2**r


class TestLattice:
    def test_delannoy_box(self, delannoy):
        lat = extract_coefficients(delannoy, (5, 5))
        hand = hand_delannoy(5)
        for r in range(6):
            for s in range(6):
                assert lat.value((r, s)) == hand[r][s]
        assert lat.value((5, 5)) == 1683

    def test_constant_coefficient(self, cuberoot):
        lat = extract_coefficients(cuberoot, (0, 0))
        assert lat.value((0, 0)) == Fraction(1, 3)

    def test_chebyshev_values(self, chebyshev):
        lat = extract_coefficients(chebyshev, (4, 4))
        assert lat.value((2, 2)) == 4
        assert lat.value((0, 2)) == -1
        assert lat.value((1, 2)) == 0
        for r in range(5):
            for s in range(5):
                assert lat.value((r, s)) == chebyshev_u_coeff(r, s)

    def test_negative_index_convention(self, delannoy):
        lat = extract_coefficients(delannoy, (2, 2))
        assert lat.value((-1, 0)) == 0

    def test_negative_bounds_rejected(self, delannoy):
        with pytest.raises(ValidationError):
            extract_coefficients(delannoy, (3, -1))

    def test_convolution_identity_exact(self, cuberoot):
        # re-multiplying the coefficient box by H reproduces G exactly
        bounds = (6, 6)
        lat = extract_coefficients(cuberoot, bounds)
        h = cuberoot.denominator.terms
        g = cuberoot.numerator.terms
        for r in range(bounds[0] + 1):
            for s in range(bounds[1] + 1):
                acc = Fraction(0)
                for (mr, ms), coeff in h.items():
                    acc += coeff * lat.value((r - mr, s - ms))
                assert acc == g.get((r, s), Fraction(0))

    def test_export_format(self, delannoy):
        text = extract_coefficients(delannoy, (1, 1)).export_text()
        assert text.splitlines() == ["0,0: 1", "0,1: 1", "1,0: 1", "1,1: 3"]

    def test_rational_only(self):
        from gfasym import GaussianRational, MultiPoly, gf_new

        num = MultiPoly(("z", "w"), {(0, 0): 1})
        den = MultiPoly(
            ("z", "w"), {(0, 0): 1, (1, 0): GaussianRational(0, 1)}
        )
        gf = gf_new(num, den)
        with pytest.raises(ValidationError, match="rational"):
            extract_coefficients(gf, (2, 2))


class TestRay:
    def test_matches_box(self, delannoy):
        box = extract_coefficients(delannoy, (12, 9))
        ray = extract_ray(delannoy, (4, 3), 3)
        assert ray == [box.value((4 * m, 3 * m)) for m in range(4)]

    def test_diagonal_values(self, delannoy):
        ray = extract_ray(delannoy, (1, 1), 5)
        assert ray == [1, 3, 13, 63, 321, 1683]

    def test_three_variables(self, multinomial3):
        ray = extract_ray(multinomial3, (1, 1, 1), 8)
        for n in range(9):
            expected = Fraction(
                math.factorial(3 * n),
                math.factorial(n) ** 3,
            ) / 3 ** (3 * n)
            assert ray[n] == expected

    def test_bad_direction(self, delannoy):
        with pytest.raises(ValidationError):
            extract_ray(delannoy, (1, 0), 5)


class TestSingle:
    def test_single_matches_ray(self, delannoy):
        assert coefficient_at(delannoy, (5, 5)) == 1683
        assert coefficient_at(delannoy, (8, 6)) == extract_ray(delannoy, (4, 3), 2)[2]

    def test_axis_index(self, chebyshev):
        assert coefficient_at(chebyshev, (0, 2)) == -1
        assert coefficient_at(chebyshev, (0, 0)) == 1

    def test_origin(self, cuberoot):
        assert coefficient_at(cuberoot, (0, 0)) == Fraction(1, 3)
