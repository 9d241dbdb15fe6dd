import cmath
import math
import random

import pytest

from jonq.algebra import (
    INFINITY,
    CirclePoint,
    Mat2,
    PowerSeries,
    check_nonresonant,
    chordal,
    frobenius_norm,
    mat_mul,
    projective_action,
    series_scale_argument,
    tree_sum,
)
from jonq.errors import IndeterminateAction, ResonantParameter


def rand_complex(rng, scale=1.0):
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def rand_mat(rng, scale=1.0):
    return Mat2(*(rand_complex(rng, scale) for _ in range(4)))


class TestMat2:
    def test_identity_multiplication(self):
        rng = random.Random(1)
        m = rand_mat(rng)
        assert mat_mul(Mat2.identity(), m) == m
        assert mat_mul(m, Mat2.identity()) == m

    def test_square_of_ones(self):
        m = Mat2(1, 1, 1, 1)
        sq = mat_mul(m, m)
        assert sq == Mat2(2, 2, 2, 2)

    def test_two_step_generator_product_hand_oracle(self):
        # A(y) = [[alpha, y], [1, 1]] with alpha = i, beta = i, y = 1:
        # A(beta*y) A(y) multiplied out by hand
        alpha = 1j
        a_y = Mat2(alpha, 1.0, 1.0, 1.0)
        a_by = Mat2(alpha, 1j, 1.0, 1.0)
        prod = mat_mul(a_by, a_y)
        assert prod == Mat2(-1 + 1j, 2j, 1 + 1j, 2)

    def test_frobenius_values(self):
        assert frobenius_norm(Mat2.identity()) == pytest.approx(math.sqrt(2))
        assert frobenius_norm(Mat2(2, 0, 0, 0.5)) == pytest.approx(math.sqrt(4.25))
        assert frobenius_norm(Mat2(0, 0, 0, 0)) == 0.0

    def test_submultiplicative(self):
        rng = random.Random(7)
        for _ in range(200):
            a, b = rand_mat(rng, 3.0), rand_mat(rng, 3.0)
            assert frobenius_norm(mat_mul(a, b)) <= (
                frobenius_norm(a) * frobenius_norm(b) * (1 + 1e-12)
            )

    def test_op2_norm_bounds(self):
        rng = random.Random(3)
        for _ in range(100):
            m = rand_mat(rng, 2.0)
            fro = m.frobenius()
            op2 = m.op2_norm()
            assert op2 <= fro + 1e-12
            assert fro <= math.sqrt(2) * op2 + 1e-12

    def test_inverse_and_det(self):
        rng = random.Random(11)
        m = rand_mat(rng)
        prod = mat_mul(m, m.inverse())
        assert abs(prod.m00 - 1) < 1e-12 and abs(prod.m11 - 1) < 1e-12
        assert abs(prod.m01) < 1e-12 and abs(prod.m10) < 1e-12


class TestProjectiveAction:
    def test_matches_map_first_coordinate(self):
        rng = random.Random(5)
        alpha = cmath.exp(0.41j)
        for _ in range(50):
            x = rand_complex(rng, 2.0)
            y = rand_complex(rng, 2.0)
            m = Mat2(alpha, y, 1.0, 1.0)
            if abs(x + 1) < 1e-6:
                continue
            assert projective_action(m, x) == pytest.approx((alpha * x + y) / (x + 1))

    def test_infinity_maps_to_leading_ratio(self):
        alpha = cmath.exp(0.3j)
        m = Mat2(alpha, 0.2 + 0.1j, 1.0, 1.0)
        assert projective_action(m, INFINITY) == pytest.approx(alpha)

    def test_base_point_is_indeterminate(self):
        alpha = cmath.exp(2j * math.pi * 0.4142)
        m = Mat2(alpha, alpha, 1.0, 1.0)  # generator at y = alpha
        with pytest.raises(IndeterminateAction):
            projective_action(m, -1.0 + 0j)

    def test_pole_goes_to_infinity(self):
        m = Mat2(2.0, 1.0, 1.0, 1.0)
        assert projective_action(m, -1.0 + 0j) is INFINITY

    def test_action_is_morphism(self):
        rng = random.Random(17)
        for _ in range(100):
            a, b = rand_mat(rng), rand_mat(rng)
            x = rand_complex(rng, 2.0)
            try:
                lhs = projective_action(mat_mul(a, b), x)
                rhs = projective_action(a, projective_action(b, x))
            except IndeterminateAction:
                continue
            assert chordal(lhs, rhs) < 1e-12


class TestChordal:
    def test_infinity_is_ordinary(self):
        assert chordal(INFINITY, INFINITY) == 0.0
        assert chordal(INFINITY, 0j) == pytest.approx(1.0)
        big = 1e9 + 0j
        assert chordal(INFINITY, big) < 1e-8

    def test_symmetry(self):
        rng = random.Random(2)
        for _ in range(20):
            x, y = rand_complex(rng, 5), rand_complex(rng, 5)
            assert chordal(x, y) == pytest.approx(chordal(y, x))


class TestCirclePoint:
    def test_modulus_exact(self):
        p = CirclePoint(theta=0.3, rho=2.5)
        assert abs(p.value()) == pytest.approx(2.5, abs=1e-15)

    def test_rotation_wraps(self):
        p = CirclePoint(theta=0.9, rho=1.0).rotated(0.3)
        assert 0.0 <= p.theta < 1.0


class TestPowerSeries:
    def rand_series(self, rng, order):
        return PowerSeries([rand_complex(rng) for _ in range(order + 1)])

    def test_ring_laws_exact(self):
        rng = random.Random(23)
        n = 8
        for _ in range(20):
            a, b, c = (self.rand_series(rng, n) for _ in range(3))
            assert (a * b) * c == a * (b * c) or self._close((a * b) * c, a * (b * c))
            assert self._close(a * (b + c), a * b + a * c)

    @staticmethod
    def _close(s, t, tol=1e-12):
        return all(abs(x - y) <= tol for x, y in zip(s.coeffs, t.coeffs))

    def test_truncation_discipline(self):
        # coefficient k of a product depends only on inputs 0..k
        rng = random.Random(4)
        a = self.rand_series(rng, 6)
        b = self.rand_series(rng, 6)
        full = a * b
        chopped = a.truncated(3) * b.truncated(3)
        assert full.coeffs[:4] == chopped.coeffs

    def test_scale_argument_identity(self):
        rng = random.Random(9)
        s = self.rand_series(rng, 6)
        assert series_scale_argument(s, 1.0) == s

    def test_scale_argument_monomial(self):
        beta = cmath.exp(2j * math.pi * 0.37)
        c = beta ** -2
        s = PowerSeries.monomial(1, 5)
        scaled = series_scale_argument(s, c)
        assert scaled.coeffs[1] == pytest.approx(c)
        assert all(x == 0 for i, x in enumerate(scaled.coeffs) if i != 1)

    def test_scale_argument_is_multiplicative(self):
        # (s t)(c y) agrees with s(c y) t(c y) coefficientwise
        rng = random.Random(31)
        c = rand_complex(rng)
        s, t = self.rand_series(rng, 7), self.rand_series(rng, 7)
        lhs = (s * t).scale_argument(c)
        rhs = s.scale_argument(c) * t.scale_argument(c)
        assert self._close(lhs, rhs)

    def test_reciprocal(self):
        rng = random.Random(13)
        s = self.rand_series(rng, 7)
        s = PowerSeries((1.5 + 0.5j,) + s.coeffs[1:])
        one = s * s.reciprocal()
        assert abs(one.coeffs[0] - 1) < 1e-12
        assert all(abs(x) < 1e-12 for x in one.coeffs[1:])

    def test_reciprocal_rejects_zero_constant(self):
        s = PowerSeries([0j, 1.0])
        with pytest.raises(ZeroDivisionError):
            s.reciprocal()

    def test_shift_and_eval(self):
        s = PowerSeries([1.0, 2.0, 3.0])
        assert s.shift().coeffs == (0j, 1 + 0j, 2 + 0j)
        assert s(0.5) == pytest.approx(1 + 2 * 0.5 + 3 * 0.25)


class TestGuardsAndSums:
    def test_resonance_guard(self):
        with pytest.raises(ResonantParameter):
            check_nonresonant(0.5)
        with pytest.raises(ResonantParameter):
            check_nonresonant(21.0 / 64.0)
        check_nonresonant((math.sqrt(5) - 1) / 2)
        check_nonresonant(1.0 / 7.0 + 1e-7)  # near-resonant but resolvable

    def test_tree_sum_matches_sum(self):
        rng = random.Random(6)
        vals = [rng.uniform(-1, 1) for _ in range(37)]
        assert tree_sum(vals) == pytest.approx(sum(vals), abs=1e-12)
        assert tree_sum([]) == 0.0
