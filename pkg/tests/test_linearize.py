import cmath
import math

import pytest

from jonq.algebra import DEFAULT_ALPHA_ANGLE, GOLDEN_FREQ, PowerSeries
from jonq.errors import SmallDivisor
from jonq.linearize import (
    ConjugacyCoeffs,
    coeffs_to_json,
    conjugacy_equations,
    estimate_radius,
    evaluate_conjugacy,
    residual_norms,
    solve_coefficients,
    verify_conjugacy_numeric,
)
from jonq.maps import MapParams

P = MapParams.from_angles(DEFAULT_ALPHA_ANGLE, GOLDEN_FREQ)


# --- independent residual oracle -------------------------------------------
# Substitutes series into the three conjugacy identities with its own
# convolution code (no PowerSeries), at double the working truncation.

def _mul(s, t, order):
    out = [0j] * (order + 1)
    for i, si in enumerate(s[: order + 1]):
        if si == 0:
            continue
        for j, tj in enumerate(t[: order + 1 - i]):
            out[i + j] += si * tj
    return out


def _add(order, *terms):
    out = [0j] * (order + 1)
    for t in terms:
        for i, x in enumerate(t[: order + 1]):
            out[i] += x
    return out


def _smul(c, s):
    return [c * x for x in s]


def _argscale(s, c):
    out, p = [], 1.0 + 0j
    for x in s:
        out.append(x * p)
        p *= c
    return out


def _yshift(s, order):
    return ([0j] + list(s))[: order + 1]


def oracle_residuals(a, b, c, alpha, beta, order):
    a_, b_, c_ = (_argscale(s, 1.0 / beta**2) for s in (a, b, c))
    m = lambda s, t: _mul(s, t, order)
    al2 = alpha * alpha
    e1 = _add(
        order,
        _smul(beta, m(a_, c)),
        _smul(beta, m(a_, a)),
        _smul(-1, m(c_, a)),
        _smul(alpha, m(a_, a)),
        _yshift(
            _add(order, _smul(al2, m(a_, c)), _smul(-alpha, m(c_, c)),
                 _smul(-1, m(c_, c)), _smul(-1, m(c_, a))),
            order,
        ),
    )
    e2 = _add(
        order,
        _smul(beta, a_),
        _smul(-beta, a),
        _yshift(
            _add(order, _smul(al2, a_), _smul(-alpha * beta, c), _smul(-beta, c),
                 _smul(-beta, a), _smul(-alpha, c_), _smul(-1, c_)),
            order,
        ),
        _smul(beta * (alpha + beta), m(a, b_)),
        _smul(alpha + beta, m(b, a_)),
        _smul(beta * beta, m(b_, c)),
        _smul(-1, m(b, c_)),
        _yshift(_add(order, _smul(al2 * beta, m(b_, c)), _smul(-1, m(b, c_))), order),
    )
    lin = [0j] * (order + 1)
    lin[1] = alpha + 1.0
    e3 = _add(
        order,
        lin,
        list(b[: order + 1]),
        _smul(-beta, b_),
        _yshift(_smul(-al2, b_), order),
        _yshift(b, order),
        _smul(-(alpha + beta), m(b_, b)),
    )
    return e1, e2, e3


class TestSolve:
    def test_seed_coefficients_exact(self):
        coeffs = solve_coefficients(P, 4)
        assert coeffs.a.coeffs[0] == 1.0 - P.beta
        assert coeffs.b.coeffs[0] == 0
        assert coeffs.c.coeffs[0] == P.alpha + P.beta

    def test_first_order_closed_form(self):
        coeffs = solve_coefficients(P, 4)
        b1 = P.beta * (1.0 + P.alpha) / (1.0 - P.beta)
        assert abs(coeffs.b.coeffs[1] - b1) < 1e-12

    def test_residuals_vanish_through_order_12(self):
        coeffs = solve_coefficients(P, 12)
        # library-side residuals
        assert max(residual_norms(coeffs)) <= 1e-10
        # independent oracle at double truncation: orders 0..12 must vanish,
        # orders 13..24 are the expected nonzero tail of the truncated solve
        a = list(coeffs.a.coeffs) + [0j] * 12
        b = list(coeffs.b.coeffs) + [0j] * 12
        c = list(coeffs.c.coeffs) + [0j] * 12
        for e in oracle_residuals(a, b, c, P.alpha, P.beta, 24):
            assert max(abs(x) for x in e[:13]) <= 1e-10

    def test_perturbed_coefficient_is_detected(self):
        coeffs = solve_coefficients(P, 6)
        b = list(coeffs.b.coeffs)
        b[1] += 1e-3
        perturbed = ConjugacyCoeffs(
            a=coeffs.a, b=PowerSeries(b), c=coeffs.c,
            params=P, small_divisor_floor=coeffs.small_divisor_floor,
        )
        r1, r2, r3 = residual_norms(perturbed)
        assert r3 >= 1e-4

    def test_seeds_only_forcing_term(self):
        # with only the order-0 seeds, the first identity residual at order
        # 1 in the x^0 equation is the forcing term alpha + 1
        w = 8
        a = PowerSeries.constant(1.0 - P.beta, w)
        b = PowerSeries.zero(w)
        c = PowerSeries.constant(P.alpha + P.beta, w)
        _, _, e3 = conjugacy_equations(a, b, c, P.alpha, P.beta)
        assert abs(e3.coeffs[1]) == pytest.approx(abs(P.alpha + 1.0), abs=1e-14)
        assert abs(e3.coeffs[1]) > 0.1

    def test_determinism_bitwise(self):
        c1 = solve_coefficients(P, 10)
        c2 = solve_coefficients(P, 10)
        assert c1.a.coeffs == c2.a.coeffs
        assert c1.b.coeffs == c2.b.coeffs
        assert c1.c.coeffs == c2.c.coeffs

    def test_small_divisor_raises(self):
        near = MapParams.from_angles(DEFAULT_ALPHA_ANGLE, 1.0 / 7.0 + 1e-11)
        with pytest.raises(SmallDivisor) as exc:
            solve_coefficients(near, 8)
        assert exc.value.magnitude < 1e-8


class TestNumericConjugacy:
    def test_zero_fiber_is_moebius_conjugacy(self):
        coeffs = solve_coefficients(P, 12)
        assert verify_conjugacy_numeric(coeffs, 100, y_radius=0.0, x_radius=0.5) < 1e-12

    def test_small_radius_error(self):
        coeffs = solve_coefficients(P, 12)
        assert verify_conjugacy_numeric(coeffs, 200, y_radius=0.01) < 1e-10

    def test_halving_scales_with_order(self):
        # radii chosen so the truncation tail dominates double round-off
        coeffs = solve_coefficients(P, 12)
        radii = [0.64, 0.32, 0.16, 0.08]
        errs = [verify_conjugacy_numeric(coeffs, 200, y_radius=r) for r in radii]
        ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
        for r in ratios:
            assert 2.0**11 <= r <= 2.0**15

    def test_evaluate_matches_series(self):
        coeffs = solve_coefficients(P, 8)
        y = 0.05 * cmath.exp(0.7j)
        x = 0.3 + 0.1j
        want = (coeffs.a(y) * x + coeffs.b(y)) / (coeffs.c(y) * x + 1.0)
        assert evaluate_conjugacy(coeffs, x, y) == want


class TestRadius:
    def test_stable_across_truncations(self):
        r12 = estimate_radius(solve_coefficients(P, 12))
        r16 = estimate_radius(solve_coefficients(P, 16))
        assert r12 > 0 and r16 > 0
        assert 0.5 <= r12 / r16 <= 2.0

    def test_geometric_series_injection(self):
        n = 12
        geo = PowerSeries([4.0**k for k in range(n + 1)])
        fake = ConjugacyCoeffs(a=geo, b=geo, c=geo, params=P, small_divisor_floor=1.0)
        r = estimate_radius(fake)
        assert r == pytest.approx(0.25, rel=0.2)

    def test_near_resonance_collapses_radius(self):
        generic = estimate_radius(solve_coefficients(P, 12))
        near = MapParams.from_angles(DEFAULT_ALPHA_ANGLE, 1.0 / 7.0 + 1e-7)
        resonant = estimate_radius(solve_coefficients(near, 12))
        assert resonant <= generic / 10.0

    def test_needs_order_eight(self):
        with pytest.raises(ValueError):
            estimate_radius(solve_coefficients(P, 6))


class TestExport:
    def test_json_schema(self):
        coeffs = solve_coefficients(P, 6)
        doc = coeffs_to_json(coeffs)
        assert set(doc) == {"alpha", "beta", "N", "a", "b", "c", "divisor_floor_hit"}
        assert doc["N"] == 6
        assert len(doc["a"]) == 7
        assert doc["b"][0] == [0.0, 0.0]
        assert doc["divisor_floor_hit"] > 0
