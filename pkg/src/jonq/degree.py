"""Exact degree growth of the map family on the projective plane.

A rational self-map is carried as three same-degree homogeneous
polynomials in (x, y, z) without common factor; composition substitutes
and divides out the exact gcd.  All arithmetic is exact over the
rationals with (alpha, beta) specialized to random integers; genericity
is enforced by recomputing every degree sequence at two independent
specializations and demanding identical results.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from .errors import SpecializationMismatch, ZeroComponent

_X, _Y, _Z = sp.symbols("x y z")
GENS = (_X, _Y, _Z)

MAX_DEGREE_STEPS = 12
_COEFF_DIGIT_LIMIT = 1_000_000


@dataclass(frozen=True)
class HomogeneousMap:
    """Three coprime homogeneous polynomials of equal degree."""

    components: tuple  # of sympy Poly in (x, y, z) over QQ
    degree: int
    specialization: tuple  # the exact (alpha, beta) used, as Fractions

    def __post_init__(self):
        degs = set()
        for comp in self.components:
            if comp.is_zero:
                raise ZeroComponent("component vanishes identically")
            if not comp.is_homogeneous:
                raise ValueError("components must be homogeneous")
            degs.add(comp.total_degree())
        if degs != {self.degree}:
            raise ValueError(f"component degrees {degs} != {self.degree}")

    def evaluate(self, point) -> tuple:
        """Exact evaluation at a homogeneous triple."""
        subs = dict(zip(GENS, [sp.Rational(t) for t in point]))
        return tuple(comp.as_expr().subs(subs) for comp in self.components)


def specialize_f(alpha_q, beta_q) -> HomogeneousMap:
    """The degree-2 triple ((alpha x + y) z : beta y (x + z) : z (x + z))
    with exact rational parameter values.

    The family semantics need nonzero values; degenerate ones are still
    accepted so that the genericity cross-check can catch them (beta = 0
    kills a component outright and raises :class:`ZeroComponent`).
    """
    a = sp.Rational(Fraction(alpha_q))
    b = sp.Rational(Fraction(beta_q))
    comps = (
        sp.Poly((a * _X + _Y) * _Z, *GENS, domain="QQ"),
        sp.Poly(b * _Y * (_X + _Z), *GENS, domain="QQ"),
        sp.Poly(_Z * (_X + _Z), *GENS, domain="QQ"),
    )
    return HomogeneousMap(
        components=comps, degree=2, specialization=(Fraction(alpha_q), Fraction(beta_q))
    )


def linear_map(rows) -> HomogeneousMap:
    """Degree-1 map from a 3x3 exact coefficient matrix (test inputs)."""
    comps = []
    for row in rows:
        expr = sum(sp.Rational(Fraction(c)) * g for c, g in zip(row, GENS))
        comps.append(sp.Poly(expr, *GENS, domain="QQ"))
    return HomogeneousMap(components=tuple(comps), degree=1, specialization=(Fraction(0), Fraction(0)))


def _coeff_guard(poly: sp.Poly):
    worst = max((abs(c.p) for c in poly.coeffs()), default=1)
    if len(str(worst)) > _COEFF_DIGIT_LIMIT:
        raise ArithmeticError("coefficient size exceeded the desk-scale guard")


def compose(f: HomogeneousMap, g: HomogeneousMap) -> HomogeneousMap:
    """Substitute g into f and divide out the exact gcd of the three
    results; the resulting degree is deg f * deg g - deg gcd."""
    gx, gy, gz = (comp.as_expr() for comp in g.components)
    raw = []
    for comp in f.components:
        expr = comp.as_expr().subs(
            {_X: gx, _Y: gy, _Z: gz}, simultaneous=True
        ).expand()
        poly = sp.Poly(expr, *GENS, domain="QQ")
        if poly.is_zero:
            raise ZeroComponent("composition produced an identically zero component")
        raw.append(poly)
    common = sp.gcd(sp.gcd(raw[0], raw[1]), raw[2])
    reduced = tuple(sp.Poly(sp.exquo(p, common), *GENS, domain="QQ") for p in raw)
    for poly in reduced:
        _coeff_guard(poly)
    check = sp.gcd(sp.gcd(reduced[0], reduced[1]), reduced[2])
    if check.total_degree() != 0:
        raise ArithmeticError("gcd removal left a common factor")
    degree = f.degree * g.degree - common.total_degree()
    return HomogeneousMap(
        components=reduced, degree=degree, specialization=g.specialization
    )


def iterate_degrees(f: HomogeneousMap, n: int) -> list[int]:
    """Degrees of f, f^2, ..., f^n by repeated composition."""
    if not 1 <= n <= MAX_DEGREE_STEPS:
        raise ValueError(f"n must lie in [1, {MAX_DEGREE_STEPS}]")
    degs = [f.degree]
    cur = f
    for _ in range(n - 1):
        cur = compose(f, cur)
        degs.append(cur.degree)
    return degs


def degree_sequence(n: int, seed: int = 0, specializations=None) -> list[int]:
    """Degree sequence of the family, certified by two specializations.

    Random integer pairs for (alpha, beta) are drawn from [2, 10^4] unless
    explicit pairs are supplied; disagreeing sequences are retried with
    fresh pairs up to 3 times before :class:`SpecializationMismatch`.
    """
    rng = random.Random(seed)

    def draw():
        return (rng.randint(2, 10_000), rng.randint(2, 10_000))

    attempts = 0
    while True:
        pairs = specializations if specializations else (draw(), draw())
        seq = [iterate_degrees(specialize_f(a, b), n) for a, b in pairs]
        if all(s == seq[0] for s in seq[1:]):
            return seq[0]
        attempts += 1
        if specializations or attempts >= 3:
            raise SpecializationMismatch(
                f"degree sequences disagree across specializations: {seq}"
            )


@dataclass(frozen=True)
class GrowthReport:
    degrees: tuple
    growth_class: str  # Bounded | Linear | Quadratic | Exponential
    lambda_estimate: float
    lambda_estimate_half: float
    linear_slope: float
    entropy_bound: float
    low_confidence: bool


def growth_classify(degrees) -> GrowthReport:
    """Classify a degree sequence and report the dynamical-degree proxy.

    lambda_estimate is (deg f^N)^(1/N) with the N/2 value alongside for
    trend; entropy_bound = log(lambda_estimate) realizes the entropy
    inequality as a report, never as an equality claim.
    """
    degrees = [int(d) for d in degrees]
    if len(degrees) < 6:
        raise ValueError("need at least 6 degrees to classify")
    if any(d <= 0 for d in degrees):
        raise ValueError("degrees must be positive")
    n = len(degrees)
    lam = degrees[-1] ** (1.0 / n)
    half_idx = n // 2
    lam_half = degrees[half_idx - 1] ** (1.0 / half_idx)

    tail = degrees[n // 2 :]
    diffs = [b - a for a, b in zip(degrees, degrees[1:])]
    tail_diffs = diffs[len(diffs) // 2 :]
    second = [b - a for a, b in zip(diffs, diffs[1:])]
    tail_second = second[len(second) // 2 :] or second

    low_confidence = False
    if max(tail) == max(degrees) and all(d == 0 for d in tail_diffs):
        cls = "Bounded"
        slope = 0.0
    elif abs(lam - lam_half) < 0.05 and lam > 1.1:
        cls = "Exponential"
        slope = 0.0
    elif tail_second and min(tail_second) > 0:
        cls = "Quadratic"
        slope = 0.0
    else:
        cls = "Linear"
        top = list(range(n // 2, n))
        xs = [t + 1.0 for t in top]
        ys = [float(degrees[t]) for t in top]
        xm = sum(xs) / len(xs)
        ym = sum(ys) / len(ys)
        den = sum((xx - xm) ** 2 for xx in xs)
        slope = sum((xx - xm) * (yy - ym) for xx, yy in zip(xs, ys)) / den
        low_confidence = slope <= 0
    return GrowthReport(
        degrees=tuple(degrees),
        growth_class=cls,
        lambda_estimate=lam,
        lambda_estimate_half=lam_half,
        linear_slope=slope,
        entropy_bound=math.log(lam),
        low_confidence=low_confidence,
    )


def base_point_check(f: HomogeneousMap, points) -> list[bool]:
    """Exact vanishing of all three components at each homogeneous triple."""
    out = []
    for pt in points:
        if all(sp.Rational(t) == 0 for t in pt):
            raise ValueError("projective points must be nonzero triples")
        vals = f.evaluate(pt)
        out.append(all(v == 0 for v in vals))
    return out


def family_base_points(f: HomogeneousMap) -> tuple:
    """The three base points (1:0:0), (0:1:0), (-1:alpha:1) at the map's
    own specialization."""
    alpha = f.specialization[0]
    return ((1, 0, 0), (0, 1, 0), (-1, alpha, 1))


def growth_report_json(report: GrowthReport) -> dict:
    return {
        "degrees": list(report.degrees),
        "growth_class": report.growth_class,
        "lambda_estimate": report.lambda_estimate,
        "lambda_estimate_half": report.lambda_estimate_half,
        "linear_slope": report.linear_slope,
        "entropy_bound": report.entropy_bound,
        "low_confidence": report.low_confidence,
    }
