"""Scalar, 2x2-matrix, circle and truncated-power-series primitives.

Everything here is immutable and pure; all heavier machinery (cocycle
iteration, profile fitting, polynomial degree growth) builds on these
types.  The extended complex line is represented by ordinary ``complex``
values plus the ``INFINITY`` sentinel, not by homogeneous pairs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import IndeterminateAction, ResonantParameter

# Reproducible "generic" parameters: Diophantine angles far from low-order
# resonances.
GOLDEN_FREQ = (math.sqrt(5.0) - 1.0) / 2.0
DEFAULT_ALPHA_ANGLE = math.sqrt(2.0) - 1.0


def default_alpha() -> complex:
    return cmath.exp(2j * math.pi * DEFAULT_ALPHA_ANGLE)


class _Infinity:
    """Point at infinity of the projective line (singleton)."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_infinity(x) -> bool:
    return x is INFINITY


@dataclass(frozen=True)
class Mat2:
    """2x2 complex matrix."""

    m00: complex
    m01: complex
    m10: complex
    m11: complex

    @staticmethod
    def identity() -> "Mat2":
        return Mat2(1.0 + 0j, 0j, 0j, 1.0 + 0j)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.m00 * other.m00 + self.m01 * other.m10,
            self.m00 * other.m01 + self.m01 * other.m11,
            self.m10 * other.m00 + self.m11 * other.m10,
            self.m10 * other.m01 + self.m11 * other.m11,
        )

    def det(self) -> complex:
        return self.m00 * self.m11 - self.m01 * self.m10

    def frobenius(self) -> float:
        return math.sqrt(
            abs(self.m00) ** 2
            + abs(self.m01) ** 2
            + abs(self.m10) ** 2
            + abs(self.m11) ** 2
        )

    def op2_norm(self) -> float:
        """Operator 2-norm (largest singular value), closed form."""
        a = abs(self.m00) ** 2 + abs(self.m01) ** 2
        b = abs(self.m10) ** 2 + abs(self.m11) ** 2
        c = self.m00 * self.m10.conjugate() + self.m01 * self.m11.conjugate()
        mid = 0.5 * (a + b)
        rad = math.sqrt(max(0.0, (0.5 * (a - b)) ** 2 + abs(c) ** 2))
        return math.sqrt(max(0.0, mid + rad))

    def scaled(self, f: complex) -> "Mat2":
        return Mat2(f * self.m00, f * self.m01, f * self.m10, f * self.m11)

    def inverse(self) -> "Mat2":
        d = self.det()
        if d == 0:
            raise ZeroDivisionError("singular Mat2")
        return Mat2(self.m11 / d, -self.m01 / d, -self.m10 / d, self.m00 / d)

    def trace(self) -> complex:
        return self.m00 + self.m11

    def eigenvalues(self) -> tuple[complex, complex]:
        t = self.trace()
        disc = cmath.sqrt(t * t - 4.0 * self.det())
        return (0.5 * (t + disc), 0.5 * (t - disc))


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    return a @ b


def frobenius_norm(m: Mat2) -> float:
    return m.frobenius()


def projective_action(m: Mat2, x):
    """Moebius action of ``m`` on the extended complex ``x``.

    Raises :class:`IndeterminateAction` when numerator and denominator both
    vanish (projective kernel direction of a singular matrix); denominator
    zero alone maps to INFINITY.
    """
    if is_infinity(x):
        num, den = m.m00, m.m10
    else:
        num = m.m00 * x + m.m01
        den = m.m10 * x + m.m11
    if den == 0:
        if num == 0:
            raise IndeterminateAction("projective action indeterminate")
        return INFINITY
    return num / den


def chordal(x, y) -> float:
    """Chordal (Fubini-Study) distance on the projective line; INFINITY is
    an ordinary point.  Normalized so the diameter is 1."""
    if is_infinity(x) and is_infinity(y):
        return 0.0
    if is_infinity(x):
        return 1.0 / math.sqrt(1.0 + abs(y) ** 2)
    if is_infinity(y):
        return 1.0 / math.sqrt(1.0 + abs(x) ** 2)
    return abs(x - y) / math.sqrt((1.0 + abs(x) ** 2) * (1.0 + abs(y) ** 2))


@dataclass(frozen=True)
class CirclePoint:
    """Point rho * exp(2*pi*i*theta) with the radius carried exactly."""

    theta: float
    rho: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.theta < 1.0):
            object.__setattr__(self, "theta", self.theta % 1.0)
        if self.rho <= 0.0:
            raise ValueError("rho must be positive")

    def value(self) -> complex:
        return self.rho * cmath.exp(2j * math.pi * self.theta)

    def rotated(self, freq: float) -> "CirclePoint":
        return CirclePoint((self.theta + freq) % 1.0, self.rho)


def check_nonresonant(freq: float, max_denominator: int = 64, tol: float = 1e-12) -> None:
    """Reject frequencies indistinguishable from p/q with q <= 64.

    A frequency this close to a low-order rational makes the rotation
    effectively periodic at the working precision.
    """
    if not 0.0 < freq < 1.0:
        raise ValueError("freq must lie in (0, 1)")
    near = Fraction(freq).limit_denominator(max_denominator)
    if abs(freq - float(near)) <= tol:
        raise ResonantParameter(
            f"freq {freq!r} is within {tol:g} of {near} (denominator <= {max_denominator})"
        )


def tree_sum(values) -> float:
    """Pairwise-tree summation: a fixed reduction order independent of how
    the terms were produced, so reductions are bit-stable."""
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def tree_mean(values) -> float:
    vals = list(values)
    if not vals:
        raise ValueError("mean of empty sequence")
    return tree_sum(vals) / len(vals)


class PowerSeries:
    """Truncated univariate power series with complex coefficients.

    All arithmetic is exact through the truncation order: coefficient k of
    any result depends only on coefficients 0..k of the inputs.  Instances
    are immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in coeffs))
        if not self.coeffs:
            raise ValueError("series needs at least the constant coefficient")

    def __setattr__(self, *a):
        raise AttributeError("PowerSeries is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @staticmethod
    def zero(order: int) -> "PowerSeries":
        return PowerSeries([0j] * (order + 1))

    @staticmethod
    def constant(c: complex, order: int) -> "PowerSeries":
        return PowerSeries([complex(c)] + [0j] * order)

    @staticmethod
    def monomial(k: int, order: int, c: complex = 1.0) -> "PowerSeries":
        if k > order:
            return PowerSeries.zero(order)
        coeffs = [0j] * (order + 1)
        coeffs[k] = complex(c)
        return PowerSeries(coeffs)

    def truncated(self, order: int) -> "PowerSeries":
        if order >= self.order:
            return PowerSeries(self.coeffs + (0j,) * (order - self.order))
        return PowerSeries(self.coeffs[: order + 1])

    def _common(self, other: "PowerSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = self._common(other)
        return PowerSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)])

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = self._common(other)
        return PowerSeries([self.coeffs[k] - other.coeffs[k] for k in range(n + 1)])

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            n = self._common(other)
            out = [0j] * (n + 1)
            for i in range(n + 1):
                ci = self.coeffs[i]
                if ci == 0:
                    continue
                for j in range(n + 1 - i):
                    out[i + j] += ci * other.coeffs[j]
            return PowerSeries(out)
        return PowerSeries([complex(other) * c for c in self.coeffs])

    __rmul__ = __mul__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries([-c for c in self.coeffs])

    def shift(self) -> "PowerSeries":
        """Multiply by the series variable (coefficients move up one order)."""
        return PowerSeries((0j,) + self.coeffs[:-1])

    def scale_argument(self, c: complex) -> "PowerSeries":
        """Return s(c*y): coefficient k becomes c**k times coefficient k."""
        out = []
        p = 1.0 + 0j
        for co in self.coeffs:
            out.append(co * p)
            p *= c
        return PowerSeries(out)

    def reciprocal(self) -> "PowerSeries":
        if abs(self.coeffs[0]) <= 1e-300:
            raise ZeroDivisionError("reciprocal of series with (near-)zero constant term")
        inv0 = 1.0 / self.coeffs[0]
        out = [inv0] + [0j] * self.order
        for k in range(1, self.order + 1):
            acc = 0j
            for j in range(1, k + 1):
                acc += self.coeffs[j] * out[k - j]
            out[k] = -inv0 * acc
        return PowerSeries(out)

    def __call__(self, y: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PowerSeries({list(self.coeffs)!r})"


def series_scale_argument(s: PowerSeries, c: complex) -> PowerSeries:
    return s.scale_argument(c)
