"""Quasiperiodic cocycle generator families, iteration with renormalization,
Lyapunov-exponent estimation, and the square-root normalization of the
squared-variable family off the unit circle.

Generator families (y = rho * exp(2*pi*i*theta), rotation multiplier
exp(2*pi*i*freq)):

* ``jonquieres_a``:   [[alpha, y],  [1, 1]]
* ``jonquieres_b``:   [[alpha, y^2],[1, 1]]
* ``btilde``:         the previous divided by a continuous branch of
  sqrt(alpha - y^2); requires rho != 1
* ``schrodinger``:    [[E - v(y), -1], [1, 0]] with a cosine-polynomial
  potential extended analytically off the unit circle
* ``diagonal_power``: [[y, 0], [0, 1/y]] (closed-form L(rho) = |ln rho|)
* ``constant``:       a fixed matrix
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .algebra import (
    GOLDEN_FREQ,
    Mat2,
    check_nonresonant,
    default_alpha,
    tree_mean,
    tree_sum,
)
from .backend import kernels
from .errors import BranchFailure, Overflow, RadiusOne, SingularFactor

KINDS = (
    "jonquieres_a",
    "jonquieres_b",
    "btilde",
    "schrodinger",
    "diagonal_power",
    "constant",
)

_KIND_CODES = {
    "jonquieres_a": kernels.KIND_JONQ_A,
    "jonquieres_b": kernels.KIND_JONQ_B,
    "btilde": kernels.KIND_BTILDE,
    "schrodinger": kernels.KIND_SCHRODINGER,
    "diagonal_power": kernels.KIND_DIAGONAL,
    "constant": kernels.KIND_CONSTANT,
}

_ALPHA_KINDS = {"jonquieres_a", "jonquieres_b", "btilde"}


@dataclass(frozen=True)
class CocycleSpec:
    """A generator family plus its parameters.

    ``alpha`` is only meaningful for the Jonquieres kinds, ``energy`` and
    ``potential`` (cosine coefficients: a0, a1, ...) for ``schrodinger``,
    ``matrix`` for ``constant``.  Instances are validated on construction;
    a ``btilde`` spec additionally verifies that a continuous square-root
    branch of alpha - y^2 closes up around its circle.
    """

    kind: str
    alpha: complex = field(default_factory=default_alpha)
    rho: float = 1.0
    freq: float = GOLDEN_FREQ
    energy: float = 0.0
    potential: tuple = ()
    matrix: Mat2 | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown cocycle kind {self.kind!r}")
        if self.rho <= 0.0:
            raise ValueError("rho must be positive")
        check_nonresonant(self.freq)
        if self.kind in _ALPHA_KINDS and abs(abs(self.alpha) - 1.0) > 1e-12:
            raise ValueError("|alpha| must equal 1 to 1e-12")
        if self.kind == "btilde":
            if self.rho == 1.0:
                raise RadiusOne("square-root normalization undefined at rho = 1")
            _verified_branch(self.alpha, self.rho)
        if self.kind == "constant" and self.matrix is None:
            raise ValueError("constant kind requires a matrix")
        object.__setattr__(self, "potential", tuple(float(c) for c in self.potential))

    def with_rho(self, rho: float) -> "CocycleSpec":
        return replace(self, rho=rho)

    def multiplier(self) -> complex:
        return cmath.exp(2j * math.pi * self.freq)


@dataclass(frozen=True)
class LyapunovEstimate:
    """Phase-averaged (1/n) log-norm of the n-step product.

    ``half_n_value`` is the same estimator at n // 2 on the same
    trajectories; |value - half_n_value| is the caller-facing structural
    error, to be added to ``stderr``.  Raw values are reported (small
    negatives possible for non-unimodular families; nothing is clamped).
    """

    value: float
    n: int
    samples: int
    half_n_value: float
    stderr: float

    @property
    def total_error(self) -> float:
        return self.stderr + abs(self.value - self.half_n_value)


def sqrt_branch(spec: CocycleSpec, theta: float) -> complex:
    """Continuous determination of sqrt(alpha - y(theta)^2) on the circle.

    For rho < 1 the value alpha - y^2 winds 0 times around the origin, for
    rho > 1 it winds twice; in both cases a global continuous square root
    exists and is given in closed form.  Branch closure is verified once
    per (alpha, rho) at spec construction.
    """
    if spec.rho == 1.0:
        raise RadiusOne("square-root branch undefined at rho = 1")
    return _branch_value(spec.alpha, spec.rho, theta)


def _branch_value(alpha: complex, rho: float, theta: float) -> complex:
    y = rho * cmath.exp(2j * math.pi * theta)
    if rho < 1.0:
        return cmath.sqrt(alpha) * cmath.sqrt(1.0 - y * y / alpha)
    return 1j * y * cmath.sqrt(1.0 - alpha / (y * y))


def _branch_grid(alpha: complex, rho: float, m: int) -> np.ndarray:
    theta = np.arange(m + 1) / m
    y = rho * np.exp(2j * np.pi * theta)
    if rho < 1.0:
        return np.sqrt(complex(alpha)) * np.sqrt(1.0 - y * y / alpha)
    return 1j * y * np.sqrt(1.0 - alpha / (y * y))


def _tracked_branch(alpha: complex, rho: float, m: int) -> tuple[np.ndarray, int]:
    """Track sqrt(alpha - y^2) around the circle by unwrapping the argument.

    Returns the branch values on an (m+1)-point closed grid together with
    the winding number of alpha - y^2 about 0.
    """
    theta = np.arange(m + 1) / m
    w = alpha - (rho * np.exp(2j * np.pi * theta)) ** 2
    if np.any(w == 0):
        raise BranchFailure("alpha - y^2 vanishes on the circle")
    phase = np.angle(w[0]) + np.concatenate(
        ([0.0], np.cumsum(np.angle(w[1:] / w[:-1])))
    )
    winding = (phase[-1] - phase[0]) / (2.0 * math.pi)
    s = np.sqrt(np.abs(w)) * np.exp(0.5j * phase)
    return s, int(round(winding))


@lru_cache(maxsize=128)
def _verified_branch(alpha: complex, rho: float) -> int:
    """Verify branch closure and consistency; returns the winding number.

    Tracks the branch at 4096 grid points, doubling the resolution until
    two successive refinements agree below 1e-6 at shared points, then
    checks closure (even winding) and agreement with the closed form up to
    a global sign.
    """
    m = 4096
    s_prev, winding = _tracked_branch(alpha, rho, m)
    while True:
        m *= 2
        s_next, winding = _tracked_branch(alpha, rho, m)
        if np.max(np.abs(s_next[::2] - s_prev)) < 1e-6:
            break
        if m >= 1 << 20:
            raise BranchFailure(
                f"branch tracking did not stabilize (rho = {rho!r} too close to 1?)"
            )
        s_prev = s_next
    if winding % 2 != 0:
        raise BranchFailure(f"odd winding number {winding}: branch cannot close")
    if abs(s_next[-1] - s_next[0]) > 1e-8 * max(1.0, abs(s_next[0])):
        raise BranchFailure("tracked branch failed to close around the circle")
    closed = _branch_grid(alpha, rho, m)
    dev = min(np.max(np.abs(closed - s_next)), np.max(np.abs(closed + s_next)))
    if dev > 1e-6:
        raise BranchFailure("tracked branch disagrees with closed form")
    return winding


def evaluate_generator(spec: CocycleSpec, theta: float) -> Mat2:
    """Exact generator value at y = rho * exp(2*pi*i*theta)."""
    if spec.kind == "constant":
        return spec.matrix
    y = spec.rho * cmath.exp(2j * math.pi * theta)
    if spec.kind == "jonquieres_a":
        return Mat2(spec.alpha, y, 1.0 + 0j, 1.0 + 0j)
    if spec.kind == "jonquieres_b":
        return Mat2(spec.alpha, y * y, 1.0 + 0j, 1.0 + 0j)
    if spec.kind == "btilde":
        s = sqrt_branch(spec, theta)
        return Mat2(spec.alpha / s, y * y / s, 1.0 / s, 1.0 / s)
    if spec.kind == "schrodinger":
        v = 0j
        if spec.potential:
            v += spec.potential[0]
            p = 1.0 + 0j
            for c in spec.potential[1:]:
                p *= y
                v += c * 0.5 * (p + 1.0 / p)
        return Mat2(spec.energy - v, -1.0 + 0j, 1.0 + 0j, 0j)
    # diagonal_power
    return Mat2(y, 0j, 0j, 1.0 / y)


def _check_generator_scale(spec: CocycleSpec, theta: float) -> None:
    g = evaluate_generator(spec, theta)
    # max entry modulus brackets the Frobenius norm within a factor of 2
    nrm = max(abs(g.m00), abs(g.m01), abs(g.m10), abs(g.m11))
    if not (1e-150 <= nrm <= 1e150):
        raise Overflow(f"generator norm {nrm:.3e} outside [1e-150, 1e150]")


def _kernel_args(spec: CocycleSpec):
    cmat = None
    if spec.kind == "constant":
        m = spec.matrix
        cmat = np.array([m.m00, m.m01, m.m10, m.m11], dtype=np.complex128)
    pot = np.asarray(spec.potential, dtype=np.float64)
    return (
        _KIND_CODES[spec.kind],
        complex(spec.alpha),
        float(spec.rho),
        float(spec.freq),
        float(spec.energy),
        pot,
        cmat,
    )


def iterate(spec: CocycleSpec, theta: float, n: int) -> tuple[Mat2, float]:
    """n-step product A(theta + (n-1) freq) ... A(theta), renormalized.

    Returns (P, S) with the exact product equal to exp(S) * P up to
    round-off and frobenius(P) = 1.  The empty product (n = 0) is the
    identity, returned as (id / sqrt(2), ln sqrt(2)).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Mat2.identity().scaled(1.0 / math.sqrt(2.0)), 0.5 * math.log(2.0)
    _check_generator_scale(spec, theta)
    args = _kernel_args(spec)
    _, s_full, _, p_full = kernels.cocycle_sums(
        *args, np.array([theta % 1.0]), int(n)
    )
    p = p_full[0]
    return Mat2(p[0, 0], p[0, 1], p[1, 0], p[1, 1]), float(s_full[0])


def inverse_iterate(spec: CocycleSpec, theta: float, n: int) -> tuple[Mat2, float]:
    """Backward product A_{-n}(y) = A_n(beta^{-n} y)^{-1}, renormalized.

    Raises :class:`SingularFactor` with the offending step index when a
    factor is numerically singular (relative det below 1e-12).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Mat2.identity().scaled(1.0 / math.sqrt(2.0)), 0.5 * math.log(2.0)
    p = Mat2.identity()
    s = 0.0
    for k in range(1, n + 1):
        g = evaluate_generator(spec, (theta - k * spec.freq) % 1.0)
        det = g.det()
        if abs(det) <= 1e-12 * max(1e-300, g.frobenius() ** 2):
            raise SingularFactor(k)
        p = g.inverse() @ p
        nrm = p.frobenius()
        s += math.log(nrm)
        p = p.scaled(1.0 / nrm)
    return p, s


def reconstruct(p: Mat2, s: float) -> Mat2:
    """Undo the renormalization: exp(s) * p."""
    return p.scaled(math.exp(s))


def phase_samples(samples: int, seed: int) -> np.ndarray:
    """Low-discrepancy phases frac(offset + j * golden) with a seeded offset."""
    offset = random.Random(seed).random()
    return np.mod(offset + np.arange(samples) * GOLDEN_FREQ, 1.0)


def lyapunov_phase_values(
    spec: CocycleSpec, n: int, samples: int, seed: int, norm: str = "fro"
) -> tuple[np.ndarray, np.ndarray]:
    """Per-phase (1/n) log-norms at n and n//2 (the raw estimator data).

    ``norm`` selects Frobenius (canonical) or the operator 2-norm variant,
    which exists only for the norm-independence check.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if norm not in ("fro", "op2"):
        raise ValueError("norm must be 'fro' or 'op2'")
    thetas = phase_samples(samples, seed)
    _check_generator_scale(spec, float(thetas[0]))
    args = _kernel_args(spec)
    s_half, s_full, p_half, p_full = kernels.cocycle_sums(*args, thetas, int(n))
    half = n // 2
    if norm == "op2":
        # products are Frobenius-normalized, so the op-2-norm of the full
        # product is exp(s) * op2(p) with op2(p) in [1/sqrt(2), 1]
        corr_full = np.array(
            [math.log(Mat2(*p.reshape(4)).op2_norm()) for p in p_full]
        )
        corr_half = np.array(
            [math.log(Mat2(*p.reshape(4)).op2_norm()) for p in p_half]
        )
        s_full = s_full + corr_full
        s_half = s_half + corr_half
    return s_half / half, s_full / n


def lyapunov(
    spec: CocycleSpec, n: int, samples: int, seed: int, norm: str = "fro"
) -> LyapunovEstimate:
    """Phase-averaged Lyapunov-exponent estimate.

    The estimator is the mean over ``samples`` low-discrepancy phases of
    (1/n) ln ||A_n(y)||; reductions use pairwise-tree summation so results
    are reproducible bit-for-bit.
    """
    half_vals, vals = lyapunov_phase_values(spec, n, samples, seed, norm)
    value = tree_mean(vals)
    half_value = tree_mean(half_vals)
    if samples > 1:
        var = tree_sum((vals - value) ** 2) / (samples - 1)
        stderr = math.sqrt(var / samples)
    else:
        stderr = 0.0
    return LyapunovEstimate(
        value=float(value),
        n=n,
        samples=samples,
        half_n_value=float(half_value),
        stderr=float(stderr),
    )


def two_step_limit_check(
    alpha: complex, freq: float, rho: float, grid: int = 720
) -> tuple[Mat2, float]:
    """Average two-step normalized product and its sup-distance from the
    large-radius limit.

    With m = exp(2*pi*i*freq) the two-step product B~(m y) B~(y) tends, as
    rho grows, to the unit-determinant matrix -(1/m) [[m^2, alpha + m^2],
    [0, 1]]; the deviation reported here is the sup over theta of the
    entrywise-absolute-sum distance and must shrink as rho grows.
    """
    if rho < 10.0:
        raise ValueError("two-step limit check requires rho >= 10")
    spec = CocycleSpec(kind="btilde", alpha=alpha, rho=rho, freq=freq)
    m = spec.multiplier()
    limit = Mat2(-m, -(alpha + m * m) / m, 0j, -1.0 / m)
    acc = np.zeros((2, 2), dtype=np.complex128)
    worst = 0.0
    lim = np.array([[limit.m00, limit.m01], [limit.m10, limit.m11]])
    for i in range(grid):
        theta = i / grid
        g1 = evaluate_generator(spec, theta)
        g2 = evaluate_generator(spec, (theta + freq) % 1.0)
        prod = g2 @ g1
        arr = np.array([[prod.m00, prod.m01], [prod.m10, prod.m11]])
        acc += arr
        worst = max(worst, float(np.abs(arr - lim).sum()))
    acc /= grid
    mean = Mat2(acc[0, 0], acc[0, 1], acc[1, 0], acc[1, 1])
    return mean, worst
