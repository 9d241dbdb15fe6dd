"""Radius sweeps of the Lyapunov exponent, finite-difference acceleration,
integer-quantization checks, segmented piecewise-affine fitting, and
regularity / uniform-hyperbolicity / energy-regime classification.

Throughout, s = ln(rho) is the sweep variable.  The acceleration is the
negated left s-derivative of the exponent: complexifying the additive
phase by +i*eps multiplies the radius by exp(-2*pi*eps), and the 2*pi
factors cancel in the difference quotient, so this convention reproduces
the eps -> 0+ limit (a jump of the max(0, s) term contributes -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cocycle import CocycleSpec, LyapunovEstimate, lyapunov, lyapunov_phase_values
from .errors import NotUnimodular, SideCrossing

DEFAULT_H = 0.02


@dataclass(frozen=True)
class LyapunovProfile:
    """Exponent estimates over an increasing grid of s = ln(rho), all
    produced with identical (n, samples, seed)."""

    points: tuple  # of (s, LyapunovEstimate)
    spec_template: CocycleSpec

    @property
    def s_values(self) -> np.ndarray:
        return np.array([s for s, _ in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for _, e in self.points])

    @property
    def stderrs(self) -> np.ndarray:
        return np.array([e.stderr for _, e in self.points])


@dataclass(frozen=True)
class AffineFit:
    """Segmented least-squares fit; adjacent segments share a grid junction."""

    breakpoints: tuple
    slopes: tuple
    intercepts: tuple
    max_residual: float


@dataclass(frozen=True)
class AccelerationEstimate:
    omega: float
    nearest_integer: int
    distance: float
    h: float
    stderr: float


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    left_slope: float
    right_slope: float
    slope_error: float


@dataclass(frozen=True)
class UHResult:
    verdict: str  # "UH" | "NotUH" | "Undetermined"
    estimate: LyapunovEstimate
    regularity: RegularityResult | None


@dataclass(frozen=True)
class RegimeResult:
    verdict: str  # "Supercritical" | "SubcriticalLike" | "Unresolved"
    circle_estimate: LyapunovEstimate
    band_estimates: tuple


@dataclass(frozen=True)
class QuantizationReport:
    passed: bool
    tol: float
    failures: tuple  # of (index, AccelerationEstimate)


def lyapunov_profile(
    spec: CocycleSpec, s_grid, n: int, samples: int, seed: int
) -> LyapunovProfile:
    """One Lyapunov estimate per grid point, with rho = exp(s)."""
    s_grid = [float(s) for s in s_grid]
    if any(b <= a for a, b in zip(s_grid, s_grid[1:])):
        raise ValueError("s_grid must be strictly increasing")
    points = []
    for s in s_grid:
        est = lyapunov(spec.with_rho(math.exp(s)), n, samples, seed)
        points.append((s, est))
    return LyapunovProfile(points=tuple(points), spec_template=spec)


def _phase_means(spec, s, n, samples, seed):
    _, vals = lyapunov_phase_values(spec.with_rho(math.exp(s)), n, samples, seed)
    return vals


def _paired_slope(spec, s_lo, s_hi, n, samples, seed):
    """Per-phase paired finite-difference slope between two radii.

    Pairing the same phase set at both radii makes per-trajectory noise
    cancel in the difference, which is what gives usable error bars.
    """
    hi = _phase_means(spec, s_hi, n, samples, seed)
    lo = _phase_means(spec, s_lo, n, samples, seed)
    d = (hi - lo) / (s_hi - s_lo)
    mean = float(np.mean(d))
    stderr = float(np.std(d, ddof=1) / math.sqrt(len(d))) if len(d) > 1 else 0.0
    return mean, stderr


def _guard_sides(spec, s, h):
    # btilde is undefined at rho = 1 and its profile may be non-smooth
    # there; both evaluation radii must sit on one side
    if spec.kind == "btilde":
        for probe in (s - h, s + h, s):
            if probe == 0.0 or (probe > 0) != (s > 0):
                raise SideCrossing(
                    f"window [{s - h:.4f}, {s + h:.4f}] straddles ln rho = 0"
                )


def acceleration_at(
    spec: CocycleSpec,
    rho: float,
    h: float = DEFAULT_H,
    n: int = 20000,
    samples: int = 64,
    seed: int = 0,
) -> AccelerationEstimate:
    """Acceleration omega = -(L(s) - L(s - h)) / h at s = ln(rho).

    Uses steps h and h/2; when they disagree by more than 0.02 the
    Richardson-extrapolated value 2*omega(h/2) - omega(h) is reported.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    s = math.log(rho)
    _guard_sides(spec, s, h)
    slope_h, err_h = _paired_slope(spec, s - h, s, n, samples, seed)
    slope_h2, err_h2 = _paired_slope(spec, s - h / 2, s, n, samples, seed)
    omega_h, omega_h2 = -slope_h, -slope_h2
    if abs(omega_h - omega_h2) > 0.02:
        omega, h_used, err = 2 * omega_h2 - omega_h, h / 2, err_h + 2 * err_h2
    else:
        omega, h_used, err = omega_h, h, err_h
    nearest = int(round(omega))
    return AccelerationEstimate(
        omega=omega,
        nearest_integer=nearest,
        distance=abs(omega - nearest),
        h=h_used,
        stderr=err,
    )


def quantization_check(estimates, tol: float) -> QuantizationReport:
    """Pass iff every acceleration estimate is within tol of an integer."""
    if not 0.0 < tol < 0.5:
        raise ValueError("tol must lie in (0, 0.5)")
    failures = tuple(
        (i, est) for i, est in enumerate(estimates) if est.distance > tol
    )
    return QuantizationReport(passed=not failures, tol=tol, failures=failures)


def _segment_cost(s, v):
    """(SSE, slope, intercept) of the least-squares line through the points."""
    m = len(s)
    if m == 1:
        return 0.0, 0.0, v[0]
    sm = s.mean()
    vm = v.mean()
    den = ((s - sm) ** 2).sum()
    slope = ((s - sm) * (v - vm)).sum() / den if den > 0 else 0.0
    inter = vm - slope * sm
    resid = v - (slope * s + inter)
    return float((resid**2).sum()), float(slope), float(inter)


def piecewise_affine_fit(
    profile: LyapunovProfile, penalty: float | None = None, max_segments: int = 6
) -> AffineFit:
    """Segmented affine fit with grid-restricted breakpoints.

    Exact dynamic program over junction positions minimizing
    total SSE + penalty * (segment count); the default penalty is the
    BIC-style 2 * mean(stderr^2) * ln(#points).  Adjacent segments share
    the junction grid point, whose s-value is the reported breakpoint.
    """
    s = profile.s_values
    v = profile.values
    p = len(s)
    if p < 5:
        raise ValueError("need at least 5 profile points")
    if penalty is None:
        se = profile.stderrs
        penalty = 2.0 * float(np.mean(se**2)) * math.log(p)
        penalty = max(penalty, 1e-12)

    cost = {}
    for i in range(p):
        for j in range(i + 1, p):
            cost[(i, j)] = _segment_cost(s[i : j + 1], v[i : j + 1])

    kmax = min(max_segments, p - 1)
    # best[j][k]: minimal SSE covering grid[0..j] with k segments ending at j
    inf = float("inf")
    best = [[inf] * (kmax + 1) for _ in range(p)]
    back = [[-1] * (kmax + 1) for _ in range(p)]
    for j in range(1, p):
        best[j][1] = cost[(0, j)][0]
        back[j][1] = 0
    for k in range(2, kmax + 1):
        for j in range(k, p):
            for i in range(k - 1, j):
                c = best[i][k - 1] + cost[(i, j)][0]
                if c < best[j][k]:
                    best[j][k] = c
                    back[j][k] = i
    k_best, total_best = 1, best[p - 1][1] + penalty
    for k in range(2, kmax + 1):
        total = best[p - 1][k] + penalty * k
        if total < total_best:
            k_best, total_best = k, total

    junctions = [p - 1]
    k = k_best
    while k > 0:
        junctions.append(back[junctions[-1]][k])
        k -= 1
    junctions = junctions[::-1]  # 0 = j0 < j1 < ... < jK = p-1

    slopes, inters = [], []
    fit = np.empty(p)
    for a, b in zip(junctions, junctions[1:]):
        _, slope, inter = cost[(a, b)]
        slopes.append(slope)
        inters.append(inter)
        fit[a : b + 1] = slope * s[a : b + 1] + inter
    return AffineFit(
        breakpoints=tuple(float(s[j]) for j in junctions[1:-1]),
        slopes=tuple(slopes),
        intercepts=tuple(inters),
        max_residual=float(np.max(np.abs(fit - v))),
    )


def regularity_check(
    spec: CocycleSpec,
    rho: float,
    h: float = DEFAULT_H,
    n: int = 20000,
    samples: int = 64,
    seed: int = 0,
) -> RegularityResult:
    """Compare one-sided s-slopes of the exponent at s = ln(rho).

    Regular iff they agree within twice the estimator error, which
    combines the paired-sample standard errors, the h vs h/2 structural
    differences, and an O(h) discretization allowance.
    """
    s = math.log(rho)
    _guard_sides(spec, s, h)
    left, le = _paired_slope(spec, s - h, s, n, samples, seed)
    left2, _ = _paired_slope(spec, s - h / 2, s, n, samples, seed)
    right, re_ = _paired_slope(spec, s, s + h, n, samples, seed)
    right2, _ = _paired_slope(spec, s, s + h / 2, n, samples, seed)
    err = le + re_ + abs(left - left2) + abs(right - right2) + h / 2
    return RegularityResult(
        regular=abs(left - right) <= 2.0 * err,
        left_slope=left,
        right_slope=right,
        slope_error=err,
    )


_DET_ONE_KINDS = {"btilde", "diagonal_power", "schrodinger"}


def _require_unimodular(spec: CocycleSpec):
    if spec.kind in _DET_ONE_KINDS:
        return
    if spec.kind == "constant" and abs(spec.matrix.det() - 1.0) <= 1e-9:
        return
    raise NotUnimodular(f"kind {spec.kind!r} does not have det = 1")


def uh_classify(
    spec: CocycleSpec,
    rho: float,
    h: float = DEFAULT_H,
    n: int = 20000,
    samples: int = 64,
    seed: int = 0,
) -> UHResult:
    """Numeric uniform-hyperbolicity verdict for det-1 families.

    UH requires a positive exponent at 3x resolution plus a Regular
    profile; an exponent at zero within resolution is NotUH; anything else
    is Undetermined.
    """
    _require_unimodular(spec)
    est = lyapunov(spec.with_rho(rho), n, samples, seed)
    if est.value <= 3.0 * est.total_error:
        return UHResult(verdict="NotUH", estimate=est, regularity=None)
    reg = regularity_check(spec, rho, h, n, samples, seed)
    if reg.regular:
        return UHResult(verdict="UH", estimate=est, regularity=reg)
    return UHResult(verdict="Undetermined", estimate=est, regularity=reg)


def regime_classify(
    spec: CocycleSpec,
    band_eps: float = 0.05,
    n: int = 20000,
    samples: int = 64,
    seed: int = 0,
    band_points: int = 5,
) -> RegimeResult:
    """Energy-regime proxy for a Schrodinger-type spec.

    Supercritical iff the exponent on the unit circle exceeds 3x its
    resolution; SubcriticalLike iff the exponent is zero within resolution
    at every sampled radius exp(s), |s| <= band_eps (a numeric proxy for a
    uniform subexponential band bound).  The critical boundary case is
    never claimed.
    """
    if spec.kind != "schrodinger":
        raise ValueError("regime classification needs a schrodinger spec")
    circle = lyapunov(spec.with_rho(1.0), n, samples, seed)
    if circle.value > 3.0 * circle.total_error:
        return RegimeResult(
            verdict="Supercritical", circle_estimate=circle, band_estimates=()
        )
    band = []
    subcritical = True
    for s in np.linspace(-band_eps, band_eps, band_points):
        est = lyapunov(spec.with_rho(math.exp(float(s))), n, samples, seed)
        band.append((float(s), est))
        if est.value > 3.0 * est.total_error:
            subcritical = False
    return RegimeResult(
        verdict="SubcriticalLike" if subcritical else "Unresolved",
        circle_estimate=circle,
        band_estimates=tuple(band),
    )
