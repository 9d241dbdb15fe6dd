"""The two-parameter family of fibered birational maps on P1 x C:

    f(x, y) = ((alpha x + y) / (x + 1), beta y),   |alpha| = |beta| = 1,

its orbits (with indeterminacy tracking), the matrix/map correspondence,
the semiconjugacy from the squared-variable model, the inverted square map
G = sigma f^2 sigma with sigma = (1/x, 1/y), fixed points, and rotation
domain (orbit-closure rank) classification by box counting.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    INFINITY,
    Mat2,
    check_nonresonant,
    chordal,
    is_infinity,
    projective_action,
)
from .backend import kernels
from .cocycle import CocycleSpec, evaluate_generator
from .errors import IndeterminateAction, IndeterminatePoint, InsufficientPoints


@dataclass(frozen=True)
class MapParams:
    """Unit-modulus parameter pair; ``freq`` is the angle of beta in (0, 1)
    and fixes the square root beta^(1/2) = exp(i pi freq) once."""

    alpha: complex
    beta: complex
    freq: float

    def __post_init__(self):
        if abs(abs(self.alpha) - 1.0) > 1e-12 or abs(abs(self.beta) - 1.0) > 1e-12:
            raise ValueError("|alpha| and |beta| must equal 1 to 1e-12")
        check_nonresonant(self.freq)
        if abs(cmath.exp(2j * math.pi * self.freq) - self.beta) > 1e-9:
            raise ValueError("freq must be the angle of beta")

    @staticmethod
    def from_angles(alpha_angle: float, freq: float) -> "MapParams":
        return MapParams(
            alpha=cmath.exp(2j * math.pi * alpha_angle),
            beta=cmath.exp(2j * math.pi * freq),
            freq=freq % 1.0,
        )

    @property
    def beta_sqrt(self) -> complex:
        return cmath.exp(1j * math.pi * self.freq)


@dataclass(frozen=True)
class PointP1xC:
    """Point with projective first coordinate and nonzero fiber coordinate."""

    x: object  # complex or INFINITY
    y: complex

    def __post_init__(self):
        if self.y == 0:
            raise ValueError("orbit points must have y != 0")


@dataclass(frozen=True)
class OrbitRecord:
    points: tuple
    indeterminacy_hits: tuple  # of (step, distance)
    escaped: bool  # some x passed through infinity (legal, tracked)


@dataclass(frozen=True)
class ClosureClassification:
    rank: int
    slopes: tuple  # per-octave log2 box-count ratios over the full ladder
    confidence: float
    window: tuple  # surviving octave indices k (scale 2^-k)
    counts: tuple  # box counts N(2^-k) over the full ladder


def cocycle_matrix(p: MapParams, y: complex) -> Mat2:
    """The x-fiber Moebius matrix [[alpha, y], [1, 1]] of the map."""
    return Mat2(p.alpha, y, 1.0 + 0j, 1.0 + 0j)


def apply_f(p: MapParams, q: PointP1xC) -> PointP1xC:
    """One step of the map; exact evaluation at (-1, alpha) raises
    :class:`IndeterminatePoint` (the base point of the family)."""
    try:
        x_next = projective_action(cocycle_matrix(p, q.y), q.x)
    except IndeterminateAction:
        raise IndeterminatePoint("f is indeterminate exactly at (-1, alpha)")
    return PointP1xC(x=x_next, y=p.beta * q.y)


def _indeterminacy_distance(x, y, alpha: complex) -> float:
    return math.hypot(chordal(x, -1.0 + 0j), abs(y - alpha))


def orbit(p: MapParams, q: PointP1xC, n: int, dist_tol: float = 1e-8) -> OrbitRecord:
    """n-step orbit with indeterminacy-proximity logging.

    Close approaches to (-1, alpha) are recorded, never fatal; an exact
    hit truncates the orbit at the step where it happened.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    points = [q]
    hits = []
    escaped = False
    cur = q
    for k in range(n):
        d = _indeterminacy_distance(cur.x, cur.y, p.alpha)
        if d < dist_tol:
            hits.append((k, d))
        try:
            cur = apply_f(p, cur)
        except IndeterminatePoint:
            if not (hits and hits[-1] == (k, 0.0)):
                hits.append((k, 0.0))
            break
        if is_infinity(cur.x):
            escaped = True
        points.append(cur)
    return OrbitRecord(points=tuple(points), indeterminacy_hits=tuple(hits), escaped=escaped)


def matrix_orbit_equivalence(p: MapParams, q: PointP1xC, n: int) -> float:
    """Max chordal deviation between the orbit's x-coordinates and the
    projective action of the renormalized matrix products on x0.

    The matrix products are renormalized every step; scalars cancel in the
    projective action, so the comparison is overflow-free.
    """
    rho = abs(q.y)
    theta0 = (cmath.phase(q.y) / (2.0 * math.pi)) % 1.0
    spec = CocycleSpec(kind="jonquieres_a", alpha=p.alpha, rho=rho, freq=p.freq)
    cur = q
    prod = Mat2.identity()
    worst = 0.0
    for k in range(n):
        cur = apply_f(p, cur)
        g = evaluate_generator(spec, (theta0 + k * p.freq) % 1.0)
        prod = g @ prod
        prod = prod.scaled(1.0 / prod.frobenius())
        x_mat = projective_action(prod, q.x)
        worst = max(worst, chordal(cur.x, x_mat))
    return worst


def semiconjugacy_check(p: MapParams, q: PointP1xC, n: int, other_root: bool = False) -> float:
    """Deviation of pi(g^k) from f^k(pi) for k <= n, where pi(x, y) =
    (x, y^2) and g(x, y) = ((alpha x + y^2)/(x + 1), beta^(1/2) y).

    ``other_root`` exercises the second square root -beta^(1/2), which
    semiconjugates equally.  Chordal metric in x, absolute in y.
    """
    gamma = -p.beta_sqrt if other_root else p.beta_sqrt
    beta = gamma * gamma
    gx, gy = q.x, q.y
    try:
        fq = PointP1xC(x=q.x, y=q.y * q.y)
    except ValueError:
        raise ValueError("start point needs y != 0")
    worst = 0.0
    fp = MapParams(alpha=p.alpha, beta=beta, freq=p.freq)
    for _ in range(n):
        # one g step in projective x-coordinates
        if is_infinity(gx):
            num, den = p.alpha, 1.0 + 0j
        else:
            num, den = p.alpha * gx + gy * gy, gx + 1.0
        gx = INFINITY if den == 0 else num / den
        gy = gamma * gy
        fq = apply_f(fp, fq)
        worst = max(worst, chordal(gx, fq.x) + abs(gy * gy - fq.y))
    return worst


@dataclass(frozen=True)
class InvertedSquareMap:
    """G = sigma f^2 sigma in closed form:

        G(x, y) = ((x(1 + y) + (alpha + 1) y) /
                   (beta + (alpha + beta) x + alpha^2 y),  y / beta^2)

    The constructor checks the composition identity against a direct
    sigma f f sigma evaluation at 100 deterministic sample points and the
    Jacobian structure at the origin (triangular, diagonal (1/beta,
    1/beta^2))."""

    params: MapParams

    def __post_init__(self):
        p = self.params
        worst = 0.0
        for i in range(100):
            x = 0.5 * cmath.exp(2j * math.pi * ((i * 0.6180339887498949) % 1.0)) + 0.1
            y = 0.4 * cmath.exp(2j * math.pi * ((i * 0.4142135623730951) % 1.0)) + 0.05
            gx, gy = self.apply(x, y)
            ref = self._via_composition(x, y)
            if ref is None:
                continue
            worst = max(worst, abs(gx - ref[0]) + abs(gy - ref[1]))
        if worst > 1e-12:
            raise ArithmeticError(
                f"inverted square map fails composition identity ({worst:.3e})"
            )
        jac = self.jacobian_origin()
        lead = abs(jac[0][0] - 1.0 / p.beta) + abs(jac[1][1] - 1.0 / p.beta**2)
        if lead > 1e-10 or abs(jac[1][0]) > 1e-10:
            raise ArithmeticError(
                "origin Jacobian is not upper triangular with diagonal "
                "(1/beta, 1/beta^2)"
            )

    def _via_composition(self, x: complex, y: complex):
        p = self.params
        try:
            q = PointP1xC(x=1.0 / x, y=1.0 / y)
            q = apply_f(p, apply_f(p, q))
        except (ZeroDivisionError, ValueError, IndeterminatePoint):
            return None
        if is_infinity(q.x) or q.x == 0:
            return None
        return 1.0 / q.x, 1.0 / q.y

    def apply(self, x: complex, y: complex):
        p = self.params
        num = x * (1.0 + y) + (p.alpha + 1.0) * y
        den = p.beta + (p.alpha + p.beta) * x + p.alpha**2 * y
        return num / den, y / p.beta**2

    def jacobian_origin(self):
        """Exact DG(0, 0): [[1/beta, (alpha+1)/beta], [0, 1/beta^2]]."""
        p = self.params
        return (
            (1.0 / p.beta, (p.alpha + 1.0) / p.beta),
            (0j, 1.0 / p.beta**2),
        )

    def jacobian_origin_fd(self, step: float = 1e-6):
        """Finite-difference Jacobian at the origin (cross-check oracle)."""
        g0 = self.apply(0j, 0j)
        gx = self.apply(step + 0j, 0j)
        gy = self.apply(0j, step + 0j)
        return (
            ((gx[0] - g0[0]) / step, (gy[0] - g0[0]) / step),
            ((gx[1] - g0[1]) / step, (gy[1] - g0[1]) / step),
        )


def inverted_square_map(p: MapParams) -> InvertedSquareMap:
    return InvertedSquareMap(params=p)


@dataclass(frozen=True)
class FixedPoint:
    x: object
    y: complex
    which_map: str  # "f" or "G"
    residual: float


def fixed_points(p: MapParams) -> tuple:
    """The three verified fixed points: (0,0) and (alpha-1, 0) of f, and the
    origin of G (the image under inversion of f^2's fixed point at
    infinity).  Residuals are checked to 1e-12."""
    out = []
    mat = cocycle_matrix(p, 0j)
    for x0 in (0j, p.alpha - 1.0):
        x1 = projective_action(mat, x0)
        res = chordal(x1, x0)  # y = 0 fiber is preserved exactly
        out.append(FixedPoint(x=x0, y=0j, which_map="f", residual=res))
    g = inverted_square_map(p)
    gx, gy = g.apply(0j, 0j)
    out.append(FixedPoint(x=0j, y=0j, which_map="G", residual=abs(gx) + abs(gy)))
    for fp in out:
        if fp.residual > 1e-12:
            raise ArithmeticError(f"fixed point {fp} failed verification")
    return tuple(out)


_MAP_CODES = {"f": kernels.MAP_F, "g": kernels.MAP_G, "f2": kernels.MAP_F2}


def orbit_coordinates(
    p: MapParams, q: PointP1xC, n: int, which: str = "f"
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Raw orbit arrays (u, v, y) in projective x-coordinates, x = u / v."""
    code = _MAP_CODES[which]
    x = q.x
    if is_infinity(x):
        num, den = 1.0 + 0j, 0j
    else:
        num, den = complex(x), 1.0 + 0j
    u, v, y, _count = kernels.orbit_points(code, p.alpha, p.beta, num, den, q.y, int(n))
    return u, v, y


def boxcount_rank(x: np.ndarray, y: np.ndarray, max_octave: int = 16) -> ClosureClassification:
    """Box-counting rank of a point cloud given by two complex coordinate
    arrays, in normalized R^4.

    The four real coordinates are each rescaled to unit diameter; occupied
    boxes are counted on the dyadic ladder eps_k = 2^-k.  The ladder is
    sampled while the points still average >= 1.05 per occupied box; the
    three coarsest sampled octaves (curvature-biased) and the two finest
    (sampling-limited) are discarded, and the rank is the rounded median
    slope over the surviving window.
    """
    pts = np.stack([x.real, x.imag, y.real, y.imag], axis=1)
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    span[span == 0] = 1.0
    unit = (pts - lo) / span
    npts = len(unit)

    counts = []
    ladder = []
    for k in range(max_octave + 1):
        cells = 1 << k
        idx = np.minimum((unit * cells).astype(np.int64), cells - 1)
        nboxes = len(np.unique(idx, axis=0))
        if k > 0 and 1.05 * nboxes > npts:
            break
        counts.append(nboxes)
        ladder.append(k)
    counts_arr = np.array(counts, dtype=float)
    slopes = tuple(float(t) for t in np.log2(counts_arr[1:] / counts_arr[:-1]))

    window = ladder[3:-2]
    if len(window) < 3:
        raise InsufficientPoints(
            f"only {len(window)} surviving octaves (ladder {ladder})"
        )
    w_lo, w_hi = window[0], window[-1]
    if counts[w_hi] < 10 * counts[w_lo]:
        raise InsufficientPoints("surviving window spans < 10x box-count growth")
    window_slopes = [slopes[k] for k in range(w_lo, w_hi)]
    med = float(np.median(window_slopes))
    rank = int(round(med))
    confidence = max(0.0, 1.0 - abs(med - rank))
    return ClosureClassification(
        rank=rank,
        slopes=slopes,
        confidence=confidence,
        window=tuple(window),
        counts=tuple(int(c) for c in counts),
    )


def classify_orbit_closure(
    p: MapParams,
    q: PointP1xC,
    n: int,
    which: str = "f",
    max_octave: int = 16,
) -> ClosureClassification:
    """Box-counting rank of the orbit closure (see :func:`boxcount_rank`).

    Near the origin the map is linearizable, so an orbit of the map itself
    should classify as rank 2 (torus) and an orbit of the inverted square
    map as rank 1 (circle).
    """
    if n < 1000:
        raise ValueError("closure classification needs a long orbit")
    u, v, y = orbit_coordinates(p, q, n, which)
    finite = np.abs(v) > 1e-300
    return boxcount_rank(u[finite] / v[finite], y[finite], max_octave=max_octave)
