"""Pure-Python (NumPy) kernels: fallback used when the compiled extension
is unavailable.  Must stay behaviorally identical to ``_kernels.pyx``.

Two hot paths live here: renormalized cocycle products batched over phase
samples, and long map orbits in projective x-coordinates.
"""

import numpy as np

KIND_JONQ_A = 0
KIND_JONQ_B = 1
KIND_BTILDE = 2
KIND_SCHRODINGER = 3
KIND_DIAGONAL = 4
KIND_CONSTANT = 5

MAP_F = 0
MAP_G = 1
MAP_F2 = 2

COMPILED = False


def _potential_values(y, coeffs):
    # v(y) = a0 + sum_k a_k * (y**k + y**-k) / 2, the analytic extension of
    # the cosine polynomial off the unit circle.
    v = np.zeros_like(y)
    if len(coeffs):
        v += coeffs[0]
        p = np.ones_like(y)
        for k in range(1, len(coeffs)):
            p = p * y
            v += coeffs[k] * 0.5 * (p + 1.0 / p)
    return v


def _generators(kind, alpha, rho, freq, energy, potential, cmat, thetas, k):
    """Generator matrices at rotation step k for every phase sample."""
    m = len(thetas)
    g = np.empty((m, 2, 2), dtype=np.complex128)
    if kind == KIND_CONSTANT:
        g[:, 0, 0] = cmat[0]
        g[:, 0, 1] = cmat[1]
        g[:, 1, 0] = cmat[2]
        g[:, 1, 1] = cmat[3]
        return g
    tk = np.mod(thetas + k * freq, 1.0)
    y = rho * np.exp(2j * np.pi * tk)
    if kind == KIND_JONQ_A:
        g[:, 0, 0] = alpha
        g[:, 0, 1] = y
        g[:, 1, 0] = 1.0
        g[:, 1, 1] = 1.0
    elif kind == KIND_JONQ_B:
        g[:, 0, 0] = alpha
        g[:, 0, 1] = y * y
        g[:, 1, 0] = 1.0
        g[:, 1, 1] = 1.0
    elif kind == KIND_BTILDE:
        if rho < 1.0:
            s = np.sqrt(complex(alpha)) * np.sqrt(1.0 - y * y / alpha)
        else:
            s = 1j * y * np.sqrt(1.0 - alpha / (y * y))
        g[:, 0, 0] = alpha / s
        g[:, 0, 1] = y * y / s
        g[:, 1, 0] = 1.0 / s
        g[:, 1, 1] = 1.0 / s
    elif kind == KIND_SCHRODINGER:
        v = _potential_values(y, potential)
        g[:, 0, 0] = energy - v
        g[:, 0, 1] = -1.0
        g[:, 1, 0] = 1.0
        g[:, 1, 1] = 0.0
    elif kind == KIND_DIAGONAL:
        g[:, 0, 0] = y
        g[:, 0, 1] = 0.0
        g[:, 1, 0] = 0.0
        g[:, 1, 1] = 1.0 / y
    else:
        raise ValueError(f"unknown kind code {kind}")
    return g


def cocycle_sums(kind, alpha, rho, freq, energy, potential, cmat, thetas, n):
    """Renormalized n-step cocycle products for each starting phase.

    Returns ``(s_half, s_full, p_half, p_full)`` where the product equals
    exp(s) * p with p Frobenius-normalized; the *_half values are recorded
    at step n // 2.
    """
    thetas = np.ascontiguousarray(thetas, dtype=np.float64)
    m = len(thetas)
    half = n // 2
    p = np.zeros((m, 2, 2), dtype=np.complex128)
    p[:, 0, 0] = 1.0
    p[:, 1, 1] = 1.0
    s = np.zeros(m)
    log_sqrt2 = 0.5 * np.log(2.0)
    s_half = np.full(m, log_sqrt2)
    p_half = p.copy() / np.sqrt(2.0)
    for k in range(n):
        g = _generators(kind, alpha, rho, freq, energy, potential, cmat, thetas, k)
        p = np.einsum("mij,mjk->mik", g, p)
        nrm = np.sqrt((np.abs(p) ** 2).sum(axis=(1, 2)))
        s += np.log(nrm)
        p /= nrm[:, None, None]
        if k + 1 == half:
            s_half = s.copy()
            p_half = p.copy()
    return s_half, s, p_half, p


def orbit_points(map_code, alpha, beta, x_num, x_den, y0, n):
    """Iterate the map n times in projective x-coordinates (u : v).

    The pair is renormalized by the larger modulus each step, so a passage
    through infinity is an ordinary event.  Returns ``(u, v, y, count)``;
    count < n + 1 only when an exact indeterminacy hit (u = v = 0)
    truncated the orbit.
    """
    u = np.empty(n + 1, dtype=np.complex128)
    v = np.empty(n + 1, dtype=np.complex128)
    ys = np.empty(n + 1, dtype=np.complex128)
    a = complex(alpha)
    b = complex(beta)
    cu, cv, cy = complex(x_num), complex(x_den), complex(y0)
    nm = max(abs(cu), abs(cv))
    if nm > 0:
        cu /= nm
        cv /= nm
    u[0], v[0], ys[0] = cu, cv, cy
    count = 1
    substeps = 2 if map_code == MAP_F2 else 1
    for k in range(n):
        for _ in range(substeps):
            if map_code == MAP_G:
                nu = (1.0 + cy) * cu + (a + 1.0) * cy * cv
                nv = (a + b) * cu + (b + a * a * cy) * cv
                ny = cy / (b * b)
            else:
                nu = a * cu + cy * cv
                nv = cu + cv
                ny = b * cy
            nm = max(abs(nu), abs(nv))
            if nm == 0.0:
                return u[:count], v[:count], ys[:count], count
            cu, cv, cy = nu / nm, nv / nm, ny
        u[count], v[count], ys[count] = cu, cv, cy
        count += 1
    return u, v, ys, count
