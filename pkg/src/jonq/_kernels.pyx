# cython: language_level=3
"""Compiled kernels: renormalized cocycle products and long map orbits.

API mirror of ``_kernels_py``; selected at import time by ``backend``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, log, sqrt, M_PI

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double complex cexp(double complex)
    double cabs(double complex)

cnp.import_array()

KIND_JONQ_A = 0
KIND_JONQ_B = 1
KIND_BTILDE = 2
KIND_SCHRODINGER = 3
KIND_DIAGONAL = 4
KIND_CONSTANT = 5

MAP_F = 0
MAP_G = 1
MAP_F2 = 2

COMPILED = True


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def cocycle_sums(int kind, double complex alpha, double rho, double freq,
                 double energy, potential, cmat, thetas, int n):
    """Renormalized n-step cocycle products for each starting phase.

    Returns (s_half, s_full, p_half, p_full); the product equals
    exp(s) * p with p Frobenius-normalized, *_half recorded at n // 2.
    """
    cdef cnp.ndarray[double, ndim=1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] pot
    if potential is None:
        pot = np.zeros(0, dtype=np.float64)
    else:
        pot = np.ascontiguousarray(potential, dtype=np.float64)
    cdef double complex c00 = 0, c01 = 0, c10 = 0, c11 = 0
    if cmat is not None:
        c00, c01, c10, c11 = cmat[0], cmat[1], cmat[2], cmat[3]

    cdef int m = th.shape[0]
    cdef int half = n // 2
    cdef cnp.ndarray[double, ndim=1] s_half = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] s_full = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[double complex, ndim=3] p_half = np.empty((m, 2, 2), dtype=np.complex128)
    cdef cnp.ndarray[double complex, ndim=3] p_full = np.empty((m, 2, 2), dtype=np.complex128)

    cdef int npot = pot.shape[0]
    cdef double complex sqrt_alpha = csqrt(alpha)
    cdef double log_sqrt2 = 0.5 * log(2.0)
    cdef double inv_sqrt2 = 1.0 / sqrt(2.0)

    cdef int i, k, j
    cdef double tk, s, nrm, sh
    cdef double complex p00, p01, p10, p11, g00, g01, g10, g11
    cdef double complex y, y2, sb, vpot, pw, q00, q01, q10, q11
    cdef double complex h00, h01, h10, h11
    cdef double two_pi = 2.0 * M_PI

    for i in range(m):
        p00 = 1; p01 = 0; p10 = 0; p11 = 1
        s = 0.0
        sh = log_sqrt2
        h00 = inv_sqrt2; h01 = 0; h10 = 0; h11 = inv_sqrt2
        for k in range(n):
            if kind == KIND_CONSTANT:
                g00 = c00; g01 = c01; g10 = c10; g11 = c11
            else:
                tk = th[i] + k * freq
                tk = tk - floor(tk)
                y = rho * cexp(two_pi * tk * 1j)
                if kind == KIND_JONQ_A:
                    g00 = alpha; g01 = y; g10 = 1; g11 = 1
                elif kind == KIND_JONQ_B:
                    y2 = y * y
                    g00 = alpha; g01 = y2; g10 = 1; g11 = 1
                elif kind == KIND_BTILDE:
                    y2 = y * y
                    if rho < 1.0:
                        sb = sqrt_alpha * csqrt(1.0 - y2 / alpha)
                    else:
                        sb = 1j * y * csqrt(1.0 - alpha / y2)
                    g00 = alpha / sb; g01 = y2 / sb; g10 = 1.0 / sb; g11 = g10
                elif kind == KIND_SCHRODINGER:
                    vpot = 0
                    if npot > 0:
                        vpot = pot[0]
                        pw = 1
                        for j in range(1, npot):
                            pw = pw * y
                            vpot = vpot + pot[j] * 0.5 * (pw + 1.0 / pw)
                    g00 = energy - vpot; g01 = -1; g10 = 1; g11 = 0
                else:  # KIND_DIAGONAL
                    g00 = y; g01 = 0; g10 = 0; g11 = 1.0 / y
            q00 = g00 * p00 + g01 * p10
            q01 = g00 * p01 + g01 * p11
            q10 = g10 * p00 + g11 * p10
            q11 = g10 * p01 + g11 * p11
            nrm = sqrt(_abs2(q00) + _abs2(q01) + _abs2(q10) + _abs2(q11))
            s += log(nrm)
            p00 = q00 / nrm; p01 = q01 / nrm; p10 = q10 / nrm; p11 = q11 / nrm
            if k + 1 == half:
                sh = s
                h00 = p00; h01 = p01; h10 = p10; h11 = p11
        s_half[i] = sh
        s_full[i] = s
        p_half[i, 0, 0] = h00; p_half[i, 0, 1] = h01
        p_half[i, 1, 0] = h10; p_half[i, 1, 1] = h11
        p_full[i, 0, 0] = p00; p_full[i, 0, 1] = p01
        p_full[i, 1, 0] = p10; p_full[i, 1, 1] = p11
    return s_half, s_full, p_half, p_full


def orbit_points(int map_code, double complex alpha, double complex beta,
                 double complex x_num, double complex x_den, double complex y0,
                 int n):
    """Iterate the map n times in projective x-coordinates (u : v).

    Returns (u, v, y, count); count < n + 1 only on an exact indeterminacy
    hit (u = v = 0).
    """
    cdef cnp.ndarray[double complex, ndim=1] u = np.empty(n + 1, dtype=np.complex128)
    cdef cnp.ndarray[double complex, ndim=1] v = np.empty(n + 1, dtype=np.complex128)
    cdef cnp.ndarray[double complex, ndim=1] ys = np.empty(n + 1, dtype=np.complex128)
    cdef double complex cu = x_num, cv = x_den, cy = y0
    cdef double complex nu, nv, ny
    cdef double nm, au, av
    cdef int k, sub, count
    cdef int substeps = 2 if map_code == MAP_F2 else 1

    nm = max(cabs(cu), cabs(cv))
    if nm > 0:
        cu /= nm
        cv /= nm
    u[0] = cu; v[0] = cv; ys[0] = cy
    count = 1
    for k in range(n):
        for sub in range(substeps):
            if map_code == MAP_G:
                nu = (1.0 + cy) * cu + (alpha + 1.0) * cy * cv
                nv = (alpha + beta) * cu + (beta + alpha * alpha * cy) * cv
                ny = cy / (beta * beta)
            else:
                nu = alpha * cu + cy * cv
                nv = cu + cv
                ny = beta * cy
            au = cabs(nu); av = cabs(nv)
            nm = au if au > av else av
            if nm == 0.0:
                return u[:count], v[:count], ys[:count], count
            cu = nu / nm; cv = nv / nm; cy = ny
        u[count] = cu; v[count] = cv; ys[count] = cy
        count += 1
    return u, v, ys, count
