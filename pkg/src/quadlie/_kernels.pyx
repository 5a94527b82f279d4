# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: cubic roots, small-matrix Taylor exponential, 3x3 adjugate.

Same contracts as ``_kernels_py``; selected at import by ``quadlie._backend``.
"""
import numpy as np

from libc.math cimport ceil, log2, sqrt, fabs, cos, sin, atan2, pow

cdef extern from "complex.h":
    double complex csqrt(double complex)
    double cabs(double complex)
    double complex conj(double complex)

DEF TAYLOR_DEGREE = 18


cdef inline double complex _cbrt(double complex z):
    if z == 0:
        return 0
    cdef double r = cabs(z)
    cdef double phi = atan2(z.imag, z.real)
    cdef double rr = pow(r, 1.0 / 3.0)
    return rr * cos(phi / 3.0) + 1j * rr * sin(phi / 3.0)


cdef inline double complex _polish(double complex s, double complex c2,
                                   double complex c1, double complex c0):
    # one Newton step, kept only if it lowers |p| (multiple roots make dp ~ 0)
    cdef double complex p = ((s + c2) * s + c1) * s + c0
    cdef double complex dp = (3.0 * s + 2.0 * c2) * s + c1
    cdef double complex t, pt
    if dp == 0:
        return s
    t = s - p / dp
    pt = ((t + c2) * t + c1) * t + c0
    if abs(pt) < abs(p):
        return t
    return s


def cubic_roots(c2, c1, c0):
    cdef double complex a2 = c2, a1 = c1, a0 = c0
    cdef double complex shift = a2 / 3.0
    cdef double complex p = a1 - a2 * a2 / 3.0
    cdef double complex q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0
    cdef double complex om = -0.5 + 1j * (sqrt(3.0) / 2.0)
    cdef double complex disc, w1, w2, w, u, uk
    cdef double complex xs[3]
    cdef int k
    if p == 0:
        u = _cbrt(-q)
        xs[0] = u
        xs[1] = u * om
        xs[2] = u * conj(om)
    else:
        disc = csqrt(q * q / 4.0 + p * p * p / 27.0)
        w1 = -q / 2.0 + disc
        w2 = -q / 2.0 - disc
        w = w1 if cabs(w1) >= cabs(w2) else w2
        u = _cbrt(w)
        if u == 0:
            # p*p*p underflowed: all depressed roots are negligibly small
            xs[0] = 0
            xs[1] = 0
            xs[2] = 0
        else:
            uk = u
            for k in range(3):
                xs[k] = uk - p / (3.0 * uk)
                uk = uk * om
    return (
        complex(_polish(xs[0] - shift, a2, a1, a0)),
        complex(_polish(xs[1] - shift, a2, a1, a0)),
        complex(_polish(xs[2] - shift, a2, a1, a0)),
    )


cdef void _matmul(double complex[:, ::1] x, double complex[:, ::1] y,
                  double complex[:, ::1] out, int n) noexcept nogil:
    cdef int i, j, k
    cdef double complex acc
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = acc + x[i, k] * y[k, j]
            out[i, j] = acc


def expm_taylor(a):
    cdef double complex[:, ::1] av = np.ascontiguousarray(a, dtype=complex)
    cdef int n = av.shape[0]
    cdef int i, j, k, s = 0
    cdef double norm = 0.0, col
    for j in range(n):
        col = 0.0
        for i in range(n):
            col += cabs(av[i, j])
        if col > norm:
            norm = col
    if norm > 0.5:
        s = <int>ceil(log2(norm / 0.5))
    cdef double scale = pow(2.0, -s)
    b_arr = np.empty((n, n), dtype=complex)
    out_arr = np.eye(n, dtype=complex)
    tmp_arr = np.empty((n, n), dtype=complex)
    cdef double complex[:, ::1] b = b_arr
    cdef double complex[:, ::1] out = out_arr
    cdef double complex[:, ::1] tmp = tmp_arr
    for i in range(n):
        for j in range(n):
            b[i, j] = av[i, j] * scale
    with nogil:
        for k in range(TAYLOR_DEGREE, 0, -1):
            _matmul(b, out, tmp, n)
            for i in range(n):
                for j in range(n):
                    out[i, j] = tmp[i, j] / k + (1.0 if i == j else 0.0)
        for k in range(s):
            _matmul(out, out, tmp, n)
            for i in range(n):
                for j in range(n):
                    out[i, j] = tmp[i, j]
    return out_arr


def adjugate3(m):
    cdef double complex[:, ::1] v = np.ascontiguousarray(m, dtype=complex)
    adj_arr = np.empty((3, 3), dtype=complex)
    cdef double complex[:, ::1] adj = adj_arr
    cdef int i, j, r0, r1, c0, c1
    cdef double complex minor
    for i in range(3):
        for j in range(3):
            r0 = 1 if j == 0 else 0
            r1 = 1 if j == 2 else 2
            c0 = 1 if i == 0 else 0
            c1 = 1 if i == 2 else 2
            minor = v[r0, c0] * v[r1, c1] - v[r0, c1] * v[r1, c0]
            adj[i, j] = minor if (i + j) % 2 == 0 else -minor
    return adj_arr
