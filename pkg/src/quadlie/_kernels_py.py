"""Pure-Python reference kernels (used when the Cython build is missing)."""
import cmath
import math

import numpy as np

TAYLOR_DEGREE = 18
_OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)


def _newton_polish(s, c2, c1, c0):
    # one Newton step, kept only if it lowers |p| (multiple roots make dp ~ 0)
    p = ((s + c2) * s + c1) * s + c0
    dp = (3.0 * s + 2.0 * c2) * s + c1
    if dp == 0:
        return s
    t = s - p / dp
    pt = ((t + c2) * t + c1) * t + c0
    return t if abs(pt) < abs(p) else s


def cubic_roots(c2, c1, c0):
    """Roots of s^3 + c2 s^2 + c1 s + c0 via the depressed cubic."""
    c2, c1, c0 = complex(c2), complex(c1), complex(c0)
    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = 2.0 * c2 ** 3 / 27.0 - c2 * c1 / 3.0 + c0
    if p == 0:
        u = _cbrt(-q)
        xs = (u, u * _OMEGA, u * _OMEGA.conjugate())
    else:
        disc = cmath.sqrt(q * q / 4.0 + p ** 3 / 27.0)
        w1 = -q / 2.0 + disc
        w2 = -q / 2.0 - disc
        w = w1 if abs(w1) >= abs(w2) else w2
        u = _cbrt(w)
        if u == 0:
            # p**3 underflowed: all depressed roots are negligibly small
            xs = (0j, 0j, 0j)
        else:
            xs = [u * _OMEGA ** k - p / (3.0 * u * _OMEGA ** k) for k in range(3)]
    return tuple(_newton_polish(x - shift, c2, c1, c0) for x in xs)


def _cbrt(z):
    if z == 0:
        return 0j
    r, phi = cmath.polar(z)
    return cmath.rect(r ** (1.0 / 3.0), phi / 3.0)


def expm_taylor(a):
    """exp(a) by scaling and squaring around a degree-18 Taylor polynomial."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    norm = np.abs(a).sum(axis=0).max() if n else 0.0
    s = 0
    if norm > 0.5:
        s = int(math.ceil(math.log2(norm / 0.5)))
    b = a / (2.0 ** s)
    eye = np.eye(n, dtype=complex)
    out = eye.copy()
    for k in range(TAYLOR_DEGREE, 0, -1):
        out = eye + (b @ out) / k
    for _ in range(s):
        out = out @ out
    return out


def adjugate3(m):
    m = np.asarray(m, dtype=complex)
    adj = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != j]
            c = [x for x in range(3) if x != i]
            minor = m[r[0], c[0]] * m[r[1], c[1]] - m[r[0], c[1]] * m[r[1], c[0]]
            adj[i, j] = minor if (i + j) % 2 == 0 else -minor
    return adj
