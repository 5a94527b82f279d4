"""Dense 2x2 / 3x3 complex kernels.

Characteristic roots, biorthogonal eigensystems built from cofactors,
matrix exponentials (eigen route and scaling-and-squaring route) and the
three-root spectral weights ``F, G, H`` with

    exp(-s_i) = H - G s_i + F s_i**2      for every root s_i.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DegeneracyError

DEGENERACY_THRESHOLD = 1e-9
# The eigen route of expm is only taken when it is well conditioned; the
# separation needed for accuracy is far stricter than the one eig() needs
# to produce vectors at all.
EXPM_EIG_SEPARATION = 1e-4
EXPM_EIG_CONDITION = 1e4


@dataclass(frozen=True)
class Eigensystem:
    eigenvalues: np.ndarray
    right: np.ndarray  # column i is the right vector of eigenvalue i
    left: np.ndarray  # row i is the left vector of eigenvalue i
    normalizers: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.right * self.eigenvalues) @ self.left

    def exp(self, t: complex = 1.0) -> np.ndarray:
        return (self.right * np.exp(self.eigenvalues * t)) @ self.left


@dataclass(frozen=True)
class SpectralWeights:
    F: complex
    G: complex
    H: complex
    roots: tuple[complex, complex, complex]

    def residuals(self) -> np.ndarray:
        s = np.asarray(self.roots)
        return np.exp(-s) - (self.H - self.G * s + self.F * s * s)


def _scale(values) -> float:
    return max(1.0, max((abs(v) for v in values), default=0.0))


def sort_roots(roots, tol: float | None = None) -> tuple[complex, ...]:
    """Order by real part, then imaginary part; near-equal real parts tie."""
    roots = [complex(r) for r in roots]
    if tol is None:
        tol = 1e-10 * _scale(roots)

    def cmp(x, y):
        if abs(x.real - y.real) > tol:
            return -1 if x.real < y.real else 1
        if x.imag != y.imag:
            return -1 if x.imag < y.imag else 1
        return 0

    return tuple(sorted(roots, key=functools.cmp_to_key(cmp)))


def cubic_roots(c2: complex, c1: complex, c0: complex) -> tuple[complex, complex, complex]:
    """Roots of ``s**3 + c2*s**2 + c1*s + c0`` in canonical order."""
    return sort_roots(kernels.cubic_roots(complex(c2), complex(c1), complex(c0)))


def char_poly(m: np.ndarray) -> tuple[complex, ...]:
    """Monic characteristic coefficients ``(c_{n-1}, ..., c_0)`` of det(sI - m)."""
    m = np.asarray(m, dtype=complex)
    tr = np.trace(m)
    if m.shape == (2, 2):
        return (-tr, np.linalg.det(m))
    if m.shape == (3, 3):
        minors = (
            m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
            + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
        )
        det = (
            m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
        )
        return (-tr, minors, -det)
    raise ValueError(f"expected a 2x2 or 3x3 matrix, got shape {m.shape}")


def eigenvalues(m: np.ndarray) -> tuple[complex, ...]:
    coeffs = char_poly(m)
    if len(coeffs) == 2:
        b, c = coeffs
        d = np.sqrt(complex(b * b - 4 * c))
        q = -0.5 * (b + d if abs(b + d) >= abs(b - d) else b - d)
        if q == 0:
            return (0j, 0j)
        return sort_roots((q, c / q))
    return cubic_roots(*coeffs)


def min_separation(values) -> float:
    values = list(values)
    return min(
        abs(values[i] - values[j]) for i in range(len(values)) for j in range(i + 1, len(values))
    )


def _adjugate(m: np.ndarray) -> np.ndarray:
    if m.shape == (2, 2):
        return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])
    return kernels.adjugate3(m)


def eig(m: np.ndarray, threshold: float = DEGENERACY_THRESHOLD) -> Eigensystem:
    """Biorthogonal eigensystem of a 2x2 or 3x3 matrix from cofactors.

    For each eigenvalue the adjugate of ``m - lambda*I`` has rank one and
    equals ``r l^T`` up to scale: its columns are right vectors and its
    rows left vectors. The largest column and row are taken and both are
    divided by the same normalizer ``N = sqrt(l . r)`` so that
    ``left @ right == I``.

    Raises
    ------
    DegeneracyError
        If two eigenvalues are closer than ``threshold * ||m||``.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    lam = np.array(eigenvalues(m))
    norm = np.linalg.norm(m)
    if norm == 0 or min_separation(lam) <= threshold * norm:
        raise DegeneracyError(f"eigenvalues {lam} are not separated by {threshold:g}*||M||")
    right = np.empty((n, n), dtype=complex)
    left = np.empty((n, n), dtype=complex)
    norms = np.empty(n, dtype=complex)
    eye = np.eye(n)
    for i, li in enumerate(lam):
        adj = _adjugate(m - li * eye)
        col = adj[:, np.argmax(np.linalg.norm(adj, axis=0))]
        row = adj[np.argmax(np.linalg.norm(adj, axis=1)), :]
        pairing = row @ col
        if abs(pairing) <= 1e-14 * np.linalg.norm(row) * np.linalg.norm(col):
            raise DegeneracyError(f"eigenvalue {li} has orthogonal left/right cofactor vectors")
        norms[i] = np.sqrt(pairing)
        right[:, i] = col / norms[i]
        left[i, :] = row / norms[i]
    return Eigensystem(lam, right, left, norms)


def expm(m: np.ndarray, scale: complex = 1.0, method: str = "auto") -> np.ndarray:
    """``exp(scale * m)``.

    ``method="auto"`` takes the eigen route when the spectrum is well
    separated and the eigenvector basis well conditioned, and the
    scaling-and-squaring Taylor kernel otherwise. ``"eig"`` and
    ``"series"`` force one route.
    """
    a = np.asarray(m, dtype=complex) * scale
    if method == "series" or a.shape[0] not in (2, 3):
        return kernels.expm_taylor(a)
    if method == "eig":
        return eig(a).exp()
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    norm = np.linalg.norm(a)
    if norm == 0:
        return np.eye(a.shape[0], dtype=complex)
    lam = eigenvalues(a)
    if min_separation(lam) > EXPM_EIG_SEPARATION * norm:
        try:
            es = eig(a)
        except DegeneracyError:
            es = None
        if es is not None:
            cond = max(
                np.linalg.norm(es.right[:, i]) * np.linalg.norm(es.left[i, :])
                for i in range(a.shape[0])
            )
            if cond < EXPM_EIG_CONDITION:
                return es.exp()
    return kernels.expm_taylor(a)


def spectral_weights(roots, threshold: float = DEGENERACY_THRESHOLD) -> SpectralWeights:
    """Weights ``F, G, H`` interpolating ``exp(-s)`` at three distinct roots.

    The divided differences are written over the common denominator
    ``(s1 - s2)(s2 - s3)(s3 - s1)``. For traceless roots (``s1+s2+s3 == 0``)
    ``G`` reduces to ``sum s1 (s2 - s3) exp(-s1) / den``;
    see :func:`printed_G`.
    """
    s1, s2, s3 = (complex(r) for r in roots)
    if min_separation((s1, s2, s3)) <= threshold * _scale((s1, s2, s3)):
        raise DegeneracyError(f"roots {(s1, s2, s3)} are not separated")
    e1, e2, e3 = np.exp(-s1), np.exp(-s2), np.exp(-s3)
    den = (s1 - s2) * (s2 - s3) * (s3 - s1)
    F = -((s2 - s3) * e1 + (s3 - s1) * e2 + (s1 - s2) * e3) / den
    G = -((s2 * s2 - s3 * s3) * e1 + (s3 * s3 - s1 * s1) * e2 + (s1 * s1 - s2 * s2) * e3) / den
    H = -(s2 * s3 * (s2 - s3) * e1 + s3 * s1 * (s3 - s1) * e2 + s1 * s2 * (s1 - s2) * e3) / den
    return SpectralWeights(complex(F), complex(G), complex(H), (s1, s2, s3))


def printed_G(roots) -> complex:
    """The traceless-only form of ``G``; equals the general one iff sum(roots)==0."""
    s1, s2, s3 = (complex(r) for r in roots)
    den = (s1 - s2) * (s2 - s3) * (s3 - s1)
    return complex(
        (s1 * (s2 - s3) * np.exp(-s1) + s2 * (s3 - s1) * np.exp(-s2) + s3 * (s1 - s2) * np.exp(-s3))
        / den
    )


def spectral_expm(m: np.ndarray, t: complex = 1.0) -> np.ndarray:
    """``exp(t*m)`` for a 3x3 matrix via the three-root spectral weights."""
    a = np.asarray(m, dtype=complex) * t
    w = spectral_weights(cubic_roots(*char_poly(-a)))
    return w.H * np.eye(3) + w.G * a + w.F * (a @ a)


def eigen_expm(m: np.ndarray, t: complex = 1.0) -> np.ndarray:
    """``exp(t*m)`` through the biorthogonal cofactor eigensystem of ``m``."""
    return eig(np.asarray(m, dtype=complex)).exp(t)
