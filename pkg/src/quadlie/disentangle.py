"""Ordered-product factorizations of group elements.

``exp(sum c_g M_g)`` is rewritten as ``prod exp(d_i M_i)`` for a fixed
generator order. The coefficients come from matching entries of the
triangular / diagonal product against the direct exponential, so the
matrix identity holds by construction; :func:`verify_factorization`
measures how well.

Factor orders:

* su(2), su(1,1): raising, diagonal-log, lowering
* su(2,1): D, G, A, C, K, F, B, J, E (upper * diagonal * lower), C pinned to 0
* su(3): E, J, B, C, C+2K, A, G, D (lower * diagonal * upper)

Diagonal-log coefficients are defined only up to a lattice of ``2*pi*i``
shifts. Each factorization records the logarithms of its pivots
(``pivot_logs``); :func:`track_branches` re-chooses those branches along a
sweep so the coefficients vary continuously.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from . import smallmat
from .algebra import Group, GeneratorSet, assemble, generators
from .errors import DegeneracyError, SingularityError, StructuralError

FACTOR_ORDER = {
    Group.SU2: ("J+", "J3", "J-"),
    Group.SU11: ("K+", "K3", "K-"),
    Group.SU21: ("D", "G", "A", "C", "K", "F", "B", "J", "E"),
    Group.SU3: ("E", "J", "B", "C", "C+2K", "A", "G", "D"),
}

# factor names that are fixed combinations of generators
COMPOSITES = {"C+2K": {"C": 1, "K": 2}}

PIVOT_TOL = 1e-13


@dataclass(frozen=True)
class FactoredForm:
    group: Group
    factors: tuple[tuple[str, complex], ...]
    pivot_logs: tuple[complex, ...] = ()
    params: Mapping[str, complex] = field(default_factory=dict, compare=False)

    def coeff(self, name: str) -> complex:
        for n, c in self.factors:
            if n == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict[str, complex]:
        return dict(self.factors)

    def matrix(self) -> np.ndarray:
        gset = generators(self.group)
        out = np.eye(gset.dim, dtype=complex)
        for name, c in self.factors:
            out = out @ factor_exp(gset, name, c)
        return out


def factor_matrix(gset: GeneratorSet, name: str) -> np.ndarray:
    if name in COMPOSITES:
        return assemble(COMPOSITES[name], gset)
    return gset.matrix(name)


def factor_exp(gset: GeneratorSet, name: str, c: complex) -> np.ndarray:
    m = factor_matrix(gset, name)
    if not np.any(m - np.diag(np.diag(m))):
        return np.diag(np.exp(c * np.diag(m)))
    if not np.any(m @ m):
        return np.eye(gset.dim, dtype=complex) + c * m
    return smallmat.expm(m, c, method="series")


def verify_factorization(factored: FactoredForm, direct: np.ndarray) -> float:
    """``||product - direct||_F / ||direct||_F``."""
    prod = factored.matrix()
    if prod.shape != np.shape(direct):
        raise StructuralError("factorization and direct matrix differ in size")
    return float(np.linalg.norm(prod - direct) / np.linalg.norm(direct))


def _log_near(z: complex, ref: complex | None) -> complex:
    """Logarithm of ``z`` on the branch closest to ``ref``."""
    w = cmath.log(z)
    if ref is not None:
        w += 2j * math.pi * round((ref - w).imag / (2 * math.pi))
    return w


def _check_pivot(p: complex, scale: float, what: str, t=None):
    if abs(p) <= PIVOT_TOL * max(1.0, scale):
        raise SingularityError(f"factorization pivot {what} vanishes ({abs(p):.3e})", t)


# rank one: su(2) and su(1,1) -------------------------------------------------

def _cosh_sinhc(f2: complex) -> tuple[complex, complex]:
    """``cosh(f)`` and ``sinh(f)/f`` as functions of ``f**2``."""
    if abs(f2) < 1e-2:
        ch, sc, term_c, term_s = 0j, 0j, 1 + 0j, 1 + 0j
        for k in range(10):
            ch += term_c
            sc += term_s
            term_c *= f2 / ((2 * k + 1) * (2 * k + 2))
            term_s *= f2 / ((2 * k + 2) * (2 * k + 3))
        return ch, sc
    f = cmath.sqrt(f2)
    return cmath.cosh(f), cmath.sinh(f) / f


def _rank1_sign(group: Group) -> int:
    if group is Group.SU2:
        return 1
    if group is Group.SU11:
        return -1
    raise StructuralError(f"rank-one factorization is for su2/su11, not {group.value}")


def rank1_exponential(group: Group | str, W3: complex, Wplus: complex, Wminus: complex) -> np.ndarray:
    """Closed-form ``exp(W3*X3 + W+*X+ + W-*X-)`` for the 2x2 representation."""
    group = Group(group)
    sigma = _rank1_sign(group)
    m = np.array([[W3 / 2, Wplus], [sigma * Wminus, -W3 / 2]], dtype=complex)
    ch, sc = _cosh_sinhc(W3 * W3 / 4 + sigma * Wplus * Wminus)
    return ch * np.eye(2) + sc * m


def _rank1_from_matrix(group: Group, u: np.ndarray, ref=None, t=None) -> FactoredForm:
    sigma = _rank1_sign(group)
    u22 = u[1, 1]
    _check_pivot(u22, np.abs(u).max(), "U[1,1]", t)
    log_u22 = _log_near(u22, ref[0] if ref else None)
    names = FACTOR_ORDER[group]
    factors = (
        (names[0], complex(u[0, 1] / u22)),
        (names[1], complex(-2 * log_u22)),
        (names[2], complex(sigma * u[1, 0] / u22)),
    )
    return FactoredForm(group, factors, (log_u22,))


def disentangle_rank1(group: Group | str, W3: complex, Wplus: complex, Wminus: complex,
                      ref: Sequence[complex] | None = None, t=None) -> FactoredForm:
    """``exp(X+ R) exp(ln X3 * D) exp(X- L)`` equal to the rank-one exponential.

    With ``U`` the 2x2 exponential, ``X+ = U12/U22``, ``X- = +-U21/U22`` and
    ``ln X3 = -2 ln U22``; these are exact for any branch of the logarithm.

    Raises
    ------
    SingularityError
        If ``U22`` vanishes (the ordered product does not exist).
    """
    group = Group(group)
    return _rank1_from_matrix(group, rank1_exponential(group, W3, Wplus, Wminus), ref, t)


def printed_rank1(group: Group | str, W3: complex, Wplus: complex, Wminus: complex) -> FactoredForm:
    """Coefficients from the textbook-style quotient formulas as commonly printed.

    ``X+- = W+- sinh f / (2 f cosh f - W3 sinh f)`` and
    ``X3 = (cosh f - W3 sinh f / (2 f))**-2``. The quotient is missing a
    factor 2 relative to the exact matching, so this form does *not*
    reproduce the exponential; it is kept for comparison.
    """
    group = Group(group)
    sigma = _rank1_sign(group)
    ch, sc = _cosh_sinhc(W3 * W3 / 4 + sigma * Wplus * Wminus)
    den = 2 * ch - W3 * sc  # (2 f cosh f - W3 sinh f) / f
    base = ch - W3 * sc / 2
    names = FACTOR_ORDER[group]
    return FactoredForm(group, (
        (names[0], complex(Wplus * sc / den)),
        (names[1], complex(-2 * cmath.log(base))),
        (names[2], complex(Wminus * sc / den)),
    ))


# su(2,1) ---------------------------------------------------------------------

def _udl(u: np.ndarray, ref=None, t=None) -> FactoredForm:
    """Upper-unitriangular * diagonal * lower-unitriangular split of a 3x3 matrix."""
    scale = float(np.abs(u).max())
    d3 = u[2, 2]
    _check_pivot(d3, scale, "U[2,2]", t)
    u13, u23 = u[0, 2] / d3, u[1, 2] / d3
    l31, l32 = u[2, 0] / d3, u[2, 1] / d3
    s = u[:2, :2] - d3 * np.outer([u13, u23], [l31, l32])
    d2 = s[1, 1]
    _check_pivot(d2, scale, "minor pivot", t)
    u12, l21 = s[0, 1] / d2, s[1, 0] / d2
    d1 = s[0, 0] - u12 * d2 * l21
    log_d1 = _log_near(d1, ref[0] if ref else None)
    log_d2 = _log_near(d2, ref[1] if ref else None)
    f = {
        "D": u13, "G": u23, "A": u12, "C": 0j,
        "K": 2 * log_d2, "F": 2 * log_d1,
        "B": l21, "J": -l32, "E": -l31,
    }
    return FactoredForm(
        Group.SU21,
        tuple((n, complex(f[n])) for n in FACTOR_ORDER[Group.SU21]),
        (log_d1, log_d2),
        params={"f0": f["C"], "f1": f["K"], "f2": f["F"], "f3": f["J"], "f4": f["G"],
                "f5": f["E"], "f6": f["D"], "f7": f["B"], "f8": f["A"]},
    )


def disentangle_su21_matrix(coeffs: Mapping[str, complex], ref=None, t=None) -> FactoredForm:
    """Factor ``exp(sum coeffs[g] * M_g)`` in the su(2,1) order."""
    return _udl(smallmat.expm(assemble(coeffs, generators(Group.SU21))), ref, t)


def disentangle_su21(form, t: float, ref=None) -> FactoredForm:
    """Factor the su(2,1) interaction propagator of ``form`` at time ``t``.

    Requires a well-separated spectrum of the generator matrix (the zero
    matrix is accepted and gives the identity factorization); the
    eigen-quotient expressions for ``f4`` and ``f6`` are then available via
    :func:`su21_eigen_quotients`.
    """
    if form.group is not Group.SU21:
        raise StructuralError("disentangle_su21 needs an su(2,1) interaction form")
    rates = assemble(form.rates, generators(Group.SU21))
    if not rates.any():
        return _udl(np.eye(3, dtype=complex), ref, t)
    es = smallmat.eig(rates)
    return _udl(es.exp(t), ref, t)


def su21_eigen_quotients(form, t: float) -> tuple[complex, complex]:
    """``(f4, f6)`` as quotients of eigenvector sums.

    With right vectors ``r_i``, left vectors ``l_i`` and eigenvalues
    ``lambda_i`` of the rate matrix::

        f6 = sum r_i[0] l_i[2] e^{lambda_i t} / sum r_i[2] l_i[2] e^{lambda_i t}
        f4 = sum r_i[1] l_i[2] e^{lambda_i t} / sum r_i[2] l_i[2] e^{lambda_i t}
    """
    es = smallmat.eig(assemble(form.rates, generators(Group.SU21)))
    e = np.exp(es.eigenvalues * t)
    w = es.left[:, 2] * e
    den = np.sum(es.right[2, :] * w)
    _check_pivot(den, 1.0, "eigen-quotient denominator", t)
    return complex(np.sum(es.right[1, :] * w) / den), complex(np.sum(es.right[0, :] * w) / den)


# su(3) -----------------------------------------------------------------------

def _ldu(u: np.ndarray, ref=None, t=None) -> FactoredForm:
    scale = float(np.abs(u).max())
    p1 = u[0, 0]
    _check_pivot(p1, scale, "U[0,0]", t)
    gamma = u[0, 1] / p1
    gamma_bar = u[1, 0] / p1
    p2 = u[1, 1] - u[1, 0] * u[0, 1] / p1
    _check_pivot(p2, scale, "minor pivot", t)
    beta = (u[1, 2] - u[1, 0] * u[0, 2] / p1) / p2
    beta_bar = (u[2, 1] - u[2, 0] * u[0, 1] / p1) / p2
    alpha = u[0, 2] / p1 - gamma * beta
    alpha_bar = u[2, 0] / p1 - gamma_bar * beta_bar
    log_p1 = _log_near(p1, ref[0] if ref else None)
    log_p2 = _log_near(p2, ref[1] if ref else None)
    ln_delta = (log_p1 - log_p2) / 2
    ln_eps = (log_p1 + log_p2) / 2
    f = {
        "E": alpha_bar, "J": beta_bar, "B": gamma_bar,
        "C": 2 * ln_delta, "C+2K": 2 * ln_eps,
        "A": gamma, "G": beta, "D": alpha,
    }
    params = {
        "alpha": alpha, "beta": beta, "gamma": gamma,
        "alpha_bar": alpha_bar, "beta_bar": beta_bar, "gamma_bar": gamma_bar,
        "ln_delta": ln_delta, "ln_epsilon": ln_eps,
    }
    return FactoredForm(
        Group.SU3,
        tuple((n, complex(f[n])) for n in FACTOR_ORDER[Group.SU3]),
        (log_p1, log_p2),
        params={k: complex(v) for k, v in params.items()},
    )


def su3_exponential(m: np.ndarray, t: float = 1.0) -> np.ndarray:
    """``exp(t*m)`` by the spectral-weight route, falling back to expm on degenerate roots."""
    try:
        return smallmat.spectral_expm(m, t)
    except DegeneracyError:
        return smallmat.expm(m, t)


def disentangle_su3(m: np.ndarray, t: float = 1.0, ref=None) -> FactoredForm:
    """Eight-parameter factorization of ``exp(t*m)`` for a 3x3 traceless ``m``.

    The entries of the product are ``(1,1) = delta*eps``,
    ``(1,2) = gamma*delta*eps``, ``(1,3) = delta*eps*(alpha + gamma*beta)``,
    and symmetrically for the first column; the second pivot fixes
    ``eps/delta`` and the remaining barred/unbarred parameters.
    """
    return _ldu(su3_exponential(np.asarray(m, dtype=complex), t), ref, t)


# dispatch and sweeps ---------------------------------------------------------

def disentangle(group: Group | str, coeffs: Mapping[str, complex], ref=None, t=None) -> FactoredForm:
    """Factor ``exp(sum coeffs[g] * M_g)`` for any of the four groups."""
    group = Group(group)
    if group in (Group.SU2, Group.SU11):
        n = FACTOR_ORDER[group]
        return disentangle_rank1(group, coeffs.get(n[1], 0), coeffs.get(n[0], 0),
                                 coeffs.get(n[2], 0), ref, t)
    if group is Group.SU21:
        return disentangle_su21_matrix(coeffs, ref, t)
    return _ldu(smallmat.expm(assemble(coeffs, generators(Group.SU3))), ref, t)


def _rebuild(form: FactoredForm, logs: tuple[complex, ...]) -> FactoredForm:
    f = form.as_dict()
    g = form.group
    params = dict(form.params)
    if g in (Group.SU2, Group.SU11):
        f[FACTOR_ORDER[g][1]] = -2 * logs[0]
    elif g is Group.SU21:
        f["F"], f["K"] = 2 * logs[0], 2 * logs[1]
        params.update(f1=f["K"], f2=f["F"])
    else:
        f["C"], f["C+2K"] = logs[0] - logs[1], logs[0] + logs[1]
        params.update(ln_delta=f["C"] / 2, ln_epsilon=f["C+2K"] / 2)
    return replace(form, factors=tuple((n, complex(f[n])) for n, _ in form.factors),
                   pivot_logs=logs, params=params)


def track_branches(forms: Sequence[FactoredForm]) -> list[FactoredForm]:
    """Sequential post-pass choosing log branches continuous along a sweep."""
    out: list[FactoredForm] = []
    prev = None
    for form in forms:
        if prev is None:
            logs = form.pivot_logs
        else:
            logs = tuple(
                w + 2j * math.pi * round((p - w).imag / (2 * math.pi))
                for w, p in zip(form.pivot_logs, prev)
            )
        out.append(_rebuild(form, logs) if logs != form.pivot_logs else form)
        prev = logs
    return out


def sweep(form, times: Sequence[float]) -> list[FactoredForm]:
    """Factor the propagator of an ``InteractionForm`` on a time grid."""
    results = []
    for t in times:
        if form.group in (Group.SU2, Group.SU11):
            n = FACTOR_ORDER[form.group]
            r = form.rates
            results.append(disentangle_rank1(form.group, r.get(n[1], 0) * t, r.get(n[0], 0) * t,
                                             r.get(n[2], 0) * t, t=t))
        elif form.group is Group.SU21:
            results.append(_udl(smallmat.expm(form.exponent(t)), t=t))
        else:
            results.append(disentangle_su3(assemble(form.rates, generators(Group.SU3)), t))
    return track_branches(results)
