"""Closed-form number-state transition probabilities.

Every probability here is built from a factorization coefficient set
(:mod:`quadlie.disentangle`), then optionally compared to the truncated
Fock-space propagator via :func:`oracle_probability`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from . import disentangle as dis
from . import fock
from .algebra import Group
from .errors import CapacityError, ModelError
from .models import Model, ModelSpec, reduce, su3_matrix

MAX_PERMANENT_ORDER = 20


@dataclass(frozen=True)
class TransitionResult:
    initial: tuple[int, ...]
    final: tuple[int, ...]
    t: float
    prob_closed: float
    prob_closed_printed: float = math.nan
    normalization: complex = 1.0
    prob_oracle: float | None = None
    note: str = ""

    @property
    def discrepancy(self) -> float | None:
        if self.prob_oracle is None:
            return None
        return abs(self.prob_closed - self.prob_oracle)

    def with_oracle(self, prob: float) -> "TransitionResult":
        return replace(self, prob_oracle=float(prob))


class Regime(str, enum.Enum):
    OSCILLATORY = "Oscillatory"
    GROWTH = "Growth"
    CRITICAL = "Critical"


# frequency converter --------------------------------------------------------

def fc_swap_probability(N: int, k: float, delta: float, t: float) -> float:
    """Probability of ``|N, 0> -> |0, N>``: ``[k^2 sin^2(W t) / W^2]^N``, ``W^2 = k^2 + delta^2/4``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    w = math.sqrt(k * k + delta * delta / 4)
    x = w * t
    sinc = math.sin(x) / x if x != 0 else 1.0
    return ((k * t * sinc) ** 2) ** N


def permanent(m: np.ndarray) -> complex:
    """Ryser's formula; the empty matrix has permanent 1."""
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n > MAX_PERMANENT_ORDER:
        raise CapacityError(f"permanent of order {n} exceeds {MAX_PERMANENT_ORDER}")
    total = 0j
    cols = range(n)
    for r in range(1, n + 1):
        sign = (-1) ** r
        for subset in combinations(cols, r):
            total += sign * np.prod(m[:, subset].sum(axis=1))
    return (-1) ** n * total


def passive_amplitude(u: np.ndarray, final: Sequence[int], initial: Sequence[int]) -> complex:
    """``<final| U |initial>`` for a number-conserving linear mode map ``u``.

    ``U a_j^dag U^dag = sum_i u[i, j] a_i^dag``.
    """
    if sum(final) != sum(initial):
        return 0j
    rows = [i for i, n in enumerate(final) for _ in range(n)]
    cols = [j for j, n in enumerate(initial) for _ in range(n)]
    sub = np.asarray(u)[np.ix_(rows, cols)]
    norm = math.sqrt(math.prod(math.factorial(n) for n in (*final, *initial)))
    return complex(permanent(sub) / norm)


def _fc_mode_map(spec: ModelSpec, t: float) -> np.ndarray:
    # the closed-form 2x2 exponential stays valid where the ordered product is singular
    r = reduce(spec).rates
    return dis.rank1_exponential(Group.SU2, r["J3"] * t, r["J+"] * t, r["J-"] * t)


def fc_transition(spec: ModelSpec, initial: Sequence[int], final: Sequence[int], t: float) -> TransitionResult:
    initial, final = _check_states(spec, initial, final, Model.FC)
    amp = passive_amplitude(_fc_mode_map(spec, t), final, initial)
    printed = math.nan
    note = ""
    n = initial[0]
    if initial == (n, 0) and final == (0, n):
        (k,), (d,) = spec.couplings, spec.detunings
        printed = fc_swap_probability(n, k, d, t)
    elif sum(initial) != sum(final):
        note = "photon number not conserved"
    return TransitionResult(initial, final, t, abs(amp) ** 2, printed, note=note)


# parametric amplifier -------------------------------------------------------

def _pa_factors(k: float, delta: float, t: float) -> dis.FactoredForm:
    return dis.disentangle_rank1(Group.SU11, -1j * delta * t, -1j * k * t, -1j * k * t, t=t)


def pa_vac_to_11_probability(k: float, delta: float, t: float) -> float:
    """Probability of ``|0,0> -> |1,1>`` including the vacuum normalization ``|Y3|``."""
    f = _pa_factors(k, delta, t)
    yp, ln_y3 = f.coeff("K+"), f.coeff("K3")
    return float(abs(yp) ** 2 * math.exp(ln_y3.real))


def pa_vac_to_11_printed(k: float, delta: float, t: float) -> float:
    """The uncorrected quotient ``|V+ sinh F / (2F cosh F - V3 sinh F)|^2``."""
    f = dis.printed_rank1(Group.SU11, -1j * delta * t, -1j * k * t, -1j * k * t)
    return float(abs(f.coeff("K+")) ** 2)


def pa_regime(k: float, delta: float) -> Regime:
    a, b = k * k, delta * delta / 4
    if math.isclose(a, b, rel_tol=1e-12, abs_tol=0.0) or a == b:
        return Regime.CRITICAL
    return Regime.GROWTH if a > b else Regime.OSCILLATORY


def pa_amplitude(k: float, delta: float, t: float, initial: Sequence[int], final: Sequence[int]) -> complex:
    """``<final| exp(Y+ K+) exp(lnY3 K3) exp(Y- K-) |initial>`` summed over pair annihilations.

    Excludes the unimodular scalar phase of the reduction.
    """
    (na, nb), (ma, mb) = initial, final
    if ma - mb != na - nb:
        return 0j
    f = _pa_factors(k, delta, t)
    yp, ln_y3, ym = f.coeff("K+"), f.coeff("K3"), f.coeff("K-")
    total = 0j
    for j in range(min(na, nb) + 1):
        p = ma - (na - j)
        if p < 0:
            continue
        lower = math.sqrt(math.perm(na, j) * math.perm(nb, j))
        raise_ = math.sqrt(math.perm(ma, p) * math.perm(mb, p))
        total += (ym ** j / math.factorial(j)) * (yp ** p / math.factorial(p)) * lower * raise_ \
            * np.exp(ln_y3 * (na + nb - 2 * j + 1) / 2)
    return complex(total)


def pa_transition(spec: ModelSpec, initial: Sequence[int], final: Sequence[int], t: float) -> TransitionResult:
    initial, final = _check_states(spec, initial, final, Model.PA)
    (k,), (d,) = spec.couplings, spec.detunings
    amp = pa_amplitude(k, d, t, initial, final)
    printed = math.nan
    norm = 1.0 + 0j
    note = ""
    if initial == (0, 0):
        norm = complex(np.exp(_pa_factors(k, d, t).coeff("K3") / 2))
        if final == (1, 1):
            printed = pa_vac_to_11_printed(k, d, t)
    if final[0] - final[1] != initial[0] - initial[1]:
        note = "photon-number difference not conserved"
    return TransitionResult(initial, final, t, abs(amp) ** 2, printed, norm, note=note)


# Raman scattering -----------------------------------------------------------

def raman_from_vacuum(m_v: int, m_s: int, m_a: int, spec: ModelSpec, t: float) -> TransitionResult:
    """Probability of ``|0,0,0> -> |m_v, m_s, m_a>`` (kets ordered v, s, a).

    The ordered product acting on the vacuum leaves
    ``exp(f6 D) exp(f4 G) |0>`` times ``exp((f1 + f2)/2)``, the scalar that
    the diagonal factors pick up from the vacuum. Expanding gives
    ``m_s!/(m_v! m_a!) |f6|^(2 m_v) |f4|^(2 m_a) e^{Re(f1+f2)}`` when
    ``m_s == m_v + m_a`` and zero otherwise.
    """
    if spec.model_id is not Model.RAMAN:
        raise ModelError("raman_from_vacuum needs a Raman model")
    if min(m_v, m_s, m_a) < 0:
        raise ModelError("occupations must be non-negative")
    final = (m_v, m_s, m_a)
    if m_s != m_v + m_a:
        return TransitionResult((0, 0, 0), final, t, 0.0, 0.0,
                                note="selection rule: m_s != m_v + m_a")
    f = dis.disentangle_su21(reduce(spec), t)
    p = f.params
    f4, f6 = p["f4"], p["f6"]
    norm = complex(np.exp((p["f1"] + p["f2"]) / 2))
    mag = abs(f6) ** (2 * m_v) * abs(f4) ** (2 * m_a)
    coeff = math.factorial(m_s) / (math.factorial(m_v) * math.factorial(m_a))
    prob = coeff * mag * abs(norm) ** 2
    printed = (math.factorial(m_a) / (math.factorial(m_s) * math.factorial(m_s - m_a))
               * abs(f4) ** (2 * m_v) * abs(f6) ** (2 * m_a))
    return TransitionResult((0, 0, 0), final, t, float(prob), float(printed), norm)


def raman_transition(spec: ModelSpec, initial: Sequence[int], final: Sequence[int], t: float) -> TransitionResult:
    initial, final = _check_states(spec, initial, final, Model.RAMAN)
    if initial != (0, 0, 0):
        return TransitionResult(initial, final, t, math.nan,
                                note="closed form covers the vacuum initial state only")
    return raman_from_vacuum(*final, spec, t)


# three-mode su(3) coupler ---------------------------------------------------

def su3_transition(spec: ModelSpec, initial: Sequence[int], final: Sequence[int], t: float) -> TransitionResult:
    """Number-state transition through the spectral-weight su(3) mode map."""
    initial, final = _check_states(spec, initial, final, Model.SU3)
    u = dis.su3_exponential(su3_matrix(*spec.couplings), t)
    amp = passive_amplitude(u, final, initial)
    note = "" if sum(initial) == sum(final) else "photon number not conserved"
    return TransitionResult(initial, final, t, abs(amp) ** 2, note=note)


# dispatch and oracle ----------------------------------------------------------

def _check_states(spec, initial, final, model):
    if spec.model_id is not model:
        raise ModelError(f"expected a {model.value} model, got {spec.model_id.value}")
    initial, final = tuple(int(n) for n in initial), tuple(int(n) for n in final)
    arity = len(spec.modes)
    if len(initial) != arity or len(final) != arity:
        raise ModelError(f"{model.value} states need {arity} occupations")
    if min(initial + final) < 0:
        raise ModelError("occupations must be non-negative")
    return initial, final


_CLOSED = {Model.FC: fc_transition, Model.PA: pa_transition,
           Model.RAMAN: raman_transition, Model.SU3: su3_transition}


def closed_transition(spec: ModelSpec, initial: Sequence[int], final: Sequence[int], t: float) -> TransitionResult:
    return _CLOSED[spec.model_id](spec, initial, final, t)


DEFAULT_NMAX = {Model.FC: 8, Model.PA: 60, Model.RAMAN: 14, Model.SU3: 4}


def default_nmax(spec: ModelSpec, initial: Sequence[int], final: Sequence[int]) -> int:
    """Default truncation, raised for number-conserving models so the states fit."""
    n = DEFAULT_NMAX[spec.model_id]
    if spec.model_id in (Model.FC, Model.SU3):
        n = max(n, sum(initial), sum(final), 1)
    return max(n, max(initial) + 2, max(final) + 2)


@lru_cache(maxsize=16)
def _oracle(spec: ModelSpec, n_max: int, t: float) -> fock.Propagator:
    basis = fock.build_basis(len(spec.modes), n_max, spec.modes)
    return fock.evolve_interaction(spec, basis, t)


@lru_cache(maxsize=16)
def _oracle_stepped(spec: ModelSpec, n_max: int, t: float, dt: float) -> fock.Propagator:
    basis = fock.build_basis(len(spec.modes), n_max, spec.modes)
    steps = max(1, round(t / dt))
    if t == 0:
        return fock.evolve_interaction(spec, basis, 0.0)
    return fock.evolve_timedep(spec, basis, t, t / steps)


def oracle_probability(spec: ModelSpec, initial: Sequence[int], final: Sequence[int], t: float,
                       n_max: int | None = None, dt: float | None = None) -> float:
    """``|<final| U |initial>|^2`` from the truncated Fock-space propagator.

    The free evolution and the frame shift are diagonal, so the
    interaction-frame propagator gives the same probabilities. With ``dt``
    the lab-frame Hamiltonian is stepped instead (step rounded so it
    divides ``t``).
    """
    if n_max is None:
        n_max = default_nmax(spec, initial, final)
    if dt is not None:
        u = _oracle_stepped(spec, int(n_max), float(t), float(dt))
    else:
        u = _oracle(spec, int(n_max), float(t))
    return abs(fock.amplitude(u, final, initial, u.basis)) ** 2


def transition(spec: ModelSpec, initial: Sequence[int], final: Sequence[int], t: float,
               n_max: int | None = None, oracle: bool = True, dt: float | None = None) -> TransitionResult:
    res = closed_transition(spec, initial, final, t)
    if oracle:
        res = res.with_oracle(oracle_probability(spec, res.initial, res.final, t, n_max, dt))
    return res
