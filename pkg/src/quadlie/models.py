"""Physical models and their reduction to time-independent generator rates.

Each model is a lab-frame Hamiltonian with explicit harmonic time
dependence. Moving to the frame of a diagonal ``H0`` removes that time
dependence; what remains is a constant interaction Hamiltonian that is a
linear combination of Lie-algebra generators (plus scalars).

Conventions: hbar = 1; every frequency is in rad per unit time. Kets are
ordered ``|n_a, n_b>`` for the two-mode models, ``|n_v, n_s, n_a>`` for
Raman scattering and ``|n_b, n_a, n_c>`` for the su(3) model (the mode
order of the su(3) defining representation).

Terms are ``(coefficient, expression)`` pairs where an expression is a
space-separated product of ladder symbols, ``"x+"`` creating a quantum in
mode ``x`` and ``"x"`` destroying one; ``""`` is the identity.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from .algebra import Group, assemble, generators
from .errors import ModelError


class Model(str, enum.Enum):
    FC = "fc"
    PA = "pa"
    RAMAN = "raman"
    SU3 = "su3"


MODES = {
    Model.FC: ("a", "b"),
    Model.PA: ("a", "b"),
    Model.RAMAN: ("v", "s", "a"),
    Model.SU3: ("b", "a", "c"),
}

GROUP = {Model.FC: Group.SU2, Model.PA: Group.SU11, Model.RAMAN: Group.SU21, Model.SU3: Group.SU3}


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of one model.

    ``frequencies`` are the lab-frame mode frequencies in ``MODES`` order,
    ``couplings`` are ``(k,)``, ``(g_s, g_a)`` or ``(g1, g2, g3)`` and
    ``detunings`` are ``(delta,)``, ``(k_s, k_a)`` or ``()``.
    """

    model_id: Model
    frequencies: tuple[float, ...]
    couplings: tuple[float, ...]
    detunings: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "model_id", Model(self.model_id))
        n_modes = len(MODES[self.model_id])
        n_coup, n_det = {
            Model.FC: (1, 1), Model.PA: (1, 1), Model.RAMAN: (2, 2), Model.SU3: (3, 0)
        }[self.model_id]
        for name, values, n in (
            ("frequencies", self.frequencies, n_modes),
            ("couplings", self.couplings, n_coup),
            ("detunings", self.detunings, n_det),
        ):
            if len(values) != n:
                raise ModelError(f"{self.model_id.value}: expected {n} {name}, got {len(values)}")
            for v in values:
                if isinstance(v, complex) or not math.isfinite(v):
                    raise ModelError(f"{self.model_id.value}: {name} must be finite reals, got {v!r}")
            object.__setattr__(self, name, tuple(float(v) for v in values))

    @property
    def modes(self) -> tuple[str, ...]:
        return MODES[self.model_id]

    @property
    def group(self) -> Group:
        return GROUP[self.model_id]


def frequency_converter(k, delta, omega_a=3.0, omega_b=1.0) -> ModelSpec:
    return ModelSpec(Model.FC, (omega_a, omega_b), (k,), (delta,))


def parametric_amplifier(k, delta, omega_a=3.0, omega_b=1.0) -> ModelSpec:
    return ModelSpec(Model.PA, (omega_a, omega_b), (k,), (delta,))


def raman(g_s, g_a, k_s=0.0, k_a=0.0, omega_v=1.0, omega_s=2.0, omega_a=4.0) -> ModelSpec:
    return ModelSpec(Model.RAMAN, (omega_v, omega_s, omega_a), (g_s, g_a), (k_s, k_a))


def su3_model(g1, g2, g3) -> ModelSpec:
    return ModelSpec(Model.SU3, (0.0, 0.0, 0.0), (g1, g2, g3), ())


def pump_frequency(spec: ModelSpec) -> float | tuple[float, float]:
    """Pump frequency implied by the effective detuning (per process for Raman)."""
    w = spec.frequencies
    if spec.model_id is Model.FC:
        return w[0] - w[1] - spec.detunings[0]
    if spec.model_id is Model.PA:
        return w[0] + w[1] - spec.detunings[0]
    if spec.model_id is Model.RAMAN:
        (wv, ws, wa), (ks, ka) = w, spec.detunings
        return (ws + wv - ks, wa - wv - ka)
    return 0.0


# Hamiltonians in ladder form --------------------------------------------------

Term = tuple[complex, str]
TimeTerm = tuple[Callable[[float], complex], str]


def _const(c):
    return lambda t: c


def free_frequencies(spec: ModelSpec) -> tuple[float, ...]:
    """Per-mode frequencies of the diagonal frame Hamiltonian ``H0``."""
    w = spec.frequencies
    if spec.model_id is Model.FC:
        d = spec.detunings[0]
        return (w[0] - d / 2, w[1] + d / 2)
    if spec.model_id is Model.PA:
        d = spec.detunings[0]
        return (w[0] - d / 2, w[1] - d / 2)
    if spec.model_id is Model.RAMAN:
        ks, ka = spec.detunings
        return (w[0], w[1] - ks, w[2] - ka)
    return (0.0, 0.0, 0.0)


def interaction_hamiltonian(spec: ModelSpec) -> list[Term]:
    """The constant interaction-frame Hamiltonian, written in ladder operators."""
    if spec.model_id is Model.FC:
        (k,), (d,) = spec.couplings, spec.detunings
        return [(d / 2, "a+ a"), (-d / 2, "b+ b"), (k, "a+ b"), (k, "b+ a")]
    if spec.model_id is Model.PA:
        (k,), (d,) = spec.couplings, spec.detunings
        return [(d / 2, "a+ a"), (d / 2, "b+ b"), (k, "a+ b+"), (k, "a b")]
    if spec.model_id is Model.RAMAN:
        (gs, ga), (ks, ka) = spec.couplings, spec.detunings
        return [
            (ks, "s+ s"), (ka, "a+ a"),
            (-gs, "s+ v+"), (-gs, "s v"),
            (-ga, "a+ v"), (-ga, "v+ a"),
        ]
    g1, g2, g3 = spec.couplings
    # modes (b, a, c); i g1 (a b+ - b a+) + i g3 (c b+ - b c+) + i g2 (c a+ - a c+)
    return [
        (1j * g1, "b+ a"), (-1j * g1, "a+ b"),
        (1j * g3, "b+ c"), (-1j * g3, "c+ b"),
        (1j * g2, "a+ c"), (-1j * g2, "c+ a"),
    ]


def lab_hamiltonian(spec: ModelSpec) -> list[TimeTerm]:
    """The original, explicitly time-dependent Hamiltonian."""
    w = spec.frequencies
    modes = spec.modes
    terms: list[TimeTerm] = [(_const(w[i]), f"{m}+ {m}") for i, m in enumerate(modes) if w[i]]
    if spec.model_id is Model.FC:
        (k,), nu = spec.couplings, pump_frequency(spec)
        terms += [
            (lambda t: k * cmath.exp(-1j * nu * t), "a+ b"),
            (lambda t: k * cmath.exp(1j * nu * t), "b+ a"),
        ]
    elif spec.model_id is Model.PA:
        (k,), nu = spec.couplings, pump_frequency(spec)
        terms += [
            (lambda t: k * cmath.exp(-1j * nu * t), "a+ b+"),
            (lambda t: k * cmath.exp(1j * nu * t), "a b"),
        ]
    elif spec.model_id is Model.RAMAN:
        (gs, ga), (nu_s, nu_a) = spec.couplings, pump_frequency(spec)
        terms += [
            (lambda t: -gs * cmath.exp(-1j * nu_s * t), "s+ v+"),
            (lambda t: -gs * cmath.exp(1j * nu_s * t), "s v"),
            (lambda t: -ga * cmath.exp(-1j * nu_a * t), "a+ v"),
            (lambda t: -ga * cmath.exp(1j * nu_a * t), "v+ a"),
        ]
    else:
        terms += [(_const(c), e) for c, e in interaction_hamiltonian(spec)]
    return terms


# reduction to generator rates ------------------------------------------------

@dataclass(frozen=True)
class InteractionForm:
    """Generator content of the interaction-frame propagator.

    With ``G`` the generator operators (their scalar parts included)::

        U_I(t) = exp(i t I) * exp(scalar_rate * t) * exp(t * sum(rates[g] * G))

    where ``I`` is the diagonal operator ``sum(shift[k] * n_k)`` (nonzero
    only for Raman scattering). ``rates`` already carry the ``-i``.
    """

    group: Group
    rates: Mapping[str, complex]
    free_frequencies: tuple[float, ...]
    scalar_rate: complex = 0j
    shift: tuple[float, ...] = field(default=())
    modes: tuple[str, ...] = ()

    def exponent(self, t: float) -> np.ndarray:
        """Matrix-representation exponent ``t * sum(rates[g] * M_g)``."""
        return assemble({g: c * t for g, c in self.rates.items()}, generators(self.group))

    def prefactor(self, t: float) -> complex:
        return cmath.exp(self.scalar_rate * t)


def raman_shift_frequency(spec: ModelSpec) -> float:
    """Frequency of the conserved diagonal operator folded out of the Raman H."""
    ks, ka = spec.detunings
    return (ks - ka) / 3.0


def reduce(spec: ModelSpec) -> InteractionForm:
    """Generator rates of the interaction-frame Hamiltonian of ``spec``."""
    model = spec.model_id
    free = free_frequencies(spec)
    if model is Model.FC:
        (k,), (d,) = spec.couplings, spec.detunings
        return InteractionForm(
            Group.SU2, {"J3": -1j * d, "J+": -1j * k, "J-": -1j * k}, free, modes=spec.modes
        )
    if model is Model.PA:
        # (d/2)(n_a + n_b) = d*K3 - d/2 with K3 = (n_a + n_b + 1)/2
        (k,), (d,) = spec.couplings, spec.detunings
        return InteractionForm(
            Group.SU11, {"K3": -1j * d, "K+": -1j * k, "K-": -1j * k}, free,
            scalar_rate=1j * d / 2, modes=spec.modes,
        )
    if model is Model.RAMAN:
        (gs, ga), (ks, ka) = spec.couplings, spec.detunings
        w = raman_shift_frequency(spec)
        # H_I + w (n_v + n_a - n_s) = alpha K + beta F - (alpha + beta)/2 - gs (D + E) - ga (A + B)
        alpha = (4 * ka + 2 * ks) / 3
        beta = 2 * w
        rates = {
            "K": -1j * alpha, "F": -1j * beta,
            "D": 1j * gs, "E": 1j * gs, "A": 1j * ga, "B": 1j * ga,
        }
        return InteractionForm(
            Group.SU21, rates, free, scalar_rate=1j * (alpha + beta) / 2,
            shift=(w, -w, w), modes=spec.modes,
        )
    g1, g2, g3 = spec.couplings
    rates = {"A": g1, "B": -g1, "D": g3, "E": -g3, "G": g2, "J": -g2}
    return InteractionForm(Group.SU3, {k: complex(v) for k, v in rates.items()}, free,
                           modes=spec.modes)


def su3_matrix(g1, g2, g3) -> np.ndarray:
    """Real antisymmetric generator ``[[0, g1, g3], [-g1, 0, g2], [-g3, -g2, 0]]``."""
    return np.array([[0.0, g1, g3], [-g1, 0.0, g2], [-g3, -g2, 0.0]], dtype=complex)


# frame phases ------------------------------------------------------------------

class PhaseModulus(NamedTuple):
    modulus: float
    diagonal: bool


def frame_phase(spec: ModelSpec, state: Sequence[int], t: float) -> complex:
    """Phase of ``<n| U0(t) exp(i t I) |n>``, the diagonal part of the propagator."""
    form = reduce(spec)
    shift = form.shift or (0.0,) * len(state)
    energy = sum((f - s) * n for f, s, n in zip(form.free_frequencies, shift, state))
    return cmath.exp(-1j * energy * t)


def free_phase_modulus(spec: ModelSpec, final: Sequence[int], t: float,
                       initial: Sequence[int] | None = None) -> PhaseModulus:
    """``|<m| U0(t) exp(i t I) |n>|``; both operators are diagonal in Fock space.

    Returns modulus 1 for ``m == n`` and 0 (flagged non-diagonal) otherwise.
    """
    if len(final) != len(spec.modes) or (initial is not None and len(initial) != len(final)):
        raise ModelError("state arity does not match the model")
    if initial is not None and tuple(initial) != tuple(final):
        return PhaseModulus(0.0, False)
    return PhaseModulus(1.0, True)
