"""Ordered-exponential factorizations for quadratic bosonic Hamiltonians.

Closed-form transition probabilities for a two-mode frequency converter
(su(2)), a parametric amplifier (su(1,1)), three-mode Raman scattering
(su(2,1)) and a three-mode su(3) coupler, with a truncated Fock-space
reference propagator to check them against.
"""
# the dispatching ``disentangle.disentangle`` is not re-exported: binding it
# here would shadow the ``quadlie.disentangle`` submodule
from ._backend import NAME as BACKEND
from .algebra import Group, GeneratorSet, assemble, check_relations, commutator_table, generators
from .disentangle import (
    FactoredForm, disentangle_rank1, disentangle_su3, disentangle_su21,
    printed_rank1, track_branches, verify_factorization,
)
from .errors import (
    CapacityError, DegeneracyError, ModelError, QuadlieError, SingularityError, StructuralError,
)
from .fock import FockBasis, amplitude, build_basis, evolve_interaction, evolve_timedep
from .models import (
    InteractionForm, Model, ModelSpec, frequency_converter, parametric_amplifier, raman, reduce,
    su3_model,
)
from .smallmat import eig, expm, spectral_weights
from .transition import (
    Regime, TransitionResult, fc_swap_probability, pa_regime, pa_vac_to_11_probability,
    raman_from_vacuum,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Group", "GeneratorSet", "assemble", "check_relations", "commutator_table",
    "generators", "FactoredForm", "disentangle_rank1", "disentangle_su3",
    "disentangle_su21", "printed_rank1", "track_branches", "verify_factorization",
    "CapacityError", "DegeneracyError", "ModelError", "QuadlieError", "SingularityError",
    "StructuralError", "FockBasis", "amplitude", "build_basis", "evolve_interaction",
    "evolve_timedep", "InteractionForm", "Model", "ModelSpec", "frequency_converter",
    "parametric_amplifier", "raman", "reduce", "su3_model", "eig", "expm", "spectral_weights",
    "Regime", "TransitionResult", "fc_swap_probability", "pa_regime", "pa_vac_to_11_probability",
    "raman_from_vacuum",
]
