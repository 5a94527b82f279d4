import numpy as np
import pytest
import scipy.linalg
import scipy.sparse as sp

from quadlie import fock
from quadlie.algebra import Group
from quadlie.errors import CapacityError
from quadlie.models import (
    frequency_converter, interaction_hamiltonian, parametric_amplifier, raman,
)
from quadlie.transition import fc_swap_probability


def test_basis_small():
    b = fock.build_basis(2, 1)
    assert [b.state(i) for i in range(b.dim)] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert fock.build_basis(3, 2).dim == 27


def test_basis_roundtrip():
    b = fock.build_basis(2, 60)
    assert b.dim == 3721
    assert all(b.index(b.state(i)) == i for i in range(b.dim))


def test_basis_errors():
    with pytest.raises(CapacityError):
        fock.build_basis(3, 60, cap=1000)
    with pytest.raises(IndexError):
        fock.build_basis(2, 3).index((4, 0))
    with pytest.raises(ValueError):
        fock.build_basis(4, 2)


def test_ladder_elements():
    b = fock.build_basis(2, 4)
    n_a = fock.operator_matrix("a+ a", b)
    np.testing.assert_allclose(n_a.diagonal(), b.states[:, 0])
    jp = fock.operator_matrix("a+ b", b)
    assert jp[b.index((2, 2)), b.index((1, 3))] == pytest.approx(np.sqrt(2 * 3))
    # creation at the cap is truncated
    assert fock.operator_matrix("a+", b)[:, b.index((4, 0))].nnz == 0


def test_su2_commutator_exact_on_number_block():
    b = fock.build_basis(2, 5)
    jp, jm = (fock.generator_operator(Group.SU2, n, b) for n in ("J+", "J-"))
    j3 = fock.generator_operator(Group.SU2, "J3", b)
    block = b.states.sum(axis=1) <= 5
    diff = (jp @ jm - jm @ jp - 2 * j3)[block][:, block]
    assert abs(diff).max() < 1e-13


def test_su11_commutator_needs_constant():
    b = fock.build_basis(2, 6)
    kp, km = fock.operator_matrix("a+ b+", b), fock.operator_matrix("a b", b)
    inner = b.interior(1)
    comm = (kp @ km - km @ kp)[inner]
    expected = -(fock.operator_matrix("a+ a", b) + fock.operator_matrix("b+ b", b)
                 + sp.identity(b.dim))[inner]
    assert abs(comm - expected).max() < 1e-12


def test_evolution_identity_at_zero_and_unitary():
    spec = parametric_amplifier(0.7, 0.2)
    b = fock.build_basis(2, 10, spec.modes)
    u = fock.evolve_interaction(spec, b, 0.0)
    np.testing.assert_allclose(u.toarray(), np.eye(b.dim), atol=1e-14)
    u = fock.evolve_interaction(spec, b, 1.3)
    assert u.unitarity_deficit() < 1e-12


def test_converter_single_photon_swap():
    spec = frequency_converter(0.9, 0.0)
    b = fock.build_basis(2, 3, spec.modes)
    t = 0.7
    u = fock.evolve_interaction(spec, b, t)
    assert abs(fock.amplitude(u, (0, 1), (1, 0), b)) ** 2 == pytest.approx(np.sin(0.9 * t) ** 2, abs=1e-14)
    assert abs(fock.amplitude(u, (0, 3), (3, 0), b)) ** 2 == pytest.approx(
        fc_swap_probability(3, 0.9, 0.0, t), abs=1e-9)


def test_matches_dense_expm():
    spec = raman(0.4, 0.3, 0.2, -0.1)
    b = fock.build_basis(3, 3, spec.modes)
    h = fock.terms_matrix(interaction_hamiltonian(spec), b)
    u = fock.evolve_hamiltonian(h, b, 0.9).toarray()
    np.testing.assert_allclose(u, scipy.linalg.expm(-0.9j * h.toarray()), atol=1e-12)


def test_amplitude_identity():
    b = fock.build_basis(2, 2)
    eye = np.eye(b.dim)
    assert fock.amplitude(eye, (1, 1), (1, 1), b) == 1
    assert fock.amplitude(eye, (1, 0), (1, 1), b) == 0


def test_amplifier_column_norm_within_deficit():
    spec = parametric_amplifier(0.5, 0.0)
    b = fock.build_basis(2, 30, spec.modes)
    u = fock.evolve_interaction(spec, b, 1.0)
    col = u.column(b.index((0, 0)))
    assert abs(np.sum(np.abs(col) ** 2) - 1) < 1e-12
    assert fock.truncation_deficit(u, (0, 0)) < 1e-10


def test_raman_conserved_charge_exact():
    spec = raman(0.6, 0.4, 0.3, 0.1)
    b = fock.build_basis(3, 6, spec.modes)
    h = fock.terms_matrix(interaction_hamiltonian(spec), b)
    q = sp.diags((b.states @ np.array([1, -1, 1])).astype(float))
    comm = (h @ q - q @ h)[b.interior(1)]
    assert abs(comm).max() == 0


def test_hamiltonians_hermitian():
    for spec in (frequency_converter(1, 2), parametric_amplifier(1, 2), raman(1, 2, 3, 4)):
        b = fock.build_basis(len(spec.modes), 3, spec.modes)
        h = fock.terms_matrix(interaction_hamiltonian(spec), b)
        assert abs(h - h.conj().T).max() == 0


def test_truncation_monotone():
    spec = raman(0.3, 0.2, 0.1, 0.05)
    amps, deficits = [], []
    for n in (6, 8, 10):
        b = fock.build_basis(3, n, spec.modes)
        u = fock.evolve_interaction(spec, b, 1.0)
        amps.append(fock.amplitude(u, (1, 1, 0), (0, 0, 0), b))
        deficits.append(fock.truncation_deficit(u, (0, 0, 0)))
    assert abs(amps[1] - amps[2]) <= deficits[0] + 1e-14
    assert abs(amps[0] - amps[1]) <= deficits[0] + 1e-14


def test_timedep_identity_and_step_check():
    spec = frequency_converter(1.0, 0.5)
    b = fock.build_basis(2, 2, spec.modes)
    with pytest.raises(ValueError):
        fock.evolve_timedep(spec, b, 1.0, 0.3)
    u = fock.evolve_timedep(spec, b, 0.0, 0.1)
    np.testing.assert_allclose(u.toarray(), np.eye(b.dim))


def test_sector_matches_full_basis():
    spec = parametric_amplifier(0.8, 0.3)
    sec = fock.build_sector(interaction_hamiltonian(spec), spec.modes, (0, 0), 20)
    assert len(sec.states) == 21
    b = fock.build_basis(2, 20, spec.modes)
    u = fock.evolve_interaction(spec, b, 1.1)
    col = sec.evolve((0, 0), 1.1)
    for s in ((0, 0), (1, 1), (5, 5)):
        assert col[sec.index(s)] == pytest.approx(fock.amplitude(u, s, (0, 0), b), abs=1e-12)
