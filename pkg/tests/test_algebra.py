from fractions import Fraction

import numpy as np
import pytest

from quadlie.algebra import (
    Group, GeneratorSet, assemble, check_relations, commutator_table, exact_commutator, generators,
)
from quadlie.errors import StructuralError


def expansion(gset, x, y):
    return dict(gset.structure_constants[(x, y)])


def test_su2_matrices():
    g = generators(Group.SU2)
    np.testing.assert_array_equal(g.matrix("J-"), [[0, 0], [1, 0]])
    np.testing.assert_array_equal(g.matrix("J+"), [[0, 1], [0, 0]])
    np.testing.assert_array_equal(g.matrix("J3"), np.diag([0.5, -0.5]))


def test_su11_lowering_has_flipped_sign():
    np.testing.assert_array_equal(generators("su11").matrix("K-"), [[0, 0], [-1, 0]])


@pytest.mark.parametrize("group,x,y,expected", [
    (Group.SU2, "J+", "J-", {"J3": 2}),
    (Group.SU2, "J3", "J+", {"J+": 1}),
    (Group.SU11, "K+", "K-", {"K3": -2}),
    (Group.SU21, "A", "B", {"C": 2}),
    (Group.SU21, "D", "E", {"F": -2}),
    (Group.SU21, "G", "J", {"K": -2}),
    (Group.SU3, "A", "B", {"C": 2}),
    (Group.SU3, "D", "E", {"F": 2}),
    (Group.SU3, "A", "G", {"D": 1}),
])
def test_reference_commutators(group, x, y, expected):
    assert expansion(generators(group), x, y) == {k: Fraction(v) for k, v in expected.items()}


@pytest.mark.parametrize("group", list(Group))
def test_self_commutators_vanish(group):
    g = generators(group)
    for n in g.names:
        assert expansion(g, n, n) == {}


@pytest.mark.parametrize("group", list(Group))
def test_table_recomputes_stored_constants(group):
    g = generators(group)
    assert commutator_table(g) == dict(g.structure_constants)
    assert all(ok for _, ok in check_relations(group))


def test_su21_diagonal_identity():
    g = generators(Group.SU21)
    lhs = [[g.exact["F"][i][j] - g.exact["C"][i][j] for j in range(3)] for i in range(3)]
    assert tuple(map(tuple, lhs)) == g.exact["K"]


@pytest.mark.parametrize("group", list(Group))
def test_jacobi_identity_exact(group):
    g = generators(group)
    m = g.exact
    names = g.names
    for x in names:
        for y in names:
            for z in names:
                a = exact_commutator(m[x], exact_commutator(m[y], m[z]))
                b = exact_commutator(m[y], exact_commutator(m[z], m[x]))
                c = exact_commutator(m[z], exact_commutator(m[x], m[y]))
                assert all(a[i][j] + b[i][j] + c[i][j] == 0
                           for i in range(len(a)) for j in range(len(a)))


def test_mismatched_dimensions_raise():
    g = generators(Group.SU2)
    bad = GeneratorSet(Group.SU2, ("J+", "X"),
                       {"J+": g.exact["J+"], "X": tuple(tuple(Fraction(0) for _ in range(3))
                                                        for _ in range(3))}, {})
    with pytest.raises(StructuralError):
        commutator_table(bad)


def test_assemble():
    g = generators(Group.SU2)
    np.testing.assert_array_equal(assemble({"J+": 1, "J-": 1}, g), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(assemble({}, g), np.zeros((2, 2)))
    with pytest.raises(KeyError):
        assemble({"Q": 1}, g)


def test_assemble_raman_matrix():
    # g_s = g_a = 1, no detunings: -(D + E) - (A + B) in the (v, a, s) ordering
    g = generators(Group.SU21)
    m = assemble({"D": -1, "E": -1, "A": -1, "B": -1}, g)
    np.testing.assert_array_equal(m, [[0, -1, -1], [-1, 0, 0], [1, 0, 0]])


def test_assemble_is_linear(rng):
    g = generators(Group.SU3)
    a = {n: complex(*rng.normal(size=2)) for n in g.names}
    b = {n: complex(*rng.normal(size=2)) for n in g.names}
    s = {n: 2 * a[n] - 3j * b[n] for n in g.names}
    np.testing.assert_allclose(assemble(s, g), 2 * assemble(a, g) - 3j * assemble(b, g), atol=1e-14)
