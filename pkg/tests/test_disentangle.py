import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadlie import smallmat
from quadlie.algebra import Group, assemble, generators
from quadlie.disentangle import (
    FACTOR_ORDER, FactoredForm, disentangle, disentangle_rank1, disentangle_su21,
    disentangle_su21_matrix, disentangle_su3, printed_rank1, rank1_exponential,
    su21_eigen_quotients, sweep, track_branches, verify_factorization,
)
from quadlie.errors import SingularityError, StructuralError
from quadlie.models import frequency_converter, parametric_amplifier, raman, reduce, su3_matrix, su3_model

GROUPS = list(Group)


def random_coeffs(group, seed, bound=2.0):
    rng = np.random.default_rng(seed)
    gset = generators(group)
    c = {n: complex(*rng.normal(size=2)) for n in gset.names}
    scale = bound * rng.uniform(0.05, 1.0) / np.linalg.norm(assemble(c, gset), 2)
    return {n: v * scale for n, v in c.items()}


def direct(group, coeffs):
    return smallmat.expm(assemble(coeffs, generators(group)), method="series")


@pytest.mark.parametrize("group", GROUPS, ids=lambda g: g.value)
@given(seed=st.integers(0, 2**32 - 1))
def test_master_identity(group, seed):
    coeffs = random_coeffs(group, seed)
    f = disentangle(group, coeffs)
    assert [n for n, _ in f.factors] == list(FACTOR_ORDER[group])
    assert verify_factorization(f, direct(group, coeffs)) < 1e-10


@pytest.mark.parametrize("group", GROUPS, ids=lambda g: g.value)
def test_zero_coefficients_give_identity(group):
    f = disentangle(group, {})
    assert all(c == 0 for _, c in f.factors)
    assert verify_factorization(f, np.eye(generators(group).dim)) == 0


def test_rank1_su2_rotation():
    theta = 0.7
    f = disentangle_rank1("su2", 0, -1j * theta, -1j * theta)
    assert f.coeff("J3") == pytest.approx(2 * math.log(1 / math.cos(theta)))
    assert f.coeff("J-") == pytest.approx(-1j * math.tan(theta))
    assert f.coeff("J+") == pytest.approx(-1j * math.tan(theta))


def test_printed_rank1_has_half_the_lowering_coefficient():
    theta = 0.7
    p = printed_rank1("su2", 0, -1j * theta, -1j * theta)
    assert p.coeff("J-") == pytest.approx(-0.5j * math.tan(theta))
    assert verify_factorization(p, rank1_exponential("su2", 0, -1j * theta, -1j * theta)) > 0.1


@pytest.mark.parametrize("kt", [0.1, 0.9, 2.5])
def test_rank1_su11_amplifier(kt):
    f = disentangle_rank1("su11", 0, -1j * kt, -1j * kt)
    u = smallmat.expm(assemble({"K+": -1j * kt, "K-": -1j * kt}, generators(Group.SU11)), method="series")
    assert verify_factorization(f, u) < 1e-12
    assert f.coeff("K3") == pytest.approx(-2 * math.log(math.cosh(kt)))


def test_rank1_small_f_limit():
    f = disentangle_rank1("su2", 1e-9, 1e-9, 0)
    assert f.coeff("J+") == pytest.approx(1e-9, rel=1e-6)


def test_rank1_singular_point_reports_time():
    with pytest.raises(SingularityError) as err:
        disentangle_rank1("su2", 0, -1j * math.pi / 2, -1j * math.pi / 2, t=1.5)
    assert err.value.t == 1.5


def test_rank1_rejects_other_groups():
    with pytest.raises(StructuralError):
        disentangle_rank1("su3", 0, 0, 0)


def test_su21_zero_form():
    f = disentangle_su21(reduce(raman(0, 0)), 1.0)
    assert all(abs(c) < 1e-15 for _, c in f.factors)


def test_su21_worked_example():
    form = reduce(raman(1, 1, 2, 1))
    t = 0.7
    f = disentangle_su21(form, t)
    assert f.coeff("C") == 0
    assert verify_factorization(f, smallmat.expm(form.exponent(t))) < 1e-10
    f4, f6 = su21_eigen_quotients(form, t)
    assert abs(f4 - f.params["f4"]) < 1e-9
    assert abs(f6 - f.params["f6"]) < 1e-9


def _quotients(es, t, perm):
    e = np.exp(es.eigenvalues[perm] * t)
    left = es.left[perm]
    right = es.right[:, perm]
    w = left[:, 2] * e
    den = np.sum(right[2] * w)
    return np.sum(right[1] * w) / den, np.sum(right[0] * w) / den


def test_su21_quotients_permutation_invariant():
    form = reduce(raman(1, 1, 2, 1))
    es = smallmat.eig(assemble(form.rates, generators(Group.SU21)))
    base = _quotients(es, 0.7, [0, 1, 2])
    for perm in itertools.permutations(range(3)):
        np.testing.assert_allclose(_quotients(es, 0.7, list(perm)), base, rtol=1e-12)


@given(w3=st.floats(-1, 1), re=st.floats(-1, 1), im=st.floats(-1, 1))
def test_su21_reduces_to_su11_without_anti_stokes(w3, re, im):
    wp, wm = complex(re, im), complex(im, -re)
    f = disentangle_su21_matrix({"D": wp, "E": wm, "F": w3})
    g = disentangle_rank1("su11", w3, wp, wm)
    assert f.params["f6"] == pytest.approx(g.coeff("K+"), abs=1e-10)
    assert f.params["f5"] == pytest.approx(g.coeff("K-"), abs=1e-10)
    diff = (f.params["f2"] - g.coeff("K3")) / (4j * math.pi)
    assert abs(diff - round(diff.real)) < 1e-10
    assert f.params["f4"] == 0


def test_su21_stokes_free_block_matches_rank1():
    # g_s = 0: only the (v, a) block evolves, as an su(2) rotation
    form = reduce(raman(0, 1))
    assert set(k for k, v in form.rates.items() if v) <= {"A", "B", "K", "F"}


@given(w3=st.floats(-1, 1), re=st.floats(-1, 1), im=st.floats(-1, 1))
def test_su21_reduces_to_su2_without_stokes(w3, re, im):
    wp, wm = complex(re, im), complex(-re, im)
    f = disentangle_su21_matrix({"A": wp, "B": wm, "C": w3})
    g = disentangle_rank1("su2", w3, wp, wm)
    assert f.params["f8"] == pytest.approx(g.coeff("J+"), abs=1e-10)
    assert f.params["f7"] == pytest.approx(g.coeff("J-"), abs=1e-10)
    diff = (f.params["f2"] - g.coeff("J3")) / (4j * math.pi)
    assert abs(diff - round(diff.real)) < 1e-10
    assert f.params["f6"] == 0 and f.params["f4"] == 0


def test_su3_zero():
    f = disentangle_su3(np.zeros((3, 3)))
    assert all(c == 0 for _, c in f.factors)
    assert cmath.exp(f.params["ln_delta"]) == 1 and cmath.exp(f.params["ln_epsilon"]) == 1


def test_su3_block_rotation():
    f = disentangle_su3(su3_matrix(1.0, 0.0, 0.0), math.pi / 4)
    for name in ("D", "E", "G", "J"):
        assert abs(f.coeff(name)) < 1e-15
    assert verify_factorization(f, smallmat.expm(su3_matrix(1, 0, 0), math.pi / 4)) < 1e-12


@given(seed=st.integers(0, 2**32 - 1))
def test_su3_random_antisymmetric(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(3, 3))
    m = a - a.T
    m *= rng.uniform(0.05, 1.0) / np.linalg.norm(m, 2)
    f = disentangle_su3(m)
    assert verify_factorization(f, smallmat.expm(m, method="series")) < 1e-10


def test_verify_identity():
    f = FactoredForm(Group.SU2, (("J+", 0j), ("J3", 0j), ("J-", 0j)))
    assert verify_factorization(f, np.eye(2)) == 0


@pytest.mark.parametrize("spec,t_end", [
    (parametric_amplifier(2.0, 2.0), 3.0),
    (raman(1, 1, 2, 1), 3.0),
    (raman(0.6, 0.4, 0.3, 0.1), 3.0),
    # the real pivot of this rotation changes sign near t = 1.69
    (su3_model(0.5, -0.3, 0.8), 1.6),
], ids=["pa", "raman-a", "raman-b", "su3"])
def test_branch_continuity_along_sweep(spec, t_end):
    times = np.arange(0.0, t_end, 0.01)
    forms = sweep(reduce(spec), times)
    logs = np.array([f.pivot_logs for f in forms])
    assert np.abs(np.diff(logs, axis=0)).max() < math.pi
    for f, t in zip(forms[::37], times[::37]):
        assert verify_factorization(f, smallmat.expm(reduce(spec).exponent(t))) < 1e-10


def test_track_branches_removes_jump():
    forms = [disentangle_rank1("su11", -1j * d * t, -1j * 0.1 * t, -1j * 0.1 * t)
             for d, t in [(1.0, x) for x in np.arange(0, 8, 0.05)]]
    raw = np.array([f.pivot_logs[0] for f in forms])
    assert np.abs(np.diff(raw.imag)).max() > math.pi
    tracked = np.array([f.pivot_logs[0] for f in track_branches(forms)])
    assert np.abs(np.diff(tracked)).max() < math.pi
    np.testing.assert_allclose(np.exp(tracked), np.exp(raw), atol=1e-12)


def test_su3_pivot_sign_change_is_a_jump_of_pi():
    forms = sweep(reduce(su3_model(0.5, -0.3, 0.8)), [1.6, 1.8])
    jump = forms[1].pivot_logs[0] - forms[0].pivot_logs[0]
    assert abs(abs(jump.imag) - math.pi) < 1e-12
