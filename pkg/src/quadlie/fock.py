"""Brute-force reference propagators on a truncated multi-mode Fock space.

Operators are assembled from ladder symbols only, so nothing here depends
on the generator representations or on the disentangling code. Every
Hamiltonian handled here conserves some number-like quantity; the space
splits into the connected components of the Hamiltonian's sparsity graph
and each propagator is built block by block from a Hermitian
eigendecomposition.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.csgraph import connected_components

from .algebra import Group
from .errors import CapacityError, ModelError

DEFAULT_DIMENSION_CAP = 100_000


@dataclass(frozen=True, eq=False)
class FockBasis:
    """Occupations ``{0..n_max}**n_modes``, indexed row-major."""

    modes: tuple[str, ...]
    n_max: int

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** self.n_modes

    @cached_property
    def states(self) -> np.ndarray:
        return np.array(list(itertools.product(range(self.n_max + 1), repeat=self.n_modes)),
                        dtype=np.int64).reshape(-1, self.n_modes)

    def index(self, state: Sequence[int]) -> int:
        if len(state) != self.n_modes:
            raise IndexError(f"state {tuple(state)} has wrong arity for modes {self.modes}")
        idx = 0
        for n in state:
            if not 0 <= n <= self.n_max:
                raise IndexError(f"state {tuple(state)} is outside the truncated basis")
            idx = idx * (self.n_max + 1) + int(n)
        return idx

    def state(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.dim:
            raise IndexError(index)
        return tuple(int(n) for n in self.states[index])

    def mode_index(self, name: str) -> int:
        try:
            return self.modes.index(name)
        except ValueError:
            raise ModelError(f"mode {name!r} not in basis {self.modes}") from None

    def interior(self, margin: int) -> np.ndarray:
        """Boolean mask of states whose occupations all stay ``margin`` below the cap."""
        return (self.states <= self.n_max - margin).all(axis=1)

    @cached_property
    def _annihilators(self) -> dict[str, sp.csr_array]:
        out = {}
        stride = 1
        strides = []
        for _ in range(self.n_modes):
            strides.append(stride)
            stride *= self.n_max + 1
        strides = strides[::-1]
        cols = np.arange(self.dim)
        for k, name in enumerate(self.modes):
            n = self.states[:, k]
            keep = n > 0
            data = np.sqrt(n[keep].astype(float))
            rows = cols[keep] - strides[k]
            out[name] = sp.csr_array((data, (rows, cols[keep])), shape=(self.dim, self.dim))
        return out

    def annihilator(self, mode: str) -> sp.csr_array:
        return self._annihilators[self.modes[self.mode_index(mode)]]

    def creator(self, mode: str) -> sp.csr_array:
        return self.annihilator(mode).T.tocsr()


def build_basis(n_modes: int, n_max: int, modes: Sequence[str] | None = None,
                cap: int = DEFAULT_DIMENSION_CAP) -> FockBasis:
    if n_modes not in (2, 3):
        raise ValueError("only 2 or 3 modes are supported")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if (n_max + 1) ** n_modes > cap:
        raise CapacityError(f"basis dimension {(n_max + 1) ** n_modes} exceeds cap {cap}")
    if modes is None:
        modes = ("a", "b") if n_modes == 2 else ("v", "s", "a")
    if len(modes) != n_modes or len(set(modes)) != n_modes:
        raise ValueError(f"need {n_modes} distinct mode names, got {modes}")
    return FockBasis(tuple(modes), int(n_max))


def operator_matrix(expr: str, basis: FockBasis) -> sp.csr_array:
    """Matrix of a product of ladder symbols, taken in the order written.

    ``"a+ b"`` is ``a^dagger b``; ``""`` is the identity.
    """
    out = sp.identity(basis.dim, dtype=float, format="csr")
    for token in expr.split():
        if token.endswith("+"):
            op = basis.creator(token[:-1])
        else:
            op = basis.annihilator(token)
        out = out @ op
    return sp.csr_array(out)


def terms_matrix(terms, basis: FockBasis) -> sp.csr_array:
    out = sp.csr_array((basis.dim, basis.dim), dtype=complex)
    for coeff, expr in terms:
        if coeff != 0:
            out = out + complex(coeff) * operator_matrix(expr, basis)
    return sp.csr_array(out)


_H = 0.5
GENERATOR_TERMS: dict[Group, dict[str, list[tuple[float, str]]]] = {
    Group.SU2: {
        "J+": [(1, "a+ b")], "J-": [(1, "a b+")],
        "J3": [(_H, "a+ a"), (-_H, "b+ b")],
    },
    Group.SU11: {
        "K+": [(1, "a+ b+")], "K-": [(1, "a b")],
        "K3": [(_H, "a+ a"), (_H, "b+ b"), (_H, "")],
    },
    Group.SU21: {
        "A": [(1, "a v+")], "B": [(1, "a+ v")], "C": [(_H, "v v+"), (-_H, "a a+")],
        "D": [(1, "s+ v+")], "E": [(1, "s v")], "F": [(_H, "v v+"), (_H, "s+ s")],
        "G": [(1, "a+ s+")], "J": [(1, "a s")], "K": [(_H, "a+ a"), (_H, "s s+")],
    },
    Group.SU3: {
        "A": [(1, "a b+")], "B": [(1, "b a+")], "C": [(-_H, "a a+"), (_H, "b b+")],
        "D": [(1, "c b+")], "E": [(1, "b c+")], "F": [(-_H, "c c+"), (_H, "b b+")],
        "G": [(1, "c a+")], "J": [(1, "a c+")], "K": [(-_H, "c c+"), (_H, "a a+")],
    },
}


def generator_operator(group: Group | str, name: str, basis: FockBasis) -> sp.csr_array:
    """Fock-space operator of a named generator, from its ladder definition."""
    return terms_matrix(GENERATOR_TERMS[Group(group)][name], basis)


def form_hamiltonian(form, basis: FockBasis) -> sp.csr_array:
    """Hamiltonian whose propagator is the one an ``InteractionForm`` describes."""
    h = terms_matrix(
        [(1j * c, e) for g, rate in form.rates.items()
         for c0, e in GENERATOR_TERMS[form.group][g] for c in [c0 * rate]],
        basis,
    )
    h = h + 1j * form.scalar_rate * sp.identity(basis.dim, format="csr")
    if form.shift:
        h = h - terms_matrix([(w, f"{m}+ {m}") for w, m in zip(form.shift, form.modes)], basis)
    return sp.csr_array(h)


# propagators -----------------------------------------------------------------

def sector_blocks(patterns: Sequence[sp.csr_array], dim: int) -> list[np.ndarray]:
    """Index sets of the connected components of the union sparsity pattern."""
    graph = sp.csr_array((dim, dim), dtype=float)
    for p in patterns:
        graph = graph + abs(p)
    n, labels = connected_components(graph, directed=False)
    order = np.argsort(labels, kind="stable")
    splits = np.cumsum(np.bincount(labels, minlength=n))[:-1]
    return np.split(order, splits)


@dataclass
class Propagator:
    """Block-diagonal unitary on a truncated basis."""

    basis: FockBasis
    blocks: list[np.ndarray]
    mats: list[np.ndarray]

    def __post_init__(self):
        self._where = np.empty(self.basis.dim, dtype=np.int64)
        self._pos = np.empty(self.basis.dim, dtype=np.int64)
        for b, idx in enumerate(self.blocks):
            self._where[idx] = b
            self._pos[idx] = np.arange(len(idx))

    def entry(self, row: int, col: int) -> complex:
        b = self._where[col]
        if self._where[row] != b:
            return 0j
        return complex(self.mats[b][self._pos[row], self._pos[col]])

    def column(self, col: int) -> np.ndarray:
        out = np.zeros(self.basis.dim, dtype=complex)
        b = self._where[col]
        out[self.blocks[b]] = self.mats[b][:, self._pos[col]]
        return out

    def to_sparse(self) -> sp.csr_array:
        rows, cols, vals = [], [], []
        for idx, m in zip(self.blocks, self.mats):
            r, c = np.meshgrid(idx, idx, indexing="ij")
            rows.append(r.ravel())
            cols.append(c.ravel())
            vals.append(m.ravel())
        return sp.csr_array((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                            shape=(self.basis.dim, self.basis.dim))

    def toarray(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def left_diagonal(self, phases: np.ndarray) -> "Propagator":
        """``diag(phases) @ self``."""
        return Propagator(self.basis, self.blocks,
                          [phases[idx][:, None] * m for idx, m in zip(self.blocks, self.mats)])

    def unitarity_deficit(self) -> float:
        return max(np.linalg.norm(m.conj().T @ m - np.eye(len(m)), 2) for m in self.mats)

    def distance(self, other: "Propagator", mask: np.ndarray | None = None) -> float:
        """Operator-norm distance, optionally restricted to ``mask`` rows and columns."""
        same = len(self.blocks) == len(other.blocks) and all(
            np.array_equal(b1, b2) for b1, b2 in zip(self.blocks, other.blocks)
        )
        if not same:
            d = self.toarray() - other.toarray()
            if mask is not None:
                d = d[np.ix_(mask, mask)]
            return float(np.linalg.norm(d, 2))
        worst = 0.0
        for idx, m1, m2 in zip(self.blocks, self.mats, other.mats):
            d = m1 - m2
            if mask is not None:
                keep = mask[idx]
                d = d[np.ix_(keep, keep)]
            if d.size:
                worst = max(worst, float(np.linalg.norm(d, 2)))
        return worst


def _hermitian_exp(h: np.ndarray, t: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def evolve_hamiltonian(h: sp.csr_array, basis: FockBasis, t: float) -> Propagator:
    """``exp(-i h t)`` for a Hermitian sparse ``h``."""
    if abs(h - h.conj().T).max() > 1e-12 * max(1.0, abs(h).max()):
        raise ValueError("Hamiltonian is not Hermitian")
    blocks = sector_blocks([h], basis.dim)
    dense = h.tocsr()
    return Propagator(basis, blocks,
                      [_hermitian_exp(dense[idx][:, idx].toarray(), t) for idx in blocks])


def evolve_interaction(model, basis: FockBasis, t: float) -> Propagator:
    """``exp(-i H_I t)`` for a ``ModelSpec`` (ladder form) or an ``InteractionForm``."""
    from .models import InteractionForm, interaction_hamiltonian

    if isinstance(model, InteractionForm):
        h = form_hamiltonian(model, basis)
    else:
        h = terms_matrix(interaction_hamiltonian(model), basis)
    return evolve_hamiltonian(h, basis, t)


def free_propagator(frequencies: Sequence[float], basis: FockBasis, t: float) -> np.ndarray:
    """Diagonal of ``exp(-i t sum(w_k n_k))``."""
    energy = basis.states @ np.asarray(frequencies, dtype=float)
    return np.exp(-1j * energy * t)


def evolve_timedep(spec, basis: FockBasis, t: float, dt: float) -> Propagator:
    """Time-ordered product of midpoint exponentials of the lab-frame Hamiltonian."""
    from .models import lab_hamiltonian

    if dt <= 0:
        raise ValueError("dt must be positive")
    steps = round(t / dt)
    if not math.isclose(steps * dt, t, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError("t must be an integer multiple of dt")
    terms: list[tuple[Callable[[float], complex], str]] = lab_hamiltonian(spec)
    ops = [operator_matrix(e, basis) for _, e in terms]
    blocks = sector_blocks(ops, basis.dim)
    stacks = [np.stack([op[idx][:, idx].toarray() for op in ops]) for idx in blocks]
    mats = [np.eye(len(idx), dtype=complex) for idx in blocks]
    for n in range(steps):
        tm = (n + 0.5) * dt
        c = np.array([f(tm) for f, _ in terms], dtype=complex)
        for b, stack in enumerate(stacks):
            h = np.tensordot(c, stack, axes=1)
            mats[b] = _hermitian_exp(h, dt) @ mats[b]
    return Propagator(basis, blocks, mats)


def amplitude(u, final: Sequence[int], initial: Sequence[int], basis: FockBasis) -> complex:
    """``<final| U |initial>``."""
    i, j = basis.index(final), basis.index(initial)
    if isinstance(u, Propagator):
        return u.entry(i, j)
    return complex(u[i, j])


def truncation_deficit(u: Propagator, initial: Sequence[int], margin: int = 2) -> float:
    """Probability weight that ``initial`` sends to states within ``margin`` of the cap."""
    col = u.column(u.basis.index(initial))
    keep = u.basis.interior(margin)
    return float(1.0 - np.sum(np.abs(col[keep]) ** 2))


# single conserved sector -------------------------------------------------------

def _apply_monomial(expr: str, modes: Sequence[str], state: tuple[int, ...], n_max: int):
    """``(coefficient, state')`` of a ladder monomial on a number state, or None."""
    occ = list(state)
    coef = 1.0
    for token in reversed(expr.split()):
        k = modes.index(token.rstrip("+"))
        if token.endswith("+"):
            if occ[k] >= n_max:
                return None
            occ[k] += 1
            coef *= math.sqrt(occ[k])
        else:
            if occ[k] == 0:
                return None
            coef *= math.sqrt(occ[k])
            occ[k] -= 1
    return coef, tuple(occ)


@dataclass(frozen=True, eq=False)
class Sector:
    """Number states reachable from a seed under ``terms``, each mode capped at ``n_max``.

    For large single-chain sectors (the amplifier vacuum sector is one
    chain of pair states) this avoids the full product basis.
    """

    modes: tuple[str, ...]
    n_max: int
    states: tuple[tuple[int, ...], ...]
    h: np.ndarray

    @cached_property
    def _eigen(self):
        h = self.h
        n = len(h)
        if n > 2 and not h.imag.any() and not np.triu(h, 2).any() and not np.tril(h, -2).any():
            return eigh_tridiagonal(np.diag(h).real, np.diag(h, -1).real)
        return np.linalg.eigh(h)

    def index(self, state: Sequence[int]) -> int:
        return self.states.index(tuple(state))

    def evolve(self, seed: Sequence[int], t: float) -> np.ndarray:
        """Column of ``exp(-i h t)`` belonging to ``seed``."""
        w, v = self._eigen
        return v @ (np.exp(-1j * w * t) * v[self.index(seed)].conj())

    def edge_weight(self, vec: np.ndarray, margin: int = 2) -> float:
        edge = np.array([max(s) > self.n_max - margin for s in self.states])
        return float(np.sum(np.abs(vec[edge]) ** 2))

    def mean_number(self, vec: np.ndarray, mode: str) -> float:
        k = self.modes.index(mode)
        occ = np.array([s[k] for s in self.states], dtype=float)
        return float(np.sum(occ * np.abs(vec) ** 2))


def build_sector(terms, modes: Sequence[str], seed: Sequence[int], n_max: int,
                 cap: int = 20_000) -> Sector:
    modes = tuple(modes)
    seed = tuple(int(n) for n in seed)
    index = {seed: 0}
    order = [seed]
    entries: dict[tuple[int, int], complex] = {}
    head = 0
    while head < len(order):
        state = order[head]
        for coeff, expr in terms:
            hit = _apply_monomial(expr, modes, state, n_max)
            if hit is None or coeff == 0:
                continue
            c, new = hit
            if new not in index:
                if len(order) >= cap:
                    raise CapacityError(f"sector exceeds {cap} states")
                index[new] = len(order)
                order.append(new)
            key = (index[new], head)
            entries[key] = entries.get(key, 0) + complex(coeff) * c
        head += 1
    h = np.zeros((len(order), len(order)), dtype=complex)
    for (i, j), c in entries.items():
        h[i, j] += c
    return Sector(modes, int(n_max), tuple(order), h)
