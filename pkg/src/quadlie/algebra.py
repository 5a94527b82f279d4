"""Generator sets for su(2), su(1,1), su(2,1) and su(3).

Every matrix is stored with exact ``Fraction`` entries so that commutators
and structure constants can be checked without any floating-point
tolerance. Complex arrays are produced only at the :func:`assemble`
boundary.

The representations are the ones induced by writing each quadratic
operator as ``psi^dagger M psi`` for a spinor of ladder operators with
commutator metric ``eta``; the representing matrix is ``eta @ M``.

==========  ======================  ==========
group       spinor                  metric
==========  ======================  ==========
su(2)       (a, b)                  diag(1, 1)
su(1,1)     (a, b^dagger)           diag(1, -1)
su(2,1)     (b_v, b_a, b_s^dagger)  diag(1, 1, -1)
su(3)       (b, a, c)               diag(1, 1, 1)
==========  ======================  ==========
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import StructuralError

ExactMatrix = tuple[tuple[Fraction, ...], ...]


class Group(str, enum.Enum):
    SU2 = "su2"
    SU11 = "su11"
    SU21 = "su21"
    SU3 = "su3"


def _m(rows) -> ExactMatrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _unit(n, i, j, value=1) -> ExactMatrix:
    return _m([[value if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])


def _diag(*entries) -> ExactMatrix:
    n = len(entries)
    return _m([[entries[r] if r == c else 0 for c in range(n)] for r in range(n)])


_H = Fraction(1, 2)

_REPS: dict[Group, tuple[tuple[str, ExactMatrix], ...]] = {
    Group.SU2: (
        ("J+", _unit(2, 0, 1)),
        ("J-", _unit(2, 1, 0)),
        ("J3", _diag(_H, -_H)),
    ),
    Group.SU11: (
        ("K+", _unit(2, 0, 1)),
        ("K-", _unit(2, 1, 0, -1)),
        ("K3", _diag(_H, -_H)),
    ),
    # A = b_a b_v^+, B = b_a^+ b_v, C = (b_v b_v^+ - b_a b_a^+)/2,
    # D = b_s^+ b_v^+, E = b_s b_v, F = (b_v b_v^+ + b_s^+ b_s)/2,
    # G = b_a^+ b_s^+, J = b_a b_s, K = (b_a^+ b_a + b_s b_s^+)/2
    Group.SU21: (
        ("A", _unit(3, 0, 1)),
        ("B", _unit(3, 1, 0)),
        ("C", _diag(_H, -_H, 0)),
        ("D", _unit(3, 0, 2)),
        ("E", _unit(3, 2, 0, -1)),
        ("F", _diag(_H, 0, -_H)),
        ("G", _unit(3, 1, 2)),
        ("J", _unit(3, 2, 1, -1)),
        ("K", _diag(0, _H, -_H)),
    ),
    # A = a b^+, B = b a^+, C = (b b^+ - a a^+)/2,
    # D = c b^+, E = b c^+, F = (b b^+ - c c^+)/2,
    # G = c a^+, J = a c^+, K = (a a^+ - c c^+)/2
    Group.SU3: (
        ("A", _unit(3, 0, 1)),
        ("B", _unit(3, 1, 0)),
        ("C", _diag(_H, -_H, 0)),
        ("D", _unit(3, 0, 2)),
        ("E", _unit(3, 2, 0)),
        ("F", _diag(_H, 0, -_H)),
        ("G", _unit(3, 1, 2)),
        ("J", _unit(3, 2, 1)),
        ("K", _diag(0, _H, -_H)),
    ),
}


# exact matrix helpers ------------------------------------------------------

def _matmul(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
    n = len(x)
    return tuple(
        tuple(sum((x[i][k] * y[k][j] for k in range(n)), Fraction(0)) for j in range(n))
        for i in range(n)
    )


def _lincomb(terms) -> ExactMatrix:
    terms = list(terms)
    n = len(terms[0][1])
    return tuple(
        tuple(sum((c * m[i][j] for c, m in terms), Fraction(0)) for j in range(n))
        for i in range(n)
    )


def exact_commutator(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
    if len(x) != len(y) or any(len(r) != len(x) for r in (*x, *y)):
        raise StructuralError("commutator of matrices with different shapes")
    return _lincomb([(Fraction(1), _matmul(x, y)), (Fraction(-1), _matmul(y, x))])


def _is_zero(x: ExactMatrix) -> bool:
    return all(v == 0 for row in x for v in row)


def _flat(x: ExactMatrix) -> list[Fraction]:
    return [v for row in x for v in row]


def _solve_exact(columns: list[list[Fraction]], rhs: list[Fraction]):
    """Exact solve of a consistent (possibly overdetermined) system.

    Returns the solution vector or ``None`` when the system is inconsistent.
    """
    n_unknowns = len(columns)
    rows = [[columns[j][i] for j in range(n_unknowns)] + [rhs[i]] for i in range(len(rhs))]
    pivots = []
    r = 0
    for c in range(n_unknowns):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    x = [Fraction(0)] * n_unknowns
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x


def decompose_exact(target: ExactMatrix, names, mats) -> list[tuple[str, Fraction]] | None:
    """Write ``target`` as a rational combination of ``mats``.

    Prefers the sparsest expansion (one generator, then two, then a full
    solve) so the result is canonical when the set is linearly dependent,
    as the su(2,1) and su(3) sets are. ``None`` means ``target`` is outside
    the span.
    """
    if _is_zero(target):
        return []
    flat = _flat(target)
    for size in (1, 2):
        for combo in itertools.combinations(range(len(names)), size):
            sol = _solve_exact([_flat(mats[k]) for k in combo], flat)
            if sol is not None and all(v != 0 for v in sol):
                return [(names[k], v) for k, v in zip(combo, sol)]
    sol = _solve_exact([_flat(m) for m in mats], flat)
    if sol is None:
        return None
    return [(names[k], v) for k, v in enumerate(sol) if v != 0]


def _structure(names, mats) -> dict[tuple[str, str], tuple[tuple[str, Fraction], ...]]:
    table = {}
    for i, j in itertools.product(range(len(names)), repeat=2):
        expansion = decompose_exact(exact_commutator(mats[i], mats[j]), names, mats)
        if expansion is None:
            raise StructuralError(f"[{names[i]}, {names[j]}] leaves the span of the set")
        table[(names[i], names[j])] = tuple(expansion)
    return table


@dataclass(frozen=True)
class GeneratorSet:
    group_id: Group
    names: tuple[str, ...]
    exact: Mapping[str, ExactMatrix] = field(repr=False)
    structure_constants: Mapping[tuple[str, str], tuple[tuple[str, Fraction], ...]] = field(
        repr=False
    )

    @property
    def dim(self) -> int:
        return len(next(iter(self.exact.values())))

    def matrix(self, name: str) -> np.ndarray:
        return np.array(self.exact[name], dtype=float).astype(complex)

    def __iter__(self):
        return iter(self.names)


_CACHE: dict[Group, GeneratorSet] = {}


def generators(group_id: Group | str) -> GeneratorSet:
    """Generator set of one of the four supported algebras."""
    group = Group(group_id)
    if group not in _CACHE:
        names = tuple(n for n, _ in _REPS[group])
        mats = [m for _, m in _REPS[group]]
        _CACHE[group] = GeneratorSet(group, names, dict(_REPS[group]), _structure(names, mats))
    return _CACHE[group]


def commutator_table(gset: GeneratorSet) -> dict[tuple[str, str], tuple[tuple[str, Fraction], ...]]:
    """Recompute the structure constants of ``gset`` from its matrices."""
    mats = [gset.exact[n] for n in gset.names]
    dims = {len(m) for m in mats}
    if len(dims) != 1 or any(len(row) != len(m) for m in mats for row in m):
        raise StructuralError("generator matrices must be square and of equal size")
    return _structure(list(gset.names), mats)


def assemble(coeffs: Mapping[str, complex], gset: GeneratorSet) -> np.ndarray:
    """Return ``sum(coeffs[g] * matrix(g))`` as a complex array."""
    out = np.zeros((gset.dim, gset.dim), dtype=complex)
    for name, c in coeffs.items():
        if name not in gset.exact:
            raise KeyError(f"{name!r} is not a generator of {gset.group_id.value}")
        out += complex(c) * gset.matrix(name)
    return out


# Reference relations: ([X, Y], expected expansion) and linear identities.
RELATIONS: dict[Group, tuple[tuple[str, str, dict[str, int]], ...]] = {
    Group.SU2: (("J3", "J+", {"J+": 1}), ("J3", "J-", {"J-": -1}), ("J+", "J-", {"J3": 2})),
    Group.SU11: (("K3", "K+", {"K+": 1}), ("K3", "K-", {"K-": -1}), ("K+", "K-", {"K3": -2})),
    Group.SU21: (("A", "B", {"C": 2}), ("D", "E", {"F": -2}), ("G", "J", {"K": -2})),
    Group.SU3: (("A", "B", {"C": 2}), ("D", "E", {"F": 2}), ("G", "J", {"K": 2}), ("A", "G", {"D": 1})),
}
LINEAR_IDENTITIES: dict[Group, tuple[dict[str, int], ...]] = {
    Group.SU21: ({"F": 1, "C": -1, "K": -1},),
}


def _format(expansion: Mapping[str, object]) -> str:
    return " + ".join(f"{c}*{n}" for n, c in expansion.items()) or "0"


def check_relations(group_id: Group | str) -> list[tuple[str, bool]]:
    """Evaluate the reference relations of a group in exact arithmetic."""
    gset = generators(group_id)
    out = []
    for x, y, expected in RELATIONS.get(gset.group_id, ()):
        lhs = exact_commutator(gset.exact[x], gset.exact[y])
        rhs = _lincomb((c, gset.exact[n]) for n, c in expected.items())
        out.append((f"[{x}, {y}] = {_format(expected)}", lhs == rhs))
    for combo in LINEAR_IDENTITIES.get(gset.group_id, ()):
        total = _lincomb((c, gset.exact[n]) for n, c in combo.items())
        out.append((f"{_format(combo)} = 0", _is_zero(total)))
    table = commutator_table(gset)
    out.append(("structure constants reproduce", table == dict(gset.structure_constants)))
    return out
