"""Brute-force weak Schur and weak Fourier-Schur sampling on explicit matrices.

Everything here works on dense vectors/matrices of dimension ``d**k``
(capped at ``DIM_CAP``). It is the slow oracle side of the package:
closed-form distributions live in :mod:`schurlab.spectra`.

Traces ``tr(P(pi) X)`` never build ``P(pi)``: with ``idx`` the index map of
the register permutation, ``(P x)[j] = x[idx[j]]`` and therefore
``tr(P X) = sum_j X[idx[j], j]``.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Optional, Union

import numpy as np

from .characters import character_table as character_table_sk, cycle_type
from .errors import CapExceeded, InvariantViolation
from .groups import (
    CharacterTable,
    DensityMatrix,
    FiniteGroup,
    Subgroup,
    character_table,
    fourier_probability,
    fourier_probability_exact,
    hidden_subgroup_state,
    isotypic_projector,
)
from .young import Partition, dim_sym_irrep, enumerate_partitions

__all__ = [
    "RealDistribution",
    "SchurProjectorSet",
    "JointDistribution",
    "RepeatedIrrep",
    "permutation_index",
    "permutation_matrix",
    "schur_projectors",
    "use_projector_store",
    "weak_schur_dist",
    "tensor_power",
    "joint_fourier_schur",
    "prob_repeated_irrep",
    "theorem1_bound",
]

DIM_CAP = 4096
PROJECTOR_MAX_K = 6
CLAMP_TOL = 1e-12


def _check_dim(k: int, d: int) -> None:
    if d**k > DIM_CAP:
        raise CapExceeded(f"d^k = {d}^{k} = {d**k} exceeds {DIM_CAP}")


@lru_cache(maxsize=64)
def permutation_index(k: int, d: int, perm: tuple) -> np.ndarray:
    """Index map of P(perm): ``(P x)[j] = x[idx[j]]``.

    P moves the content of register b to register perm[b], i.e.
    ``P|i_1..i_k> = |i_{perm^-1(1)}..i_{perm^-1(k)}>``.
    """
    _check_dim(k, d)
    inverse = np.argsort(perm)
    idx = np.arange(d**k).reshape((d,) * k).transpose(inverse).ravel()
    idx.setflags(write=False)
    return idx


def permutation_matrix(k: int, d: int, perm) -> np.ndarray:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"{perm} is not a permutation of {k} items")
    idx = permutation_index(k, d, perm)
    out = np.zeros((d**k, d**k))
    out[np.arange(d**k), idx] = 1.0
    return out


@lru_cache(maxsize=None)
def _perms_with_types(k: int) -> tuple:
    return tuple((p, cycle_type(p)) for p in itertools.permutations(range(k)))


@lru_cache(maxsize=None)
def _character_rows(k: int) -> dict:
    """For each partition, (dim P / k!) * chi(pi) for every pi in S_k, as an array."""
    perms = _perms_with_types(k)
    table = character_table_sk(k)
    return {
        lam: dim_sym_irrep(lam) / factorial(k) * np.array([table.value(lam, t) for _, t in perms], float)
        for lam in table.irreps
    }


def _clamp(probs: dict, where: str) -> tuple[dict, list]:
    clamped = []
    out = {}
    for key, p in probs.items():
        if p < -CLAMP_TOL:
            raise InvariantViolation(f"{where}: probability {p} < -{CLAMP_TOL} at {key}")
        if p < 0:
            clamped.append((key, p))
            p = 0.0
        out[key] = p
    return out, clamped


@dataclass(frozen=True)
class RealDistribution:
    """Float probabilities on partitions of ``k``; ``clamped`` lists tiny negatives set to 0."""

    k: int
    probs: dict
    clamped: list = field(default_factory=list)

    def __post_init__(self):
        total = sum(self.probs.values())
        if abs(total - 1) > 1e-9:
            raise InvariantViolation(f"weak Schur distribution sums to {total}")

    def __getitem__(self, lam) -> float:
        return self.probs.get(Partition(lam), 0.0)

    def max_abs_diff(self, other) -> float:
        keys = set(self.probs) | set(other.probs)
        return max(abs(float(self[lam]) - float(other[lam])) for lam in keys)


@dataclass(frozen=True)
class SchurProjectorSet:
    k: int
    d: int
    projectors: dict

    def __getitem__(self, lam) -> np.ndarray:
        return self.projectors[Partition(lam)]

    def check(self, atol: float = 1e-9) -> None:
        n = self.d**self.k
        total = np.zeros((n, n))
        for lam, p in self.projectors.items():
            total += p
            if not np.allclose(p @ p, p, atol=atol):
                raise InvariantViolation(f"Pi_{lam} is not idempotent")
            for mu, q in self.projectors.items():
                if mu != lam and not np.allclose(p @ q, 0, atol=atol):
                    raise InvariantViolation(f"Pi_{lam} Pi_{mu} != 0")
        if not np.allclose(total, np.eye(n), atol=atol):
            raise InvariantViolation("projectors do not resolve the identity")


_projector_store = None


def use_projector_store(store) -> None:
    """Install a ``load(k, d) -> dict | None`` / ``save(k, d, dict)`` store for projector matrices."""
    global _projector_store
    _projector_store = store


def schur_projectors(k: int, d: int) -> SchurProjectorSet:
    """Pi_lam = (dim P_lam / k!) sum_pi chi_lam(pi) P(pi) on (C^d)^k, as dense real matrices."""
    if k > PROJECTOR_MAX_K:
        raise CapExceeded(f"explicit Schur projectors limited to k <= {PROJECTOR_MAX_K}")
    _check_dim(k, d)
    store = _projector_store
    if store is not None:
        saved = store.load(k, d)
        if saved is not None:
            return SchurProjectorSet(k, d, {Partition.parse(key): m for key, m in saved.items()})
    result = _build_projectors(k, d)
    if store is not None:
        store.save(k, d, {str(lam): m for lam, m in result.projectors.items()})
    return result


def _build_projectors(k: int, d: int) -> SchurProjectorSet:
    n = d**k
    rows = np.arange(n)
    coeffs = _character_rows(k)
    out = {lam: np.zeros((n, n)) for lam in coeffs}
    for t, (perm, _) in enumerate(_perms_with_types(k)):
        idx = permutation_index(k, d, perm)
        for lam, c in coeffs.items():
            if c[t]:
                out[lam][rows, idx] += c[t]
    return SchurProjectorSet(k, d, out)


def _as_matrix(gamma) -> np.ndarray:
    return gamma.entries if isinstance(gamma, DensityMatrix) else np.asarray(gamma)


def _perm_traces(matrix: np.ndarray, k: int, d: int) -> np.ndarray:
    cols = np.arange(d**k)
    return np.array([
        matrix[permutation_index(k, d, perm), cols].sum() for perm, _ in _perms_with_types(k)
    ])


def weak_schur_dist(gamma, k: int, d: int, projectors: Optional[SchurProjectorSet] = None) -> RealDistribution:
    """Pr(lam | gamma) = tr(Pi_lam gamma) for a state on (C^d)^k.

    By default the traces are expanded over all of S_k; passing an explicit
    :class:`SchurProjectorSet` uses the matrices instead.
    """
    m = _as_matrix(gamma)
    _check_dim(k, d)
    if m.shape != (d**k, d**k):
        raise ValueError(f"state has shape {m.shape}, expected {(d**k, d**k)}")
    if projectors is not None:
        raw = {lam: np.trace(p @ m) for lam, p in projectors.projectors.items()}
    else:
        traces = _perm_traces(m, k, d)
        raw = {lam: c @ traces for lam, c in _character_rows(k).items()}
    for lam, v in raw.items():
        if abs(v.imag) > 1e-9:
            raise InvariantViolation(f"complex probability {v} at {lam}")
    probs, clamped = _clamp({lam: float(v.real) for lam, v in raw.items()}, "weak_schur_dist")
    return RealDistribution(k, probs, clamped)


def tensor_power(matrix: np.ndarray, k: int) -> np.ndarray:
    _check_dim(k, matrix.shape[0])
    out = np.ones((1, 1), dtype=matrix.dtype)
    for _ in range(k):
        out = np.kron(out, matrix)
    return out


@dataclass
class JointDistribution:
    """Joint law of (irrep type, partition) from weak Fourier then weak Schur sampling.

    An irrep type is a sorted tuple of irrep labels (a multiset of size k).
    """

    k: int
    labels: tuple
    entries: dict
    clamped: list = field(default_factory=list)

    def total(self) -> float:
        return sum(self.entries.values())

    def types(self) -> list:
        return list(dict.fromkeys(t for t, _ in self.entries))

    def type_marginal(self) -> dict:
        out = Counter()
        for (t, _), p in self.entries.items():
            out[t] += p
        return dict(out)

    def lambda_marginal(self) -> dict:
        out = Counter()
        for (_, lam), p in self.entries.items():
            out[lam] += p
        return dict(out)

    def conditional(self, irrep_type) -> dict:
        irrep_type = tuple(irrep_type)
        rows = {lam: p for (t, lam), p in self.entries.items() if t == irrep_type}
        z = sum(rows.values())
        if z <= 0:
            raise ValueError(f"irrep type {irrep_type} has probability zero")
        return {lam: p / z for lam, p in rows.items()}

    @staticmethod
    def multiplicity_free(irrep_type) -> bool:
        return len(set(irrep_type)) == len(irrep_type)


def joint_fourier_schur(group: FiniteGroup, sub: Subgroup, k: int,
                        table: Optional[CharacterTable] = None) -> JointDistribution:
    """Pr(type, lam) for k copies of rho_H.

    Each register is projected onto an isotypic block (Pi_s rho_H Pi_s, trace
    Pr(s)); the product state for a representative sequence of each type is
    then measured with the Schur projectors, and weighted by the number of
    sequences of that type.
    """
    n = group.order
    _check_dim(k, n)
    table = table or character_table(group)
    rho = hidden_subgroup_state(group, sub).entries
    blocks = []
    for label in table.labels:
        proj = isotypic_projector(group, table, label)
        blocks.append(proj @ rho @ proj)

    cols = np.arange(n**k)
    digits = np.array(np.unravel_index(cols, (n,) * k)).T
    perms = _perms_with_types(k)
    permuted_digits = [digits[permutation_index(k, n, p)] for p, _ in perms]
    coeffs = _character_rows(k)

    raw = {}
    for combo in itertools.combinations_with_replacement(range(len(table.labels)), k):
        weight = factorial(k) // prod(factorial(c) for c in Counter(combo).values())
        traces = np.empty(len(perms), dtype=complex)
        for t, pd in enumerate(permuted_digits):
            terms = np.ones(n**k, dtype=complex)
            for reg, s in enumerate(combo):
                terms *= blocks[s][pd[:, reg], digits[:, reg]]
            traces[t] = terms.sum()
        key = tuple(table.labels[s] for s in combo)
        for lam, c in coeffs.items():
            v = weight * (c @ traces)
            if abs(v.imag) > 1e-9:
                raise InvariantViolation(f"complex joint probability {v} at {key}, {lam}")
            raw[(key, lam)] = float(v.real)
    entries, clamped = _clamp(raw, "joint_fourier_schur")
    joint = JointDistribution(k, table.labels, entries, clamped)
    if abs(joint.total() - 1) > 1e-9:
        raise InvariantViolation(f"joint distribution sums to {joint.total()}")
    return joint


@dataclass(frozen=True)
class RepeatedIrrep:
    exact: Fraction
    bound: Fraction


def _elementary_symmetric(values, k: int):
    e = [Fraction(1)] + [Fraction(0)] * k
    for v in values:
        for j in range(k, 0, -1):
            e[j] += e[j - 1] * v
    return e[k]


def prob_repeated_irrep(group: FiniteGroup, sub: Subgroup, k: int,
                        table: Optional[CharacterTable] = None) -> RepeatedIrrep:
    """Chance that k rounds of weak Fourier sampling repeat some irrep.

    ``exact`` is 1 - k! e_k(p_1, ..., p_M) in rationals; ``bound`` is the
    union bound C(k,2) d_max^2 |H| / |G|.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    table = table or character_table(group)
    p = [fourier_probability_exact(group, sub, label, table) for label in table.labels]
    exact = 1 - factorial(k) * _elementary_symmetric(p, k)
    if exact < 0:
        raise InvariantViolation(f"repeated-irrep probability {exact} is negative")
    bound = Fraction(comb(k, 2) * table.d_max**2 * sub.order, group.order)
    return RepeatedIrrep(exact, bound)


def theorem1_bound(order_g: int, order_h: int, d_max: int, k: int) -> Fraction:
    """k^2 |H| d_max^2 / |G|."""
    if order_g < 1 or order_h < 1 or d_max < 1 or k < 0:
        raise ValueError("group orders and d_max must be positive, k non-negative")
    return Fraction(k * k * order_h * d_max * d_max, order_g)
