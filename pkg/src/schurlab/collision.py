"""Amplified swap test and the query accounting of the quantum collision algorithm.

The swap test acts on ``2m`` registers of dimension ``dim``: registers
``0..m-1`` hold the alpha copies, ``m..2m-1`` the beta copies, and pair ``t``
is ``(t, m + t)``. The branch tag register is a separate ancilla of
dimension ``len(branches)`` with orthonormal basis states as tags.

The Monte Carlo model is classical: it draws the function and the table,
counts marked items, and scores Grover search analytically. The hidden
basis never enters, since the comparison subroutine only sees collision
structure.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import CapExceeded, InvariantViolation
from .sampling import permutation_index

__all__ = [
    "Branch",
    "SwapTestInstance",
    "SwapFidelity",
    "CollisionPlan",
    "MonteCarloReport",
    "amplified_swap_unitary",
    "swap_fidelity",
    "random_instance",
    "error_accumulation",
    "plan_collision_algorithm",
    "grover_iterations_unknown_input",
    "grover_success",
    "montecarlo_collision",
    "count_marked",
]

DIM_CAP = 4096
TOL = 1e-12


@dataclass(frozen=True)
class Branch:
    amplitude: complex
    alpha: np.ndarray
    beta: np.ndarray
    theta: int
    gamma_index: int


@dataclass(frozen=True)
class SwapTestInstance:
    m: int
    dim: int
    branches: tuple

    def __post_init__(self):
        if self.m < 1 or self.dim < 1:
            raise ValueError("m and dim must be positive")
        norm = sum(abs(b.amplitude) ** 2 for b in self.branches)
        if abs(norm - 1) > TOL:
            raise InvariantViolation(f"branch amplitudes have squared norm {norm}")
        tags = [b.gamma_index for b in self.branches]
        if len(set(tags)) != len(tags) or any(not 0 <= t < len(tags) for t in tags):
            raise InvariantViolation("gamma tags must be distinct indices 0..n-1")
        for b in self.branches:
            for v in (b.alpha, b.beta):
                if v.shape != (self.dim,) or abs(np.linalg.norm(v) - 1) > TOL:
                    raise InvariantViolation("alpha/beta must be unit vectors of length dim")
            overlap = abs(np.vdot(b.alpha, b.beta))
            if b.theta not in (0, 1):
                raise InvariantViolation("theta must be 0 or 1")
            if (b.theta == 1 and abs(overlap - 1) > TOL) or (b.theta == 0 and overlap > TOL):
                raise InvariantViolation(f"|<alpha|beta>| = {overlap} inconsistent with theta={b.theta}")


@dataclass(frozen=True)
class SwapFidelity:
    fidelity: float
    bound: float
    exact_formula: float

    @property
    def vacuous(self) -> bool:
        return self.bound <= 0


def _check_swap_dim(m: int, dim: int) -> None:
    if dim ** (2 * m) > DIM_CAP:
        raise CapExceeded(f"dim^(2m) = {dim}^{2 * m} exceeds {DIM_CAP}")


def amplified_swap_unitary(m: int, dim: int) -> np.ndarray:
    """U = 1 - 2 Pi, Pi the product over the m pairs of (I + SWAP)/2.

    Pi is expanded as 2^-m times the sum of the register permutations that
    swap any subset of the pairs.
    """
    _check_swap_dim(m, dim)
    k, n = 2 * m, dim ** (2 * m)
    proj = np.zeros((n, n))
    rows = np.arange(n)
    for subset in itertools.product((0, 1), repeat=m):
        perm = list(range(k))
        for t, on in enumerate(subset):
            if on:
                perm[t], perm[m + t] = m + t, t
        proj[rows, permutation_index(k, dim, tuple(perm))] += 1.0
    proj /= 2**m
    return np.eye(n) - 2 * proj


def _branch_vector(b: Branch, m: int, sign: float = 1.0) -> np.ndarray:
    v = np.ones(1, dtype=complex)
    for vec in [b.alpha] * m + [b.beta] * m:
        v = np.kron(v, vec)
    return sign * b.amplitude * v


def swap_fidelity(inst: SwapTestInstance, unitary: Optional[np.ndarray] = None) -> SwapFidelity:
    """|<psi'|U|psi>|^2 from explicit state vectors, with the closed form and the bound."""
    _check_swap_dim(inst.m, inst.dim)
    u = amplified_swap_unitary(inst.m, inst.dim) if unitary is None else unitary
    n_tags = len(inst.branches)
    size = inst.dim ** (2 * inst.m)
    psi = np.zeros((size, n_tags), dtype=complex)
    target = np.zeros((size, n_tags), dtype=complex)
    for b in inst.branches:
        psi[:, b.gamma_index] = _branch_vector(b, inst.m)
        target[:, b.gamma_index] = _branch_vector(b, inst.m, (-1.0) ** b.theta)
    fid = abs(np.vdot(target, u @ psi)) ** 2
    lost = sum(abs(b.amplitude) ** 2 for b in inst.branches if b.theta == 0)
    exact = abs(1 - lost * 2.0 ** (1 - inst.m)) ** 2
    return SwapFidelity(float(fid), 1 - 2.0 ** (2 - inst.m), float(exact))


def _haar_vector(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_instance(m: int, dim: int, n_branches: int, rng: np.random.Generator) -> SwapTestInstance:
    """Random amplitudes, Haar alpha, random theta; beta is a phase times alpha or orthogonal to it."""
    if dim < 2:
        raise ValueError("orthogonal pairs need dim >= 2")
    amps = rng.normal(size=n_branches) + 1j * rng.normal(size=n_branches)
    amps /= np.linalg.norm(amps)
    branches = []
    for i, a in enumerate(amps):
        alpha = _haar_vector(rng, dim)
        theta = int(rng.integers(2))
        if theta:
            beta = np.exp(2j * np.pi * rng.random()) * alpha
        else:
            beta = _haar_vector(rng, dim)
            beta = beta - np.vdot(alpha, beta) * alpha
            beta /= np.linalg.norm(beta)
        branches.append(Branch(complex(a), alpha, beta, theta, i))
    return SwapTestInstance(m, dim, tuple(branches))


def error_accumulation(steps: int, m: int, eps0: float = 0.0) -> float:
    """Trace-distance error after ``steps`` amplified swap tests: eps0 + steps * 2^(1 - m/2)."""
    if steps < 0 or m < 1:
        raise ValueError("steps must be >= 0 and m >= 1")
    return eps0 + steps * 2.0 ** (1 - m / 2)


def _icbrt_floor(n: int) -> int:
    c = round(n ** (1 / 3))
    while c**3 > n:
        c -= 1
    while (c + 1) ** 3 <= n:
        c += 1
    return c


def _cbrt_ceil(n: int) -> int:
    c = _icbrt_floor(n)
    return c if c**3 == n else c + 1


def _cbrt_round(n: int) -> int:
    c = _icbrt_floor(n)
    # round up iff n > (c + 1/2)^3, i.e. 8n > (2c + 1)^3
    return c + 1 if 8 * n > (2 * c + 1) ** 3 else c


@dataclass(frozen=True)
class CollisionPlan:
    d: int
    r: int
    table_size: int
    m: int
    grover_iters: int
    total_queries: int
    metadata: dict = field(default_factory=dict)


def plan_collision_algorithm(d: int, r: int) -> CollisionPlan:
    """Query budget of the table-plus-Grover algorithm with m-copy comparisons.

    table_size = round((d/r)^(1/3)), m = 2 + 2 ceil(log2(d/r)),
    grover_iters = ceil((d/r)^(1/3)); the table costs m queries per entry and
    each Grover iteration 2m (m calls each to R and R^dagger).
    """
    if r < 1 or d % r:
        raise ValueError(f"r={r} must divide d={d}")
    n = d // r
    if n < 2:
        raise ValueError("need d/r >= 2")
    table = _cbrt_round(n)
    m = 2 + 2 * (n - 1).bit_length()
    iters = _cbrt_ceil(n)
    total = m * table + 2 * m * iters
    meta = {
        "n": n,
        "error_bound": error_accumulation(iters, m),
        "running_time_estimate": math.sqrt(n) * math.log2(n),
        "query_scale": n ** (1 / 3) * math.log2(n),
    }
    return CollisionPlan(d, r, table, m, iters, total, meta)


def grover_iterations_unknown_input(d: int, r: int) -> int:
    """floor(4 / (pi * sqrt(asin((r/d)^(2/3)))))."""
    if not 1 <= r <= d:
        raise ValueError(f"need 1 <= r <= d, got r={r}, d={d}")
    return math.floor(4 / (math.pi * math.sqrt(math.asin((r / d) ** (2 / 3)))))


def grover_success(marked: int, total: int, iters: int) -> float:
    """sin^2((2 iters + 1) theta) with sin^2(theta) = marked/total."""
    if marked <= 0:
        return 0.0
    theta = math.asin(math.sqrt(marked / total))
    return math.sin((2 * iters + 1) * theta) ** 2


@dataclass(frozen=True)
class MonteCarloReport:
    d: int
    r: int
    case: str
    trials: int
    seed: int
    grover_iters: int
    success_rate: float
    mean_queries: float
    mean_marked: float


def count_marked(f: np.ndarray, table: np.ndarray) -> int:
    """Inputs outside ``table`` whose value also occurs in the table.

    Equals sum over distinct table values v of (preimages of v) - (table
    entries with value v).
    """
    hit = np.isin(f, f[table])
    hit[table] = False
    return int(hit.sum())


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def montecarlo_collision(d: int, r: int, trials: int, seed: int, case: str,
                         grover_iters: Optional[int] = None) -> MonteCarloReport:
    """Average success of the collision algorithm against random functions.

    ``case`` is ``"one_to_one"`` or ``"r_to_one"``. Each trial draws f and a
    table of ``plan.table_size`` distinct inputs, counts the inputs outside
    the table whose value appears in it, scores Grover search at
    ``grover_iters`` (default: the planned count) and subtracts the
    accumulated swap-test error.
    """
    if case not in ("one_to_one", "r_to_one"):
        raise ValueError(f"case must be 'one_to_one' or 'r_to_one', not {case!r}")
    if trials < 1:
        raise ValueError("trials must be positive")
    plan = plan_collision_algorithm(d, r)
    iters = plan.grover_iters if grover_iters is None else grover_iters
    penalty = error_accumulation(iters, plan.m)
    rest = d - plan.table_size
    values = np.arange(d) if case == "one_to_one" else np.repeat(np.arange(d // r), r)
    success = marked_total = 0.0
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        f = rng.permutation(values)
        table = rng.choice(d, plan.table_size, replace=False)
        marked = count_marked(f, table)
        marked_total += marked
        success += max(0.0, grover_success(marked, rest, iters) - penalty) if marked else 0.0
    return MonteCarloReport(
        d, r, case, trials, seed, iters,
        success_rate=success / trials,
        mean_queries=float(plan.m * plan.table_size + 2 * plan.m * iters),
        mean_marked=marked_total / trials,
    )
