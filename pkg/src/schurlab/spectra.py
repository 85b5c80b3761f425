"""Exact Plancherel and Schur distributions on partitions, and bound checks.

Distances use the unnormalized 1-norm ``sum |p - q|`` (``l1_distance``);
``total_variation`` is half of it. ``bhattacharyya`` is ``sum sqrt(p q)``
and ``fidelity`` its square. Square roots and exponentials are taken in
mpmath at ``PRECISION_DPS`` digits so bound checks are not decided by
float rounding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from math import comb, factorial, prod
from typing import Any, Union

import mpmath

from .errors import CapExceeded
from .young import Partition, cells, dim_sym_irrep, dim_unitary_irrep, enumerate_partitions, content_sum

__all__ = [
    "PartitionDistribution",
    "BoundReport",
    "Advantage",
    "planch",
    "schur",
    "schur_dim_form",
    "schur_content_form",
    "l1_distance",
    "total_variation",
    "bhattacharyya",
    "fidelity",
    "delta",
    "kerov_moment",
    "kerov_closed_form",
    "check_delta_bounds",
    "check_monotonicity",
    "check_amplified_lower_bound",
    "check_fidelity_lower_bound",
    "distinguish_advantage",
]

MAX_K = 14
PRECISION_DPS = 50

Number = Union[Fraction, mpmath.mpf]


@dataclass(frozen=True)
class PartitionDistribution:
    """Exact probabilities on the partitions of ``k``, in reverse-lex order (read-only)."""

    k: int
    probs: dict

    def __post_init__(self):
        object.__setattr__(self, "probs", MappingProxyType(dict(self.probs)))
        total = Fraction(0)
        for lam, p in self.probs.items():
            if sum(lam) != self.k:
                raise ValueError(f"{lam} is not a partition of {self.k}")
            if p < 0:
                raise ValueError(f"negative probability {p} at {lam}")
            total += p
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def __getitem__(self, lam) -> Fraction:
        return self.probs.get(Partition(lam), Fraction(0))

    def items(self):
        return self.probs.items()

    def __iter__(self):
        return iter(self.probs)

    def __len__(self):
        return len(self.probs)

    def support(self) -> list[Partition]:
        return [lam for lam, p in self.probs.items() if p]

    def expectation(self, f) -> Fraction:
        return sum((p * f(lam) for lam, p in self.probs.items()), Fraction(0))


@dataclass
class BoundReport:
    """Outcome of checking one inequality at one parameter point.

    ``relation`` reads as ``lhs <relation> rhs``; for two-sided checks
    ``rhs`` is a ``(lower, upper)`` pair and the relation is ``"within"``.
    """

    name: str
    lhs: Any
    rhs: Any
    relation: str
    satisfied: bool
    context: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Advantage:
    l1: Fraction
    success: Fraction


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > MAX_K:
        raise CapExceeded(f"k={k} exceeds the cap {MAX_K}")


@lru_cache(maxsize=256)
def planch(k: int) -> PartitionDistribution:
    _check_k(k)
    kf = factorial(k)
    return PartitionDistribution(
        k, {lam: Fraction(dim_sym_irrep(lam) ** 2, kf) for lam in enumerate_partitions(k)}
    )


def schur_dim_form(k: int, d: int) -> dict:
    """dim P * dim Q^d / d^k for every partition of k (zeros kept)."""
    _check_k(k)
    dk = d**k
    return {
        lam: Fraction(dim_sym_irrep(lam) * dim_unitary_irrep(lam, d), dk)
        for lam in enumerate_partitions(k)
    }


def schur_content_form(k: int, d: int) -> dict:
    """Plancherel weight times the product of (1 + content/d) over cells."""
    _check_k(k)
    kf = factorial(k)
    return {
        lam: Fraction(dim_sym_irrep(lam) ** 2, kf)
        * prod((Fraction(d + c.content, d) for c in cells(lam)), start=Fraction(1))
        for lam in enumerate_partitions(k)
    }


@lru_cache(maxsize=1024)
def schur(k: int, d: int) -> PartitionDistribution:
    if d < 1:
        raise ValueError("d must be positive")
    dim_form = schur_dim_form(k, d)
    content_form = schur_content_form(k, d)
    if dim_form != content_form:
        raise ArithmeticError(f"Schur({k},{d}): dimension and content forms disagree")
    return PartitionDistribution(k, dim_form)


def _same_k(p: PartitionDistribution, q: PartitionDistribution) -> None:
    if p.k != q.k:
        raise ValueError(f"distributions over different k: {p.k} vs {q.k}")


def l1_distance(p: PartitionDistribution, q: PartitionDistribution) -> Fraction:
    _same_k(p, q)
    keys = set(p.probs) | set(q.probs)
    return sum((abs(p[lam] - q[lam]) for lam in keys), Fraction(0))


def total_variation(p: PartitionDistribution, q: PartitionDistribution) -> Fraction:
    return l1_distance(p, q) / 2


def _bhattacharyya_mp(p, q) -> mpmath.mpf:
    _same_k(p, q)
    with mpmath.workdps(PRECISION_DPS):
        total = mpmath.mpf(0)
        for lam in set(p.probs) | set(q.probs):
            pq = p[lam] * q[lam]
            if pq:
                total += mpmath.sqrt(mpmath.mpf(pq.numerator) / pq.denominator)
        return +total


def bhattacharyya(p: PartitionDistribution, q: PartitionDistribution) -> float:
    return float(_bhattacharyya_mp(p, q))


def fidelity(p: PartitionDistribution, q: PartitionDistribution) -> float:
    """Squared Bhattacharyya coefficient (the ||sqrt(rho) sqrt(sigma)||_1^2 convention)."""
    with mpmath.workdps(PRECISION_DPS):
        return float(_bhattacharyya_mp(p, q) ** 2)


def delta(k: int, d: int) -> Fraction:
    """||Schur(k,d) - Planch(k)||_1 exactly."""
    return l1_distance(schur(k, d), planch(k))


def kerov_moment(k: int, m: int) -> Fraction:
    """Plancherel expectation of content_sum(lam)**m by direct summation."""
    return planch(k).expectation(lambda lam: Fraction(content_sum(lam)) ** m)


def kerov_closed_form(k: int, m: int) -> Fraction:
    """Zero for odd m; (2j)! k! / (4^j j! (k-2j)!) for m = 2j (zero when k < 2j)."""
    if m % 2:
        return Fraction(0)
    j = m // 2
    if k < m:
        return Fraction(0)
    return Fraction(factorial(m) * factorial(k), 4**j * factorial(j) * factorial(k - m))


def _mp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def check_delta_bounds(k: int, d: int) -> BoundReport:
    """k/(36d) <= Delta_{k,d} <= sqrt(2) k/d, for 2 <= k <= d."""
    if not (2 <= k <= d and k <= MAX_K):
        raise ValueError(f"need 2 <= k <= d and k <= {MAX_K}, got k={k}, d={d}")
    dist = delta(k, d)
    lower = Fraction(k, 36 * d)
    # upper bound sqrt(2) k/d compared by squaring
    ok = lower <= dist and dist * dist <= Fraction(2 * k * k, d * d)
    with mpmath.workdps(PRECISION_DPS):
        upper = mpmath.sqrt(2) * k / d
    return BoundReport("delta_bounds", dist, (lower, upper), "within", ok, {"k": k, "d": d})


def check_monotonicity(k: int, d1: int, d2: int, r: int) -> BoundReport:
    """||Schur(k,d1) - Schur(k,d2)||_1 >= ||Schur(k,r d1) - Schur(k,r d2)||_1."""
    if min(d1, d2) < 1 or r < 2 or not 1 <= k <= MAX_K:
        raise ValueError(f"invalid parameters k={k}, d1={d1}, d2={d2}, r={r}")
    lhs = l1_distance(schur(k, d1), schur(k, d2))
    rhs = l1_distance(schur(k, r * d1), schur(k, r * d2))
    return BoundReport(
        "monotonicity", lhs, rhs, ">=", lhs >= rhs, {"k": k, "d1": d1, "d2": d2, "r": r}
    )


def check_amplified_lower_bound(k: int, d: int) -> BoundReport:
    """Delta/2 >= 1 - exp(-(k/d - 1)/10368), for k >= d >= 2."""
    if not (2 <= d <= k <= MAX_K):
        raise ValueError(f"need 2 <= d <= k <= {MAX_K}, got k={k}, d={d}")
    half = delta(k, d) / 2
    with mpmath.workdps(PRECISION_DPS):
        rhs = 1 - mpmath.exp(-(_mp(Fraction(k, d)) - 1) / 10368)
        ok = bool(_mp(half) >= rhs)
    return BoundReport("amplified_lower_bound", half, rhs, ">=", ok, {"k": k, "d": d})


def check_fidelity_lower_bound(k: int, d: int) -> BoundReport:
    """bhattacharyya(Schur(k,d), Planch(k)) >= 1 - k^3/(12 d^2), for 2 <= k <= d <= 40."""
    if not (2 <= k <= d <= 40 and k <= MAX_K):
        raise ValueError(f"need 2 <= k <= d <= 40 and k <= {MAX_K}, got k={k}, d={d}")
    b = _bhattacharyya_mp(schur(k, d), planch(k))
    rhs = 1 - Fraction(k**3, 12 * d * d)
    with mpmath.workdps(PRECISION_DPS):
        ok = bool(b >= _mp(rhs))
    return BoundReport(
        "fidelity_lower_bound", b, rhs, ">=", ok, {"k": k, "d": d, "quantity": "bhattacharyya"}
    )


def distinguish_advantage(k: int, d: int, r: int) -> Advantage:
    """Optimal equal-prior success for telling Schur(k,d) from Schur(k,d/r).

    The maximum-likelihood rule on the observed partition succeeds with
    probability 1/2 + l1/4.
    """
    if r < 1 or d % r:
        raise ValueError(f"r={r} must divide d={d}")
    l1 = l1_distance(schur(k, d), schur(k, d // r))
    return Advantage(l1, Fraction(1, 2) + l1 / 4)
