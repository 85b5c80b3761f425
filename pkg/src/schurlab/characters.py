"""Irreducible characters of the symmetric group.

Characters are evaluated with the Murnaghan-Nakayama rule on beta-sets
(first-column hook lengths): removing a border strip of length ``r``
moves one bead from position ``b`` to ``b - r``, with sign
``(-1)**(beads jumped over)``, which equals ``(-1)**height`` of the strip.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Sequence, Union

from .errors import CapExceeded
from .young import Partition, dim_sym_irrep, enumerate_partitions

__all__ = [
    "CycleType",
    "SymmetricCharacterTable",
    "conjugacy_classes",
    "cycle_type",
    "character",
    "character_table",
    "use_table_store",
    "central_character_transposition",
    "transposition_class",
]

MAX_K = 14


@dataclass(frozen=True)
class CycleType:
    cycles: Partition
    class_size: int

    @classmethod
    def of(cls, cycles) -> "CycleType":
        cycles = Partition(sorted(cycles, reverse=True))
        return cls(cycles, class_size(cycles))

    @property
    def k(self) -> int:
        return self.cycles.k

    @property
    def sign(self) -> int:
        return -1 if (self.k - len(self.cycles)) % 2 else 1


def class_size(cycles) -> int:
    mult = Counter(cycles)
    return factorial(sum(cycles)) // prod(m**c * factorial(c) for m, c in mult.items())


def conjugacy_classes(k: int) -> list[CycleType]:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > MAX_K:
        raise CapExceeded(f"k={k} exceeds the cap {MAX_K}")
    return [CycleType(mu, class_size(mu)) for mu in enumerate_partitions(k)]


def transposition_class(k: int) -> CycleType:
    if k < 2:
        raise ValueError("transpositions need k >= 2")
    return CycleType.of((2,) + (1,) * (k - 2))


def cycle_type(perm: Sequence[int]) -> Partition:
    """Cycle lengths of a permutation given as a 0-based image tuple."""
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        n, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            n += 1
        lengths.append(n)
    return Partition(sorted(lengths, reverse=True))


def _beta(lam: tuple) -> tuple:
    n = len(lam)
    return tuple(p + n - 1 - i for i, p in enumerate(lam))


def _from_beta(beta) -> tuple:
    beta = sorted(beta, reverse=True)
    n = len(beta)
    return tuple(p for p in (b - (n - 1 - i) for i, b in enumerate(beta)) if p > 0)


@lru_cache(maxsize=None)
def _mn(lam: tuple, mu: tuple) -> int:
    # mu is sorted in decreasing order; strip off its largest part
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    beta = _beta(lam)
    occupied = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in occupied:
            continue
        jumped = sum(1 for c in beta if target < c < b)
        sub = _from_beta([target if c == b else c for c in beta])
        total += (-1) ** jumped * _mn(sub, rest)
    return total


def character(lam, mu: Union[CycleType, Sequence[int]]) -> int:
    """chi_lam evaluated on the conjugacy class with cycle type ``mu``."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    cycles = mu.cycles if isinstance(mu, CycleType) else tuple(sorted(mu, reverse=True))
    if sum(cycles) != lam.k:
        raise ValueError(f"shape mismatch: {lam} has k={lam.k}, cycle type {tuple(cycles)}")
    return _mn(tuple(lam), tuple(cycles))


@dataclass(frozen=True)
class SymmetricCharacterTable:
    """Integer character table of S_k; rows are partitions, columns cycle types."""

    k: int
    irreps: tuple
    classes: tuple
    values: tuple

    def value(self, lam, cycles) -> int:
        cycles = cycles.cycles if isinstance(cycles, CycleType) else tuple(sorted(cycles, reverse=True))
        col = next(j for j, c in enumerate(self.classes) if c.cycles == cycles)
        return self.values[self.irreps.index(tuple(lam))][col]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "irreps": [list(p) for p in self.irreps],
            "classes": [[list(c.cycles), c.class_size] for c in self.classes],
            "values": [list(row) for row in self.values],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SymmetricCharacterTable":
        return cls(
            k=data["k"],
            irreps=tuple(Partition(p) for p in data["irreps"]),
            classes=tuple(CycleType(Partition(c), s) for c, s in data["classes"]),
            values=tuple(tuple(row) for row in data["values"]),
        )


_tables: dict = {}
_table_store = None


def use_table_store(store) -> None:
    """Install an object with ``load(k) -> dict | None`` and ``save(k, dict)``.

    Tables found in the store are used as-is; computed ones are written back.
    Pass ``None`` to go back to in-memory caching only.
    """
    global _table_store
    _table_store = store


def _compute_table(k: int) -> SymmetricCharacterTable:
    classes = tuple(conjugacy_classes(k))
    irreps = tuple(enumerate_partitions(k))
    values = tuple(tuple(character(lam, mu) for mu in classes) for lam in irreps)
    return SymmetricCharacterTable(k, irreps, classes, values)


def character_table(k: int) -> SymmetricCharacterTable:
    table = _tables.get(k)
    if table is not None:
        return table
    store = _table_store
    data = store.load(k) if store is not None else None
    if data is not None:
        table = SymmetricCharacterTable.from_json(data)
    else:
        table = _compute_table(k)
        if store is not None:
            store.save(k, table.to_json())
    _tables[k] = table
    return table


def central_character_transposition(lam) -> Fraction:
    """C(k,2) * chi_lam(transposition) / dim P_lam, as an exact rational."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    k = lam.k
    return Fraction(comb(k, 2) * character(lam, transposition_class(k)), dim_sym_irrep(lam))
