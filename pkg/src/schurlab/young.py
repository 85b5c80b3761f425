"""Partitions, Young diagrams and the dimension formulas attached to them.

A partition is stored as a plain tuple of weakly decreasing positive parts
(``Partition`` subclasses ``tuple``), so it hashes, sorts and serializes
like any tuple. All dimension arithmetic is done in Python integers.
"""
from __future__ import annotations

from functools import lru_cache
from math import factorial, prod
from typing import Iterator, NamedTuple, Optional

from .errors import CapExceeded

__all__ = [
    "Partition",
    "Cell",
    "enumerate_partitions",
    "cells",
    "dim_sym_irrep",
    "dim_unitary_irrep",
    "content_sum",
    "transpose",
    "count_syt_bruteforce",
    "count_ssyt_bruteforce",
]

SYT_BRUTEFORCE_MAX_K = 10


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        for i, p in enumerate(parts):
            if p < 1:
                raise ValueError(f"partition parts must be positive: {parts}")
            if i and parts[i - 1] < p:
                raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def k(self) -> int:
        return sum(self)

    @property
    def rows(self) -> int:
        return len(self)

    def __repr__(self):
        return f"Partition({tuple(self)!r})"

    def __str__(self):
        return "(" + ",".join(str(p) for p in self) + ")"

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"(3,1)"``, ``"3,1"`` or ``"()"``."""
        body = text.strip().strip("()[] ")
        if not body:
            return cls(())
        return cls(int(x) for x in body.split(","))


class Cell(NamedTuple):
    row: int
    col: int
    content: int
    hook: int


def _as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(lam)


def enumerate_partitions(k: int, max_rows: Optional[int] = None) -> list[Partition]:
    """All partitions of ``k`` in reverse-lexicographic order.

    >>> [tuple(p) for p in enumerate_partitions(3)]
    [(3,), (2, 1), (1, 1, 1)]
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    return list(_partitions(k, k if max_rows is None else max_rows))


@lru_cache(maxsize=None)
def _partitions(k: int, max_rows: int) -> tuple[Partition, ...]:
    out = []

    def rec(remaining, largest, prefix):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if len(prefix) == max_rows:
            return
        for part in range(min(remaining, largest), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(k, k, ())
    return tuple(out)


def transpose(lam) -> Partition:
    lam = _as_partition(lam)
    if not lam:
        return lam
    return Partition(sum(1 for p in lam if p >= j) for j in range(1, lam[0] + 1))


def cells(lam) -> Iterator[Cell]:
    """Cells of the diagram with 1-based coordinates, content and hook length."""
    lam = _as_partition(lam)
    lt = transpose(lam)
    for i, part in enumerate(lam, start=1):
        for j in range(1, part + 1):
            yield Cell(i, j, j - i, part - j + lt[j - 1] - i + 1)


@lru_cache(maxsize=None)
def _dim_sym(lam: Partition) -> int:
    return factorial(lam.k) // prod(c.hook for c in cells(lam))


def dim_sym_irrep(lam) -> int:
    """Dimension of the S_k irrep labelled by ``lam`` (hook length formula)."""
    return _dim_sym(_as_partition(lam))


def dim_unitary_irrep(lam, d: int) -> int:
    """Dimension of the U_d irrep labelled by ``lam``; zero if it has more than d rows."""
    lam = _as_partition(lam)
    if d < 1:
        raise ValueError("d must be positive")
    if lam.rows > d:
        return 0
    num = dim_sym_irrep(lam) * prod(d + c.content for c in cells(lam))
    q, rem = divmod(num, factorial(lam.k))
    if rem:
        raise ArithmeticError(f"non-integral dimension for {lam}, d={d}")
    return q


def content_sum(lam) -> int:
    """Sum of contents j - i over the cells; zero for self-conjugate shapes."""
    return sum(c.content for c in cells(lam))


def count_syt_bruteforce(lam) -> int:
    """Count standard Young tableaux of shape ``lam`` by exhaustive filling.

    Entries 1..k are placed one at a time into every cell that keeps the
    filled region a Young diagram. Exponential; limited to k <= 10.
    """
    lam = _as_partition(lam)
    if lam.k > SYT_BRUTEFORCE_MAX_K:
        raise CapExceeded(f"brute-force SYT count limited to k <= {SYT_BRUTEFORCE_MAX_K}")

    def rec(filled):
        if list(filled) == list(lam):
            return 1
        total = 0
        for i in range(len(lam)):
            if filled[i] < lam[i] and (i == 0 or filled[i - 1] > filled[i]):
                filled[i] += 1
                total += rec(filled)
                filled[i] -= 1
        return total

    return rec([0] * len(lam))


def count_ssyt_bruteforce(lam, d: int) -> int:
    """Count semistandard tableaux of shape ``lam`` with entries in 1..d.

    Fills cells in row-major order, checking rows weakly increase and
    columns strictly increase. Only meant for tiny shapes.
    """
    lam = _as_partition(lam)
    positions = [(i, j) for i, part in enumerate(lam) for j in range(part)]
    grid: dict[tuple[int, int], int] = {}

    def rec(idx):
        if idx == len(positions):
            return 1
        i, j = positions[idx]
        lo = 1
        if j > 0:
            lo = max(lo, grid[(i, j - 1)])
        if i > 0:
            lo = max(lo, grid[(i - 1, j)] + 1)
        total = 0
        for v in range(lo, d + 1):
            grid[(i, j)] = v
            total += rec(idx + 1)
        grid.pop((i, j), None)
        return total

    return rec(0)
