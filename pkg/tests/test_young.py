from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from schurlab.errors import CapExceeded
from schurlab.young import (
    Partition,
    cells,
    content_sum,
    count_ssyt_bruteforce,
    count_syt_bruteforce,
    dim_sym_irrep,
    dim_unitary_irrep,
    enumerate_partitions,
    transpose,
)


def _partition_count(k, largest=None):
    # p(k) by the standard recurrence on the largest part
    largest = k if largest is None else largest
    if k == 0:
        return 1
    return sum(_partition_count(k - j, j) for j in range(1, min(k, largest) + 1))


partitions = st.integers(1, 8).flatmap(lambda k: st.sampled_from(enumerate_partitions(k)))


def test_enumerate_small():
    assert enumerate_partitions(0) == [()]
    assert enumerate_partitions(3) == [(3,), (2, 1), (1, 1, 1)]
    assert len(enumerate_partitions(8)) == 22


@pytest.mark.parametrize("k", range(0, 13))
def test_enumerate_counts_and_order(k):
    parts = enumerate_partitions(k)
    assert len(parts) == _partition_count(k)
    assert parts == sorted(parts, reverse=True)
    assert all(sum(p) == k and list(p) == sorted(p, reverse=True) for p in parts)


def test_enumerate_max_rows():
    assert enumerate_partitions(4, max_rows=2) == [(4,), (3, 1), (2, 2)]


def test_partition_validation_and_parse():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    assert Partition.parse("(3,1)") == (3, 1)
    assert str(Partition((2, 1, 1))) == "(2,1,1)"
    assert Partition.parse(str(Partition(()))) == ()


@pytest.mark.parametrize("lam,dim", [((5,), 1), ((2, 1), 2), ((2, 2), 2), ((3, 2), 5), ((1, 1, 1), 1)])
def test_dim_sym_examples(lam, dim):
    assert dim_sym_irrep(lam) == dim == count_syt_bruteforce(lam)


@pytest.mark.parametrize("k", range(1, 9))
def test_hook_formula_matches_syt_count(k):
    for lam in enumerate_partitions(k):
        assert dim_sym_irrep(lam) == count_syt_bruteforce(lam)


def test_syt_bruteforce_cap():
    with pytest.raises(CapExceeded):
        count_syt_bruteforce((11,))


@pytest.mark.parametrize("k", range(1, 15))
def test_sum_of_squares(k):
    assert sum(dim_sym_irrep(lam) ** 2 for lam in enumerate_partitions(k)) == factorial(k)


@pytest.mark.parametrize("d", range(1, 5))
def test_dim_unitary_examples(d):
    assert dim_unitary_irrep((1,), d) == d
    assert dim_unitary_irrep((2,), d) == d * (d + 1) // 2 == count_ssyt_bruteforce((2,), d)
    assert dim_unitary_irrep((1, 1), d) == d * (d - 1) // 2 == count_ssyt_bruteforce((1, 1), d)
    assert dim_unitary_irrep((1, 1, 1), 2) == 0


@settings(max_examples=60, deadline=None)
@given(partitions.filter(lambda p: p.k <= 6), st.integers(1, 4))
def test_content_formula_matches_ssyt(lam, d):
    assert dim_unitary_irrep(lam, d) == count_ssyt_bruteforce(lam, d)


@pytest.mark.parametrize("k", range(1, 11))
def test_schur_weyl_dimension_count(k):
    for d in range(1, 11):
        total = sum(dim_sym_irrep(lam) * dim_unitary_irrep(lam, d) for lam in enumerate_partitions(k, max_rows=d))
        assert total == d**k


def test_content_sum_examples():
    assert content_sum((6,)) == comb(6, 2)
    assert content_sum((2, 1)) == 0
    assert content_sum((1, 1)) == -1


def test_transpose_examples():
    assert transpose((3,)) == (1, 1, 1)
    assert transpose((2, 1)) == (2, 1)
    assert transpose((4, 2, 1)) == (3, 2, 1, 1)


@settings(max_examples=100, deadline=None)
@given(partitions)
def test_transpose_properties(lam):
    assert transpose(transpose(lam)) == lam
    assert content_sum(transpose(lam)) == -content_sum(lam)
    assert dim_sym_irrep(transpose(lam)) == dim_sym_irrep(lam)


def test_cells_hooks():
    got = [(c.row, c.col, c.content, c.hook) for c in cells((2, 1))]
    assert got == [(1, 1, 0, 3), (1, 2, 1, 1), (2, 1, -1, 1)]
