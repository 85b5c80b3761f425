import itertools
from collections import Counter
from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from schurlab import characters
from schurlab.characters import (
    CycleType,
    central_character_transposition,
    character,
    character_table,
    conjugacy_classes,
    cycle_type,
    transposition_class,
)
from schurlab.errors import CapExceeded
from schurlab.young import Partition, content_sum, dim_sym_irrep, enumerate_partitions


def _classes_by_enumeration(k):
    return Counter(cycle_type(p) for p in itertools.permutations(range(k)))


def test_class_examples():
    assert {c.cycles: c.class_size for c in conjugacy_classes(2)} == {(2,): 1, (1, 1): 1}
    assert {c.cycles: c.class_size for c in conjugacy_classes(3)} == {(1, 1, 1): 1, (2, 1): 3, (3,): 2}


@pytest.mark.parametrize("k", range(1, 7))
def test_class_sizes_bruteforce(k):
    assert {c.cycles: c.class_size for c in conjugacy_classes(k)} == dict(_classes_by_enumeration(k))


def test_five_cycle_class():
    assert CycleType.of((5,)).class_size == 24 == _classes_by_enumeration(5)[(5,)]


def test_class_caps():
    with pytest.raises(ValueError):
        conjugacy_classes(0)
    with pytest.raises(CapExceeded):
        conjugacy_classes(15)


def test_trivial_and_sign():
    for mu in conjugacy_classes(6):
        assert character((6,), mu) == 1
        assert character((1,) * 6, mu) == mu.sign == (-1) ** (6 - len(mu.cycles))


def _standard_character_numeric(k, perm):
    # permutation representation on C^k restricted to the sum-zero subspace
    mat = np.zeros((k, k))
    mat[list(perm), range(k)] = 1
    basis = np.linalg.qr(np.eye(k)[:, :-1] - np.eye(k)[:, -1:])[0]
    return float(np.trace(basis.T @ mat @ basis))


def test_two_one_on_three_cycle():
    assert character((2, 1), (3,)) == -1
    assert _standard_character_numeric(3, (1, 2, 0)) == pytest.approx(-1.0)


@pytest.mark.parametrize("k", range(2, 7))
def test_standard_rep_against_projection(k):
    lam = (k - 1, 1)
    for perm in itertools.permutations(range(k)):
        assert character(lam, cycle_type(perm)) == pytest.approx(_standard_character_numeric(k, perm), abs=1e-9)


@pytest.mark.parametrize("k", range(1, 11))
def test_row_orthogonality(k):
    table = character_table(k)
    sizes = [c.class_size for c in table.classes]
    for i, row_a in enumerate(table.values):
        for j, row_b in enumerate(table.values):
            inner = sum(s * a * b for s, a, b in zip(sizes, row_a, row_b))
            assert inner == (factorial(k) if i == j else 0)


@pytest.mark.parametrize("k", range(1, 13))
def test_identity_column_is_dimension(k):
    for lam in enumerate_partitions(k):
        assert character(lam, (1,) * k) == dim_sym_irrep(lam)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        character((2, 1), (2,))


def test_central_character_examples():
    assert central_character_transposition((2,)) == 1
    assert central_character_transposition((2, 1)) == 0
    assert central_character_transposition((3, 1)) == 2 == content_sum((3, 1))
    assert isinstance(central_character_transposition((3, 1)), Fraction)
    with pytest.raises(ValueError):
        transposition_class(1)


@pytest.mark.parametrize("k", range(2, 13))
def test_jucys_identity(k):
    for lam in enumerate_partitions(k):
        assert central_character_transposition(lam) == content_sum(lam)


def test_table_value_lookup_and_json_roundtrip():
    table = character_table(4)
    assert table.value((2, 2), (2, 2)) == 2
    assert table.value((3, 1), CycleType.of((3, 1))) == 0
    again = characters.SymmetricCharacterTable.from_json(table.to_json())
    assert again == table


def test_table_store_hook():
    class Store:
        def __init__(self):
            self.saved = {}

        def load(self, k):
            return self.saved.get(k)

        def save(self, k, data):
            self.saved[k] = data

    store = Store()
    characters._tables.clear()
    characters.use_table_store(store)
    try:
        first = character_table(5)
        assert 5 in store.saved
        characters._tables.clear()
        assert character_table(5) == first
    finally:
        characters.use_table_store(None)
        characters._tables.clear()
