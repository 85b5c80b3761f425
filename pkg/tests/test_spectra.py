import itertools
from fractions import Fraction
from math import comb, factorial

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schurlab.errors import CapExceeded
from schurlab.sampling import schur_projectors
from schurlab.spectra import (
    PartitionDistribution,
    bhattacharyya,
    check_amplified_lower_bound,
    check_delta_bounds,
    check_fidelity_lower_bound,
    check_monotonicity,
    delta,
    distinguish_advantage,
    fidelity,
    kerov_closed_form,
    kerov_moment,
    l1_distance,
    planch,
    schur,
    schur_content_form,
    schur_dim_form,
    total_variation,
)

F = Fraction


def _identity_walks(k, n):
    """Number of n-tuples of transpositions in S_k whose product is the identity."""
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    swaps = []
    for a, b in itertools.combinations(range(k), 2):
        t = list(range(k))
        t[a], t[b] = b, a
        swaps.append(t)
    step = [[index[tuple(p[t[i]] for i in range(k))] for t in swaps] for p in perms]
    counts = [0] * len(perms)
    counts[index[tuple(range(k))]] = 1
    for _ in range(n):
        new = [0] * len(perms)
        for i, c in enumerate(counts):
            if c:
                for j in step[i]:
                    new[j] += c
        counts = new
    return counts[index[tuple(range(k))]]


def test_planch_examples():
    assert dict(planch(1).items()) == {(1,): 1}
    assert dict(planch(2).items()) == {(2,): F(1, 2), (1, 1): F(1, 2)}
    assert dict(planch(3).items()) == {(3,): F(1, 6), (2, 1): F(2, 3), (1, 1, 1): F(1, 6)}


@pytest.mark.parametrize("d", range(1, 9))
def test_schur_k2(d):
    s = schur(2, d)
    assert s[(2,)] == F(d + 1, 2 * d)
    assert s[(1, 1)] == F(d - 1, 2 * d)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_schur_k2_against_projectors(d):
    proj = schur_projectors(2, d)
    for lam in [(2,), (1, 1)]:
        assert np.trace(proj[lam]) / d**2 == pytest.approx(float(schur(2, d)[lam]), abs=1e-12)


def test_schur_examples():
    assert dict(schur(2, 1).items()) == {(2,): 1, (1, 1): 0}
    assert dict(schur(3, 3).items()) == {(3,): F(10, 27), (2, 1): F(16, 27), (1, 1, 1): F(1, 27)}


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 12), st.integers(1, 30))
def test_dim_and_content_forms_agree(k, d):
    assert schur_dim_form(k, d) == schur_content_form(k, d)
    assert sum(schur(k, d).probs.values()) == 1


def test_distribution_validation():
    with pytest.raises(ValueError):
        PartitionDistribution(2, {(2,): F(1, 2)})
    with pytest.raises(ValueError):
        PartitionDistribution(2, {(2,): F(3, 2), (1, 1): F(-1, 2)})
    with pytest.raises(TypeError):
        planch(2).probs[(2,)] = 1


def test_caps():
    with pytest.raises(CapExceeded):
        planch(15)
    with pytest.raises(ValueError):
        planch(0)
    with pytest.raises(ValueError):
        schur(2, 0)


def test_distances():
    assert l1_distance(planch(4), planch(4)) == 0
    for d in range(2, 12):
        assert l1_distance(schur(2, d), planch(2)) == F(1, d)
    assert delta(3, 3) == F(11, 27)
    assert total_variation(schur(3, 3), planch(3)) == F(11, 54)
    with pytest.raises(ValueError):
        l1_distance(planch(2), planch(3))


def test_bhattacharyya():
    assert bhattacharyya(planch(5), planch(5)) == pytest.approx(1.0, abs=1e-15)
    for d in range(2, 31):
        expected = (mpmath.sqrt(1 - mpmath.mpf(1) / d) + mpmath.sqrt(1 + mpmath.mpf(1) / d)) / 2
        assert bhattacharyya(schur(2, d), planch(2)) == pytest.approx(float(expected), abs=1e-12)
    with mpmath.workdps(40):
        direct = sum(mpmath.sqrt(mpmath.mpf(a) / b) for a, b in [(10, 27 * 6), (32, 81), (1, 27 * 6)])
    assert bhattacharyya(schur(3, 3), planch(3)) == pytest.approx(float(direct), abs=1e-14)
    assert fidelity(schur(3, 3), planch(3)) == pytest.approx(float(direct) ** 2, abs=1e-14)


def test_kerov_low_moments():
    assert kerov_moment(3, 2) == 3 == comb(3, 2)
    for k in range(1, 10):
        assert kerov_moment(k, 1) == 0
        assert kerov_moment(k, 2) == comb(k, 2) == kerov_closed_form(k, 2)


@pytest.mark.parametrize("k,n", [(3, 2), (4, 2), (4, 3), (4, 4), (5, 4), (5, 6), (6, 4)])
def test_kerov_moment_against_transposition_walks(k, n):
    assert kerov_moment(k, n) == _identity_walks(k, n)


def test_kerov_fourth_moment_k4():
    # the closed form evaluates to 18 here, the actual Plancherel moment is 120
    assert kerov_closed_form(4, 4) == 18
    assert kerov_moment(4, 4) == 120 == _identity_walks(4, 4)


@pytest.mark.parametrize("k", range(1, 13))
def test_kerov_odd_moments_vanish(k):
    for m in (1, 3, 5, 7, 9):
        assert kerov_moment(k, m) == 0
        assert kerov_closed_form(k, m) == 0


def test_delta_bounds_examples():
    rep = check_delta_bounds(2, 5)
    assert rep.satisfied and rep.lhs == F(1, 5) and rep.rhs[0] == F(2, 180)
    assert float(rep.rhs[1]) == pytest.approx(2 * 2**0.5 / 5)
    rep = check_delta_bounds(3, 3)
    assert rep.satisfied and rep.lhs == F(11, 27) and rep.rhs[0] == F(1, 36)
    rep = check_delta_bounds(2, 2)
    assert rep.satisfied and rep.lhs == F(1, 2)
    with pytest.raises(ValueError):
        check_delta_bounds(3, 2)


def test_monotonicity_examples():
    rep = check_monotonicity(2, 2, 4, 2)
    assert rep.lhs == F(1, 4) and rep.rhs == F(1, 8) and rep.satisfied
    rep = check_monotonicity(4, 5, 5, 2)
    assert rep.lhs == rep.rhs == 0 and rep.satisfied
    assert check_monotonicity(3, 3, 6, 2).satisfied
    with pytest.raises(ValueError):
        check_monotonicity(3, 3, 6, 1)


def test_amplified_lower_bound_examples():
    rep = check_amplified_lower_bound(5, 5)
    assert rep.rhs == 0 and rep.satisfied
    assert check_amplified_lower_bound(8, 2).satisfied
    assert check_amplified_lower_bound(12, 3).satisfied
    with pytest.raises(ValueError):
        check_amplified_lower_bound(2, 3)


def test_fidelity_lower_bound_examples():
    rep = check_fidelity_lower_bound(2, 4)
    assert float(rep.lhs) == pytest.approx(0.9921, abs=1e-4)
    assert rep.rhs == 1 - F(8, 192) and rep.satisfied
    rep = check_fidelity_lower_bound(2, 2)
    assert float(rep.lhs) == pytest.approx((0.5**0.5 + 1.5**0.5) / 2, abs=1e-14)
    assert rep.satisfied
    assert check_fidelity_lower_bound(3, 10).satisfied
    with pytest.raises(ValueError):
        check_fidelity_lower_bound(2, 41)


def test_distinguish_advantage():
    adv = distinguish_advantage(2, 4, 2)
    assert adv.l1 == F(1, 4) and adv.success == F(9, 16)
    adv = distinguish_advantage(3, 6, 1)
    assert adv.l1 == 0 and adv.success == F(1, 2)
    assert distinguish_advantage(6, 12, 2).success > F(9, 16)
    with pytest.raises(ValueError):
        distinguish_advantage(2, 5, 2)


@pytest.mark.parametrize("k", range(2, 9))
def test_schur_converges_to_planch(k):
    deltas = [delta(k, k * 2**j) for j in range(4)]
    assert all(a >= b for a, b in zip(deltas, deltas[1:]))
