import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumformula.combinatorics import Index, SubsetJ, all_subsets, enumerate_index_set, enumerate_shuffles, enumerate_subsets
from sumformula.exact import (
    PVector,
    chain_sum,
    chain_sum_factored,
    check_inclusion_exclusion,
    check_numerator_identity,
    check_partial_fraction,
    check_shuffle_lemma,
    check_telescoping,
    check_thm2_closed,
    eval_A,
    eval_A_chain,
    eval_B,
    eval_C,
    eval_D_closed,
    eval_D_definition,
    eval_S_via_sigma,
    sample_nonzero_pair,
    sample_positive_rationals,
    sum_S_closed,
)
from sumformula.series import eval_S_bruteforce

positive = st.fractions(min_value=F(1, 50), max_value=50, max_denominator=50)


# ---- A, B, C


@pytest.mark.parametrize("l,m,expected", [(1, 5, F(1)), (2, 3, F(3, 2)), (2, 1, F(0))])
def test_A_examples(l, m, expected):
    assert eval_A(l, m) == expected
    assert eval_A_chain(l, m) == expected


def test_A_two_forms_agree():
    for l in range(1, 7):
        for m in range(1, 31):
            assert eval_A(l, m) == eval_A_chain(l, m), (l, m)


def test_B_examples():
    assert eval_B(2, 2, PVector((7, 7), 2)) == 1
    assert eval_B(1, 3, PVector((1, 2, 9))) == F(1, 3)
    assert eval_B(2, 4, PVector((2, 5, 4), 2)) == F(1, 14)


def test_C_examples():
    assert eval_C(1, 2, PVector((3,)), Index((1, 2)), 2) == F(1, 25)
    assert eval_C(2, 2, PVector((), 2), Index((1, 2)), 4) == F(1, 16)
    assert eval_C(1, 2, PVector((1, 2)), Index((1, 1, 2)), 1) == F(1, 32)


def test_pvector_rejects_missing_entry():
    with pytest.raises(IndexError):
        eval_B(1, 4, PVector((1, 2)))
    with pytest.raises(ValueError):
        PVector((1, 0))


# ---- partial fractions and shuffles


@pytest.mark.parametrize(
    "x,y,K,lhs",
    [(F(1), F(1), 1, F(1)), (F(2), F(3), 2, F(1, 4)), (F(1, 2), F(-1, 3), 3, F(8))],
)
def test_partial_fraction_examples(x, y, K, lhs):
    res = check_partial_fraction(x, y, K)
    assert res.passed and res.lhs == lhs == res.rhs


def test_partial_fraction_rejects_degenerate():
    for x, y in [(0, 1), (1, 0), (2, -2)]:
        with pytest.raises(ValueError):
            check_partial_fraction(F(x), F(y), 2)


def test_partial_fraction_all_K():
    rng = random.Random(3)
    for K in range(1, 21):
        for _ in range(10):
            x, y = sample_nonzero_pair(rng)
            assert check_partial_fraction(x, y, K).passed


def test_shuffle_lemma_examples():
    a, b = F(3, 7), F(5, 2)
    res = check_shuffle_lemma([a], [b])
    assert res.lhs == 1 / (a * (a + b)) + 1 / (b * (a + b)) == 1 / (a * b)
    res = check_shuffle_lemma([], [1, 2])
    assert res.passed and res.lhs == F(1, 3)
    res = check_shuffle_lemma([1, 1], [2])
    assert res.passed and res.lhs == F(1, 4)


@settings(max_examples=60, deadline=None)
@given(xs=st.lists(positive, max_size=4), ys=st.lists(positive, max_size=3))
def test_shuffle_lemma_property(xs, ys):
    assert check_shuffle_lemma(xs, ys).passed


def test_shuffle_lemma_zero_partial_sum():
    with pytest.raises(ZeroDivisionError):
        check_shuffle_lemma([F(1), F(-1)], [])


def test_shuffle_sum_over_permutations():
    """Sum over Sh(l, r) of the sigma-reordered nested reciprocal is B_{1,l} B_{l,r}."""
    rng = random.Random(11)
    for r in range(1, 7):
        for l in range(1, r + 1):
            p = PVector(tuple(rng.randint(1, 9) for _ in range(r - 1)))
            total = F(0)
            for sigma in enumerate_shuffles(l, r):
                inv = sigma.inverse()
                acc, denom = 0, 1
                for j in range(1, r):
                    acc += p[inv[j - 1]]
                    denom *= acc
                total += F(1, denom)
            assert total == eval_B(1, l, p) * eval_B(l, r, p)


# ---- D_l and telescoping


def test_D_examples():
    assert eval_D_definition(2, PVector((), 2), 3, 2, 1) == 1
    # r = 1: 1/(1 * 3^2); r = 2: (1/2) * 1/3^2
    assert eval_D_definition(1, PVector((2,)), 3, 2, 1) == F(1, 6)
    assert eval_D_closed(1, PVector((2,)), 3, 2, 1) == F(1, 6)
    assert eval_D_closed(2, PVector((1,), 2), 4, 3, 1) == F(1, 2)
    assert eval_D_definition(2, PVector((1,), 2), 4, 3, 1) == F(1, 2)
    assert eval_D_closed(1, PVector((3,)), 3, 2, 2) == F(1, 30)


def test_D_closed_routes_l_equals_n_to_definition():
    for n in range(1, 5):
        assert eval_D_closed(n, PVector((), n), n + 2, n, 3) == eval_D_definition(n, PVector((), n), n + 2, n, 3)


def _box(rng, samples=2):
    for n in range(1, 6):
        for l in range(1, n + 1):
            for k in range(n + 1, n + 5):
                for m in range(1, 7):
                    for _ in range(samples):
                        yield n, l, k, m, PVector(tuple(rng.randint(1, 8) for _ in range(n - l)), l)


def test_D_closed_matches_definition_on_box():
    for n, l, k, m, p in _box(random.Random(5)):
        assert eval_D_definition(l, p, k, n, m) == eval_D_closed(l, p, k, n, m), (n, l, k, m, p)


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_D_closed_matches_definition_random(data):
    n = data.draw(st.integers(1, 5))
    l = data.draw(st.integers(1, n))
    k = data.draw(st.integers(n + 1, n + 4))
    m = data.draw(st.integers(1, 6))
    p = PVector(tuple(data.draw(st.lists(st.integers(1, 8), min_size=n - l, max_size=n - l))), l)
    assert eval_D_definition(l, p, k, n, m) == eval_D_closed(l, p, k, n, m)


def test_telescoping_examples():
    assert check_telescoping(1, 2, PVector((1, 1)), 4, 3, 2).passed
    assert check_telescoping(2, 3, PVector((1, 2, 1), 2), 6, 4, 3).passed
    # t = l: both sides are sum over I(k, l) of m^{-k_l} C_{l,l+1}
    p = PVector((2, 3), 1)
    res = check_telescoping(1, 1, p, 5, 3, 2)
    direct = sum((F(1, 2 ** kv[1]) * eval_C(1, 2, p, kv, 2) for kv in enumerate_index_set(5, 3, 1)), F(0))
    assert res.lhs == res.rhs == direct


def test_telescoping_on_box():
    for n, l, k, m, p in _box(random.Random(9)):
        for t in range(l, n):
            assert check_telescoping(l, t, p, k, n, m).passed


# ---- chain sums, inclusion-exclusion, closed route for the alternating S-sum


@pytest.mark.parametrize("k,n,m,l,expected", [(3, 2, 2, 1, F(3, 8)), (3, 2, 2, 2, F(1, 4))])
def test_sum_S_closed_examples(k, n, m, l, expected):
    assert sum_S_closed(k, n, m, l) == expected


def test_sum_S_closed_vanishes_at_m_one():
    for n in range(2, 6):
        for l in range(2, n + 1):
            assert sum_S_closed(n + 2, n, 1, l) == 0


def test_chain_sum_routes_agree():
    for n in range(1, 6):
        for m in range(1, 13):
            for l in range(1, n + 2):
                assert chain_sum(m, n, l) == chain_sum_factored(m, n, l) if l <= n else chain_sum_factored(m, n, l) == 0


@pytest.mark.parametrize("n,m", [(2, 3), (1, 7), (3, 2)])
def test_inclusion_exclusion_examples(n, m):
    res = check_inclusion_exclusion(n, m)
    assert res.passed and res.lhs == F(1, m ** (n - 1))
    assert res.parameters["partition"] is True


def test_inclusion_exclusion_harmonic_case():
    res = check_inclusion_exclusion(2, 3)
    assert res.lhs == (1 + F(1, 2) + F(1, 3)) - (1 + F(1, 2))


def test_thm2_closed_examples():
    res = check_thm2_closed(3, 2, 2)
    assert res.lhs == F(3, 8) - F(1, 4) == F(1, 8) and res.passed
    for n in range(1, 5):
        assert check_thm2_closed(n + 3, n, 1).lhs == 1
    assert check_thm2_closed(5, 3, 4).lhs == F(1, 1024)


def test_thm2_closed_small_box():
    for n in range(1, 5):
        for k in range(n + 1, n + 4):
            for m in range(1, 12):
                assert check_thm2_closed(k, n, m).passed


# ---- numerator identity


def test_numerator_identity_examples():
    assert check_numerator_identity(F(0), [3, 1, 4], 3).lhs == 0
    res = check_numerator_identity(F(1), [3, 1, 4], 3)
    assert res.lhs == res.rhs == 1
    res = check_numerator_identity(F(1, 2), [1, 2], 2)
    assert res.lhs == F(5, 8) == 1 - F(1, 2) * F(3, 4)


@settings(max_examples=100, deadline=None)
@given(
    t=st.fractions(min_value=-1, max_value=1, max_denominator=12),
    ms=st.lists(st.integers(1, 10), min_size=1, max_size=6),
)
def test_numerator_identity_property(t, ms):
    assert check_numerator_identity(t, ms, len(ms)).passed


# ---- S(k, m, J) in the sigma parameterization


def _subsets(n):
    return all_subsets(n)


@pytest.mark.parametrize("n,cap", [(1, 6), (2, 6), (3, 4)])
def test_S_via_sigma_matches_definition(n, cap):
    for J in _subsets(n):
        for k in (n + 1, n + 2):
            for m in range(J.cardinality(), J.cardinality() + 3):
                assert eval_S_via_sigma(k, n, m, J, cap) == eval_S_bruteforce(k, n, m, J, cap), (J, k, m)


def test_S_via_sigma_full_J_independent_of_cap():
    J = SubsetJ((1, 2, 3), 3)
    assert eval_S_via_sigma(5, 3, 4, J, 1) == eval_S_via_sigma(5, 3, 4, J, 9)


def test_S_via_sigma_monotone_in_cap():
    J = SubsetJ((2,), 3)
    values = [eval_S_via_sigma(5, 3, 2, J, cap) for cap in range(1, 7)]
    assert values == sorted(values) and len(set(values)) == len(values)


def test_fix_l_r_proposition_at_matched_truncation():
    """Sum of truncated S over |J| = l, max J = r equals A_l * sum_p B_{l,r} sum_I C_{l,r}."""
    cap = 4
    for n in range(1, 4):
        for r in range(1, n + 1):
            for l in range(1, r + 1):
                for k in (n + 1, n + 2):
                    for m in range(1, 5):
                        lhs = sum((eval_S_via_sigma(k, n, m, J, cap) for J in enumerate_subsets(n, l, r)), F(0))
                        rhs = F(0)
                        for free in itertools.product(range(1, cap + 1), repeat=n - l):
                            p = PVector(free, l)
                            rhs += eval_B(l, r, p) * sum(
                                (eval_C(l, r, p, kv, m) for kv in enumerate_index_set(k, n, r)), F(0)
                            )
                        assert lhs == eval_A(l, m) * rhs, (n, l, r, k, m)


def test_samplers_are_seeded():
    a = sample_positive_rationals(random.Random(1), 5)
    b = sample_positive_rationals(random.Random(1), 5)
    assert a == b and all(x > 0 for x in a)
