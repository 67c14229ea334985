"""Structure of the reachable-lcm census."""

from itertools import product
from math import lcm, prod

import pytest

from ratsum import BudgetExceededError, InvalidInputError, build_lcm_set, density


def brute_min_products(N, k):
    """Exhaustive map L -> (min product, lexicographically smallest witness)."""
    best = {}
    for qs in product(range(1, N + 1), repeat=k):
        key = lcm(*qs)
        cand = (prod(qs), qs)
        if key not in best or cand < best[key]:
            best[key] = cand
    return best


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def test_build_example_n3_k2():
    lam = build_lcm_set(3, 2)
    assert lam.values() == [1, 2, 3, 6]
    by_l = {e.L: e for e in lam}
    assert by_l[6].min_product == 6
    assert by_l[6].witness == (2, 3)


def test_build_example_k1():
    lam = build_lcm_set(5, 1)
    assert lam.values() == [1, 2, 3, 4, 5]
    assert all(e.min_product == e.L and e.witness == (e.L,) for e in lam)


def test_build_example_n4_k2():
    lam = build_lcm_set(4, 2)
    assert lam.values() == [1, 2, 3, 4, 6, 12]
    assert len(lam) == 6
    by_l = {e.L: e for e in lam}
    assert by_l[12].min_product == 12
    assert by_l[12].witness == (3, 4)


def test_density_examples():
    assert density(3, 2) == (4, 4 / 9)
    assert density(1, 1) == (1, 1.0)
    assert density(1, 3) == (1, 1.0)
    assert density(4, 2) == (6, 6 / 16)


def test_entry_invariants():
    for n, k in ((7, 2), (5, 3), (9, 1)):
        lam = build_lcm_set(n, k)
        assert [e.L for e in lam] == sorted(e.L for e in lam)
        for e in lam:
            assert lcm(*e.witness) == e.L
            assert all(1 <= q <= n for q in e.witness)
            assert prod(e.witness) == e.min_product
            assert len(e.witness) == k


def test_divisor_closure_up_to_60():
    for n in range(1, 61):
        values = set(build_lcm_set(n, 2).values())
        for L in values:
            for d in divisors(L):
                assert d in values, f"divisor {d} of {L} missing for N={n}"


def test_monotone_inclusion_in_k():
    for n in range(1, 21):
        v1 = set(build_lcm_set(n, 1).values())
        v2 = set(build_lcm_set(n, 2).values())
        v3 = set(build_lcm_set(n, 3).values())
        assert set(range(1, n + 1)) <= v1 <= v2 <= v3


def test_min_product_matches_exhaustive_enumeration():
    for k in (1, 2, 3):
        for n in range(1, 13):
            lam = build_lcm_set(n, k)
            brute = brute_min_products(n, k)
            assert set(lam.values()) == set(brute)
            for e in lam:
                assert e.min_product == brute[e.L][0]
                assert e.witness == brute[e.L][1]


def test_density_decay_small_grid():
    ratios = [density(n, 2).ratio for n in (16, 64)]
    assert ratios[1] <= ratios[0]


def test_size_lower_bounds():
    # literally true: the census contains at least the k=1 set {1..N}; the
    # divisor-reciprocal comparison |census| >= (sum 1/d(q))^k is an observed
    # ratio >= 1 on this grid, reported rather than claimed in general
    from fractions import Fraction

    from ratsum import divisor_reciprocal_sum

    for n in (16, 64, 256, 1024):
        size = len(build_lcm_set(n, 2))
        assert size >= n
        comparison = Fraction(size) / divisor_reciprocal_sum(n) ** 2
        print(f"N={n}: |census| / (sum 1/d)^2 = {float(comparison):.3f}")
        assert comparison >= 1


def test_budget_and_validation():
    with pytest.raises(InvalidInputError):
        build_lcm_set(0, 2)
    with pytest.raises(InvalidInputError):
        build_lcm_set(3, 0)
    with pytest.raises(BudgetExceededError):
        build_lcm_set(40, 2, max_entries=10)
    with pytest.raises(BudgetExceededError):
        build_lcm_set(10**20, 7)  # N^k past the 128-bit guard
