"""Solver tests: exact minima, witness identities, and the k = 1 baseline.

The lcm-scan solver is checked against the direct tuple enumeration on a
grid of rationals (the oracle for the lcm-set reduction), and the
continued-fraction path is cross-checked against the scan.
"""

import random
from fractions import Fraction

import pytest

from ratsum import (
    InvalidInputError,
    ApproxSolution,
    best_approx,
    best_approx_bruteforce,
    build_lcm_set,
    dirichlet_k1,
    nearest_multiple,
    parse_theta,
    reconstruct_tuple,
    solution_to_dict,
)
from ratsum.solver import ThetaValue


def farey(limit):
    """All reduced fractions in [0, 1) with denominator <= limit, sorted."""
    fractions = {Fraction(0)}
    for den in range(1, limit + 1):
        for num in range(1, den):
            fractions.add(Fraction(num, den))
    return sorted(fractions)


# -- theta parsing ------------------------------------------------------------

def test_parse_theta_forms():
    assert parse_theta("1/8").exact == Fraction(1, 8)
    assert parse_theta("0.25").exact == Fraction(1, 4)
    assert parse_theta("2/4").label == "1/2"
    assert parse_theta("0").label == "0/1"
    golden = parse_theta("golden")
    assert not golden.is_exact and golden.label == "golden"


def test_parse_theta_roundtrip():
    for s in ("1/8", "0.25", "golden", "sqrt2m1", "3", "-2/7"):
        tv = parse_theta(s)
        assert parse_theta(tv.label).label == tv.label


def test_parse_theta_rejects_garbage():
    for bad in ("", "abc", "1/0", "1//2", "0x12"):
        with pytest.raises(InvalidInputError):
            parse_theta(bad)


def test_named_constants_satisfy_minimal_polynomials():
    g = parse_theta("golden")
    # (sqrt(5)-1)/2 is a root of x^2 + x - 1
    assert abs(g.approx**2 + g.approx - 1) <= 3 * g.eps
    s = parse_theta("sqrt2m1")
    # sqrt(2)-1 is a root of x^2 + 2x - 1
    assert abs(s.approx**2 + 2 * s.approx - 1) <= 4 * s.eps
    assert 0 < g.eps <= Fraction(1, 2**200)


# -- nearest multiple ---------------------------------------------------------

def test_nearest_multiple_examples():
    assert nearest_multiple(Fraction(1, 3), 2)[:2] == (1, Fraction(1, 6))
    assert nearest_multiple(Fraction(0), 7)[:2] == (0, Fraction(0))
    # exact midpoint resolves toward the smaller multiple
    assert nearest_multiple(Fraction(1, 4), 2)[:2] == (0, Fraction(1, 4))


def test_nearest_multiple_random_minimality():
    rng = random.Random(11)
    for _ in range(500):
        theta = Fraction(rng.randint(-50, 150), rng.randint(1, 60))
        L = rng.randint(1, 40)
        m, err, _ = nearest_multiple(theta, L)
        assert err == abs(Fraction(m, L) - theta)
        assert err <= Fraction(1, 2 * L)
        assert err <= abs(Fraction(m - 1, L) - theta)
        assert err <= abs(Fraction(m + 1, L) - theta)


def test_nearest_multiple_validation():
    with pytest.raises(InvalidInputError):
        nearest_multiple(Fraction(1, 2), 0)


# -- witness reconstruction ---------------------------------------------------

def test_reconstruct_examples():
    assert reconstruct_tuple(6, (2, 3), 1) == (-1, 2)
    assert Fraction(-1, 2) + Fraction(2, 3) == Fraction(1, 6)
    assert reconstruct_tuple(5, (5, 1), 3) == (3, 0)
    assert reconstruct_tuple(12, (3, 4), 1) == (-2, 3)
    assert Fraction(-2, 3) + Fraction(3, 4) == Fraction(1, 12)


def test_reconstruct_random_property():
    from math import lcm

    rng = random.Random(5)
    for _ in range(400):
        k = rng.randint(1, 4)
        qs = tuple(rng.randint(1, 12) for _ in range(k))
        L = lcm(*qs)
        m = rng.randint(-3 * L, 3 * L)
        a = reconstruct_tuple(L, qs, m)
        assert sum(Fraction(ai, qi) for ai, qi in zip(a, qs)) == Fraction(m, L)
        assert all(0 <= ai < qi for ai, qi in zip(a[1:], qs[1:]))


def test_reconstruct_rejects_bad_witness():
    with pytest.raises(InvalidInputError):
        reconstruct_tuple(7, (2, 3), 1)


# -- best approximation -------------------------------------------------------

def test_best_approx_golden_example():
    sol = best_approx(parse_theta("golden"), 2, 2)
    assert sol.L == 2 and sol.certified
    assert float(sol.error) == pytest.approx(0.1180339887, abs=1e-9)
    assert sol.value == Fraction(1, 2)


def test_best_approx_worst_case_example():
    sol = best_approx(Fraction(1, 8), 2, 2)
    assert sol.error == Fraction(1, 8)
    assert sol.m == 0 and sol.L == 1
    assert sol.numerators == (0, 0) and sol.denominators == (1, 1)


def test_best_approx_representable():
    sol = best_approx(Fraction(1, 2), 2, 1)
    assert sol.error == 0 and sol.value == Fraction(1, 2)


def test_best_approx_rejects_mismatched_set():
    lam = build_lcm_set(3, 2)
    with pytest.raises(InvalidInputError):
        best_approx(Fraction(1, 3), 4, 2, lam)


def test_bruteforce_examples():
    sol = best_approx_bruteforce(Fraction(7, 13), 1, 2)
    assert sol.error == abs(Fraction(7, 13) - 1)  # ||theta|| with only L = 1
    sol = best_approx_bruteforce(Fraction(1, 3), 2, 2)
    assert sol.error == Fraction(1, 6) and sol.L == 2
    sol = best_approx_bruteforce(parse_theta("golden"), 5, 1)
    assert sol.denominators == (5,) and sol.numerators == (3,)
    assert float(sol.error) == pytest.approx(0.0180339887, abs=1e-9)


def test_oracle_equivalence_grid():
    thetas = farey(20)[::9]  # ~40 rationals spread over [0, 1)
    for k, n_max in ((1, 8), (2, 6), (3, 4)):
        for n in range(1, n_max + 1):
            lam = build_lcm_set(n, k)
            for theta in thetas:
                fast = best_approx(theta, n, k, lam)
                brute = best_approx_bruteforce(theta, n, k)
                assert fast.error == brute.error
                assert (fast.L, fast.m) == (brute.L, brute.m)


def test_coprime_only_bruteforce_same_minimum():
    for theta in (Fraction(3, 7), Fraction(13, 30), Fraction(1, 97)):
        for n, k in ((5, 2), (4, 3)):
            a = best_approx_bruteforce(theta, n, k)
            b = best_approx_bruteforce(theta, n, k, coprime_only=True)
            assert a.error == b.error


def test_worst_case_sharpness_small():
    for k in (1, 2):
        for n in (2, 5, 9):
            theta = Fraction(1, 2 * n**k)
            assert best_approx(theta, n, k).error == theta


def test_monotonicity_in_n_and_k():
    for theta in (Fraction(13, 37), parse_theta("golden")):
        prev = None
        for n in range(2, 11):
            err = best_approx(theta, n, 2).error
            assert prev is None or err <= prev
            prev = err
        prev = None
        for k in (1, 2, 3):
            err = best_approx(theta, 6, k).error
            assert prev is None or err <= prev
            prev = err


def test_uncertified_argmin_is_reported():
    # a deliberately coarse radius forces overlapping error intervals
    fuzzy = ThetaValue(approx=Fraction(1, 3), eps=Fraction(1, 10), label="fuzzy")
    sol = best_approx(fuzzy, 3, 1)
    assert not sol.certified
    assert sol.alternate is not None
    alt_L, alt_err = sol.alternate
    assert alt_L != sol.L and alt_err >= sol.error


def test_solution_identity_enforced():
    with pytest.raises(InvalidInputError):
        ApproxSolution(numerators=(1, 1), denominators=(2, 3), L=6, m=2,
                       error=Fraction(0))
    with pytest.raises(InvalidInputError):
        ApproxSolution(numerators=(1,), denominators=(4,), L=6, m=1,
                       error=Fraction(0))


def test_solution_to_dict_schema():
    tv = parse_theta("1/8")
    sol = best_approx(tv, 2, 2)
    doc = solution_to_dict(sol, tv, 2, 2)
    assert list(doc) == ["theta", "N", "k", "error_num", "error_den", "m", "L",
                         "a", "q", "certified"]
    assert doc["theta"] == "1/8"
    assert (doc["error_num"], doc["error_den"]) == (1, 8)
    assert doc["certified"] is True


# -- k = 1 continued-fraction baseline ----------------------------------------

def test_dirichlet_examples():
    sol = dirichlet_k1(parse_theta("golden"), 5)
    assert sol.denominators == (5,) and sol.numerators == (3,)
    assert float(sol.error) < 1 / 25

    sol = dirichlet_k1(Fraction(1, 7), 7)
    assert sol.error == 0 and sol.value == Fraction(1, 7)

    # both 0/1 and 1/2 certify; the smaller error wins
    sol = dirichlet_k1(Fraction(1, 3), 2)
    assert sol.value == Fraction(1, 2) and sol.error == Fraction(1, 6)


def test_dirichlet_intermediate_fraction_respects_certificate():
    # 7/8 approximates 9/10 better than 1/1 but violates error*q*N < 1
    sol = dirichlet_k1(Fraction(9, 10), 8)
    assert sol.value == Fraction(1, 1)
    assert sol.error == Fraction(1, 10)
    assert sol.error * sol.L * 8 < 1


def test_dirichlet_certificates_random():
    rng = random.Random(3)
    for n in (10, 1000):
        for _ in range(200):
            den = rng.randint(1, 10**6)
            theta = Fraction(rng.randint(0, den - 1), den)
            sol = dirichlet_k1(theta, n)
            q = sol.denominators[0]
            assert 1 <= q <= n
            assert sol.error * q * n < 1
            assert sol.certified


def test_dirichlet_vs_scan():
    # the scan gives the true minimum; the baseline is never better
    rng = random.Random(9)
    for _ in range(40):
        den = rng.randint(1, 500)
        theta = Fraction(rng.randint(0, den - 1), den)
        for n in (4, 9):
            base = dirichlet_k1(theta, n)
            exact = best_approx(theta, n, 1)
            assert exact.error <= base.error


def test_dirichlet_uncertified_with_coarse_radius():
    fuzzy = ThetaValue(approx=Fraction(1, 2), eps=Fraction(1, 4), label="fuzzy")
    sol = dirichlet_k1(fuzzy, 3)
    assert not sol.certified
