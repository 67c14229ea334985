"""Arithmetic substrate: multiplicative-function sieves and exact summations.

Everything here is exact integer / rational arithmetic.  The summation
routines are verification oracles, written for clarity and guarded by
explicit work budgets rather than optimized; the sieve is the one O(x)
fast path (a single-pass linear sieve producing phi, mu, smallest prime
factor and the divisor count together).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from .errors import BudgetExceededError, InvalidInputError

DEFAULT_SIEVE_CAP = 10**8
DEFAULT_WORK_BUDGET = 10**9


@dataclass(frozen=True)
class SieveTables:
    """Tables of phi(n), mu(n), d(n) and the smallest prime factor for n <= bound.

    Arrays are indexed by n itself; index 0 is an unused sentinel.
    Immutable after construction and safe to share between workers.
    """

    bound: int
    phi: list[int]
    mu: list[int]
    divcount: list[int]
    spf: list[int]

    def __post_init__(self):
        if self.bound < 1:
            raise InvalidInputError("sieve bound must be >= 1")


def build_sieves(x: int, *, max_entries: int = DEFAULT_SIEVE_CAP) -> SieveTables:
    """Linear sieve of phi, mu, smallest-prime-factor and d(n) for 1 <= n <= x.

    Each composite is visited exactly once, through its smallest prime
    factor, so the pass is O(x).  d(n) is maintained via the exponent of
    the smallest prime factor: d(p*n) = d(n)/(e+1)*(e+2) when p | n.
    """
    if x < 1:
        raise InvalidInputError(f"sieve bound must be >= 1, got {x}")
    if x > max_entries:
        raise BudgetExceededError(
            f"sieve bound {x} exceeds the configured cap of {max_entries} entries"
        )
    phi = [0] * (x + 1)
    mu = [0] * (x + 1)
    div = [0] * (x + 1)
    spf = [0] * (x + 1)
    cnt = [0] * (x + 1)  # exponent of spf(n) in n
    phi[1] = mu[1] = div[1] = 1
    spf[1] = 1
    primes: list[int] = []
    for n in range(2, x + 1):
        if spf[n] == 0:
            spf[n] = n
            primes.append(n)
            phi[n] = n - 1
            mu[n] = -1
            div[n] = 2
            cnt[n] = 1
        for p in primes:
            m = p * n
            if m > x:
                break
            spf[m] = p
            if n % p == 0:
                phi[m] = phi[n] * p
                mu[m] = 0
                cnt[m] = cnt[n] + 1
                div[m] = div[n] // (cnt[n] + 1) * (cnt[n] + 2)
                break
            phi[m] = phi[n] * (p - 1)
            mu[m] = -mu[n]
            cnt[m] = 1
            div[m] = div[n] * 2
    return SieveTables(bound=x, phi=phi, mu=mu, divcount=div, spf=spf)


def _tables_for(x: int, tables: SieveTables | None) -> SieveTables:
    if tables is not None and tables.bound >= x:
        return tables
    return build_sieves(x)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


def ext_gcd_chain(values: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Bezout coefficients for a whole sequence, by left-folding two-term Euclid.

    Returns (g, coeffs) with sum(coeffs[i]*values[i]) == g == gcd(values).
    """
    if not values:
        raise InvalidInputError("ext_gcd_chain needs at least one value")
    for v in values:
        if v < 1:
            raise InvalidInputError(f"values must be positive, got {v}")
    g = values[0]
    coeffs = [1]
    for v in values[1:]:
        g2, s, t = ext_gcd(g, v)
        coeffs = [c * s for c in coeffs]
        coeffs.append(t)
        g = g2
    assert sum(c * v for c, v in zip(coeffs, values)) == g
    return g, tuple(coeffs)


def _check_work(x: int, k: int, budget: int):
    # enumeration visits at most sum_{j<=k} x^j tuple prefixes
    work = 0
    t = 1
    for _ in range(k):
        t *= x
        work += t
    if work > budget:
        raise BudgetExceededError(
            f"enumerating {k}-tuples up to {x} needs ~{work} steps, budget is {budget}"
        )


def coprime_tuples(x: int, k: int, *, budget: int = DEFAULT_WORK_BUDGET) -> Iterator[tuple[int, ...]]:
    """Yield all pairwise-coprime k-tuples with entries in [1, x], lexicographically.

    A prefix is abandoned as soon as one gcd check fails, so the walk never
    descends below a non-coprime pair.
    """
    if x < 1 or k < 1:
        raise InvalidInputError("x and k must be >= 1")
    _check_work(x, k, budget)
    prefix: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for q in range(1, x + 1):
            if all(gcd(q, p) == 1 for p in prefix):
                prefix.append(q)
                yield from rec()
                prefix.pop()

    return rec()


def coprime_weighted_sum(x: int, k: int, *, budget: int = DEFAULT_WORK_BUDGET) -> int:
    """Sum of q_1*...*q_k over pairwise-coprime k-tuples with all q_i <= x.

    Direct enumeration with early gcd pruning; this is a verification
    oracle, so clarity wins over speed and the work budget makes large
    requests fail predictably instead of hanging.
    """
    if x < 1 or k < 1:
        raise InvalidInputError("x and k must be >= 1")
    _check_work(x, k, budget)

    def rec(depth: int, prefix: list[int], prod: int) -> int:
        if depth == k:
            return prod
        total = 0
        for q in range(1, x + 1):
            if all(gcd(q, p) == 1 for p in prefix):
                prefix.append(q)
                total += rec(depth + 1, prefix, prod * q)
                prefix.pop()
        return total

    return rec(0, [], 1)


def count_coprime_tuples(x: int, k: int, *, budget: int = DEFAULT_WORK_BUDGET) -> int:
    """Number of pairwise-coprime k-tuples with entries in [1, x]."""
    return sum(1 for _ in coprime_tuples(x, k, budget=budget))


def restricted_power_sum(
    x: int, m: int, alpha: int, tables: SieveTables | None = None
) -> Fraction:
    """Exact value of sum over n <= x, gcd(n, m) = 1 of phi(n)^alpha * n^(1-alpha).

    Integer-valued for alpha <= 1; a general rational otherwise, since the
    n-exponent goes negative (the term is computed as phi(n)^alpha / n^(alpha-1)).
    """
    if x < 1 or m < 1 or alpha < 0:
        raise InvalidInputError("need x >= 1, m >= 1, alpha >= 0")
    t = _tables_for(x, tables)
    total = Fraction(0)
    for n in range(1, x + 1):
        if gcd(n, m) == 1:
            total += Fraction(t.phi[n] ** alpha, n ** (alpha - 1)) if alpha >= 1 \
                else Fraction(n)
    return total


def totient_ratio_sum(
    x: int, m: int, alpha: int, tables: SieveTables | None = None
) -> Fraction:
    """Exact value of sum over n <= x, gcd(n, m) = 1 of (n/phi(n))^alpha."""
    if x < 1 or m < 1 or alpha < 0:
        raise InvalidInputError("need x >= 1, m >= 1, alpha >= 0")
    t = _tables_for(x, tables)
    total = Fraction(0)
    for n in range(1, x + 1):
        if gcd(n, m) == 1:
            total += Fraction(n, t.phi[n]) ** alpha
    return total


def totient_ratio_report(
    x: int, m: int, alpha: int, tables: SieveTables | None = None
) -> tuple[Fraction, float]:
    """Companion report for `totient_ratio_sum`: (sum, sum / (x*phi(m)/m)).

    The ratio is the empirical boundedness statistic; it stays below a small
    alpha-dependent constant on verification grids.
    """
    t = _tables_for(max(x, m), tables)
    s = totient_ratio_sum(x, m, alpha, t)
    return s, float(s / (Fraction(x) * t.phi[m] / m))


def coprime_linear_sum(
    x: int, m: int, tables: SieveTables | None = None
) -> tuple[int, Fraction]:
    """Sum of n <= x coprime to m, together with its main term phi(m)*x^2/(2m).

    The remainder |sum - main_term| is O(x*d(m)); the test suite measures
    the implied constant on a grid instead of assuming one.
    """
    if x < 1 or m < 1:
        raise InvalidInputError("need x >= 1, m >= 1")
    t = _tables_for(max(x, m), tables)
    s = sum(n for n in range(1, x + 1) if gcd(n, m) == 1)
    main = Fraction(t.phi[m] * x * x, 2 * m)
    return s, main


def divisor_reciprocal_sum(n: int, tables: SieveTables | None = None) -> Fraction:
    """Exact sum of 1/d(q) for q <= n."""
    if n < 1:
        raise InvalidInputError("need n >= 1")
    t = _tables_for(n, tables)
    total = Fraction(0)
    for q in range(1, n + 1):
        total += Fraction(1, t.divcount[q])
    return total
