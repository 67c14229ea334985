"""Periodized triangle kernel and the counting sum built on it.

For a width 0 < delta < 1/2 the spike t(x) = max(1 - |x|/delta, 0) is
periodized to g(x) = sum_n t(x - n).  Because the translates have
disjoint supports, g(x) is just t evaluated at the distance from x to
the nearest integer, and its Fourier coefficients are the squared sinc
values delta * (sin(pi*delta*h) / (pi*delta*h))^2 — nonnegative, which
is what makes g usable as a counting lower bound: whenever a weighted
count of g-values is positive, some sample point lies within delta of
an integer.

All floating point here is double precision with explicitly propagated
truncation majorants; every asserted inequality has slack far above
1e-9, so interval arithmetic would buy nothing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BudgetExceededError, InvalidInputError
from .numtheory import DEFAULT_WORK_BUDGET, coprime_tuples, coprime_weighted_sum

_CHUNK = 1_000_000  # fixed numpy chunk size keeps partial sums deterministic
DEFAULT_TAIL_TERMS = 10**8
DEFAULT_TAIL_TARGET = 1e-12


def _check_delta(delta: float):
    if not (0.0 < delta < 0.5):
        raise InvalidInputError(f"kernel width must satisfy 0 < delta < 1/2, got {delta}")


@dataclass(frozen=True)
class KernelParams:
    """Kernel width delta in (0, 1/2) and Fourier truncation trunc >= 1."""

    delta: float
    trunc: int

    def __post_init__(self):
        _check_delta(self.delta)
        if self.trunc < 1:
            raise InvalidInputError("Fourier truncation must be >= 1")


def kernel_eval(x: float, delta: float, periodized: bool = True) -> float:
    """Evaluate the triangle spike t(x), or its 1-periodization g(x).

    The periodized value is computed in closed form as t(dist(x, Z));
    valid because the supports of the translates are disjoint for
    delta < 1/2.
    """
    _check_delta(delta)
    if periodized:
        x = abs(x - round(x))
    else:
        x = abs(x)
    return 1.0 - x / delta if x < delta else 0.0


def fourier_coeff(h: int, delta: float) -> float:
    """Fourier coefficient of the periodized kernel at frequency h.

    Equals delta at h = 0 (the sinc limit) and
    delta * (sin(pi*delta*h)/(pi*delta*h))^2 otherwise; always in [0, delta].
    """
    _check_delta(delta)
    if h == 0:
        return delta
    u = math.pi * delta * h
    s = math.sin(u) / u
    return delta * s * s


def alias_average(m: int, delta: float) -> float:
    """Pointwise side of the aliasing identity: (1/m) * sum_{j<m} g(j/m).

    Equals the lattice Fourier sum over frequencies divisible by m; used
    as the independent oracle for `tail_sum`.
    """
    if m < 1:
        raise InvalidInputError("need m >= 1")
    _check_delta(delta)
    return math.fsum(kernel_eval(j / m, delta) for j in range(m)) / m


class TailSum(NamedTuple):
    value: float   # upper bracket for sum_{h != 0} |ghat_{m h}|
    bound: float   # 6/m when delta <= 1/m, else 4/m
    radius: float  # bracket width: value - radius <= true sum <= value


def tail_sum(
    m: int,
    delta: float,
    *,
    max_terms: int = DEFAULT_TAIL_TERMS,
    target: float = DEFAULT_TAIL_TARGET,
) -> TailSum:
    """Sum of |ghat_{m h}| over h != 0, with a rigorous truncation bracket.

    The partial sum up to H' is completed by the analytic tail majorant
    2 * sum_{h > H'} 1/(pi^2 delta m^2 h^2) <= 2/(pi^2 delta m^2 H'), so the
    reported value always lies in [true, true + radius].  H' is chosen to
    push the radius below `target`, capped at `max_terms`; past the cap the
    bracket widens instead of failing.  The bound column is the per-case
    tail estimate 6/m (delta <= 1/m) or 4/m (delta > 1/m), and the reported
    value is asserted against it.
    """
    if m < 1:
        raise InvalidInputError("need m >= 1")
    _check_delta(delta)
    if max_terms < 1:
        raise InvalidInputError("need max_terms >= 1")
    c = math.pi * delta * m
    h_analysis = math.ceil(1.0 / (delta * m))
    h_target = math.ceil(2.0 / (math.pi**2 * delta * m * m * target))
    hp = min(max(h_analysis, h_target), max_terms)
    total = 0.0
    h0 = 1
    while h0 <= hp:
        h1 = min(hp, h0 + _CHUNK - 1)
        h = np.arange(h0, h1 + 1, dtype=np.float64)
        u = c * h
        s = np.sin(u) / u
        total += float(np.sum(delta * s * s))
        h0 = h1 + 1
    radius = 2.0 / (math.pi**2 * delta * m * m * hp)
    value = 2.0 * total + radius
    bound = 6.0 / m if delta <= 1.0 / m else 4.0 / m
    assert value <= bound, f"tail estimate violated: {value} > {bound} (m={m}, delta={delta})"
    return TailSum(value=value, bound=bound, radius=radius)


def root_of_unity_sum(h: int, q: int) -> complex:
    """Sum of e(h*a/q) for a = 1..q; equals q when q | h and 0 otherwise.

    The phase is reduced mod q in exact integer arithmetic first, so the
    divisible case returns exactly q+0j.
    """
    if q < 1:
        raise InvalidInputError("need q >= 1")
    return sum(cmath.exp(2j * math.pi * ((h * a) % q) / q) for a in range(1, q + 1))


class CountingSum(NamedTuple):
    direct: float     # pointwise sum of g over all sample points
    main_term: float  # delta * (coprime weighted sum)
    gap_bound: float  # 6 * (number of pairwise-coprime tuples)


def counting_sum(
    theta: float,
    n: int,
    k: int,
    delta: float,
    *,
    budget: int = DEFAULT_WORK_BUDGET,
) -> CountingSum:
    """Kernel-weighted count of the points a_1/q_1 + ... + a_k/q_k near theta.

    direct sums g(sum a_i/q_i - theta) pointwise over all pairwise-coprime
    denominator tuples q_i <= n and all residues 1 <= a_i <= q_i; the
    orthogonality of the Fourier expansion pins it to within 6 per tuple of
    delta times the coprime weighted sum.  g is always evaluated via the
    closed form, never via Fourier truncation, so the gap inequality is a
    genuine two-route check.
    """
    if n < 1 or k < 1:
        raise InvalidInputError("need n >= 1 and k >= 1")
    _check_delta(delta)
    weighted = coprime_weighted_sum(n, k, budget=budget)  # = number of g evaluations
    if weighted > budget:
        raise BudgetExceededError(
            f"counting sum needs {weighted} kernel evaluations, budget is {budget}"
        )
    theta = float(theta)
    tuple_count = 0
    per_tuple: list[float] = []

    def tuple_value(qs: tuple[int, ...]) -> float:
        vals = [0.0]
        for q in qs:
            vals = [v + a / q for v in vals for a in range(1, q + 1)]
        return math.fsum(kernel_eval(v - theta, delta) for v in vals)

    for qs in coprime_tuples(n, k, budget=budget):
        tuple_count += 1
        per_tuple.append(tuple_value(qs))
    direct = math.fsum(per_tuple)
    main = delta * weighted
    gap_bound = 6.0 * tuple_count
    assert abs(direct - main) <= gap_bound, (
        f"counting gap violated: |{direct} - {main}| > {gap_bound}"
    )
    return CountingSum(direct=direct, main_term=main, gap_bound=gap_bound)
