"""Best approximation of a real theta by a_1/q_1 + ... + a_k/q_k with q_i <= N.

The value set of such a sum with fixed denominators is (1/L) * Z for
L = lcm(q_1,...,q_k), so the exact minimum error is
min over L in Lambda_k(N) of dist(theta, (1/L)*Z) = ||L*theta|| / L.
`best_approx` scans the lcm set; `best_approx_bruteforce` enumerates all
denominator tuples directly and is kept as the independent oracle for
that reduction.  For k = 1 a continued-fraction path provides the
classical single-fraction guarantee error < 1/(qN) and is cross-checked
against the scan.

theta enters either exactly (a rational, including decimal strings) or as
a 200-bit fixed-point approximation of a named irrational constant, in
which case every comparison is done on error intervals and the result
says whether the argmin is certified.  Nothing in this module rounds: all
errors are exact fractions of the (possibly approximate) theta.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, isqrt, lcm
from typing import NamedTuple

from .errors import BudgetExceededError, InvalidInputError
from .lcmset import LcmSet, build_lcm_set
from .numtheory import DEFAULT_WORK_BUDGET, ext_gcd_chain

_FIXED_POINT_BITS = 200
_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _fixed_point(value_num_sqrt: int, shift_num: int, shift_den: int) -> Fraction:
    # floor(sqrt(value) * 2^B) / 2^B, then affine-shifted exactly
    b = _FIXED_POINT_BITS
    root = isqrt(value_num_sqrt << (2 * b))
    return (Fraction(root, 1 << b) + shift_num) / shift_den


# name -> (approximation, error radius); radii are safe overestimates
_NAMED_CONSTANTS = {
    "golden": (_fixed_point(5, -1, 2), Fraction(1, 1 << (_FIXED_POINT_BITS + 1))),
    "sqrt2m1": (_fixed_point(2, -1, 1), Fraction(1, 1 << _FIXED_POINT_BITS)),
}


@dataclass(frozen=True)
class ThetaValue:
    """A target number: exact rational, or fixed-point approximation with radius.

    exact is None only for named irrational constants; then approx carries a
    200-bit approximation and eps the certified error radius.  label is the
    canonical input string (format(parse(s)) round-trips).
    """

    approx: Fraction
    eps: Fraction = Fraction(0)
    exact: Fraction | None = None
    label: str = ""

    def __post_init__(self):
        if self.eps < 0:
            raise InvalidInputError("theta error radius must be >= 0")
        if self.exact is not None and self.eps != 0:
            raise InvalidInputError("exact theta must have zero error radius")
        if self.exact is None and self.eps == 0:
            raise InvalidInputError("inexact theta must carry a positive error radius")

    @classmethod
    def from_fraction(cls, fr: Fraction) -> "ThetaValue":
        fr = Fraction(fr)
        return cls(approx=fr, exact=fr, label=f"{fr.numerator}/{fr.denominator}")

    @classmethod
    def named(cls, name: str) -> "ThetaValue":
        approx, eps = _NAMED_CONSTANTS[name]
        return cls(approx=approx, eps=eps, label=name)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


def parse_theta(text: str) -> ThetaValue:
    """Parse a theta argument: "p/q", then decimal string, then named constant.

    First match in that order wins; decimal strings convert exactly.
    """
    s = text.strip()
    if "/" in s:
        try:
            return ThetaValue.from_fraction(Fraction(s))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInputError(f"bad rational theta {text!r}: {e}") from None
    if _DECIMAL_RE.match(s):
        return ThetaValue.from_fraction(Fraction(s))
    if s in _NAMED_CONSTANTS:
        return ThetaValue.named(s)
    raise InvalidInputError(
        f"cannot parse theta {text!r}: expected p/q, a decimal, or one of "
        + ", ".join(sorted(_NAMED_CONSTANTS))
    )


def _as_theta(theta) -> ThetaValue:
    if isinstance(theta, ThetaValue):
        return theta
    if isinstance(theta, (int, Fraction)):
        return ThetaValue.from_fraction(Fraction(theta))
    if isinstance(theta, str):
        return parse_theta(theta)
    raise InvalidInputError(f"unsupported theta type {type(theta).__name__}")


class NearestMultiple(NamedTuple):
    m: int
    err: Fraction     # |m/L - theta| for the working approximation of theta
    radius: Fraction  # 0 when theta is exact


def nearest_multiple(theta, L: int) -> NearestMultiple:
    """Closest multiple m/L to theta; realizes dist(theta, (1/L)*Z) = ||L theta||/L.

    An exact midpoint tie is broken toward the smaller m.
    """
    if L < 1:
        raise InvalidInputError("need L >= 1")
    tv = _as_theta(theta)
    p, r = tv.approx.numerator, tv.approx.denominator
    q0, rem = divmod(p * L, r)
    if 2 * rem <= r:
        m, c = q0, rem
    else:
        m, c = q0 + 1, r - rem
    return NearestMultiple(m=m, err=Fraction(c, r * L), radius=tv.eps)


@dataclass(frozen=True)
class ApproxSolution:
    """A witness sum a_1/q_1 + ... + a_k/q_k = m/L with its exact error.

    The rational identity sum(a_i/q_i) == m/L and lcm(q) == L are checked on
    construction.  For an inexact theta the error is the midpoint of an
    interval of half-width error_radius and `certified` records whether the
    argmin separated from the runner-up at that radius.
    """

    numerators: tuple[int, ...]
    denominators: tuple[int, ...]
    L: int
    m: int
    error: Fraction
    error_radius: Fraction = Fraction(0)
    certified: bool = True
    alternate: tuple[int, Fraction] | None = None  # runner-up (L, error) if uncertified

    def __post_init__(self):
        if len(self.numerators) != len(self.denominators) or not self.denominators:
            raise InvalidInputError("numerators and denominators must pair up")
        if any(q < 1 for q in self.denominators):
            raise InvalidInputError("denominators must be >= 1")
        if lcm(*self.denominators) != self.L:
            raise InvalidInputError(
                f"lcm{self.denominators} != {self.L}: inconsistent witness"
            )
        total = sum(Fraction(a, q) for a, q in zip(self.numerators, self.denominators))
        if total != Fraction(self.m, self.L):
            raise InvalidInputError(
                f"witness identity violated: sum = {total}, expected {self.m}/{self.L}"
            )

    @property
    def value(self) -> Fraction:
        return Fraction(self.m, self.L)

    @property
    def k(self) -> int:
        return len(self.denominators)


def solution_to_dict(sol: ApproxSolution, theta, N: int, k: int) -> dict:
    """JSON-ready view of a solution (schema is part of the CLI contract)."""
    tv = _as_theta(theta)
    return {
        "theta": tv.label,
        "N": N,
        "k": k,
        "error_num": sol.error.numerator,
        "error_den": sol.error.denominator,
        "m": sol.m,
        "L": sol.L,
        "a": list(sol.numerators),
        "q": list(sol.denominators),
        "certified": sol.certified,
    }


def reconstruct_tuple(L: int, witness: tuple[int, ...], m: int) -> tuple[int, ...]:
    """Numerators a_i with sum a_i/q_i = m/L for a witness with lcm(witness) = L.

    Solvable because gcd_i(L/q_i) = 1: every prime power of L is attained by
    some q_i.  Normalized so a_i in [0, q_i) for i >= 2, with a_1 absorbing
    the integer part.
    """
    if L < 1 or not witness:
        raise InvalidInputError("need L >= 1 and a nonempty witness")
    if lcm(*witness) != L:
        raise InvalidInputError(f"lcm{tuple(witness)} != {L}: invalid witness")
    cof = [L // q for q in witness]
    g, coeffs = ext_gcd_chain(cof)
    assert g == 1
    a = [m * c for c in coeffs]
    shift = 0
    for i in range(1, len(a)):
        t, a[i] = divmod(a[i], witness[i])
        shift += t
    a[0] += shift * witness[0]
    return tuple(a)


class _Best(NamedTuple):
    c: int  # error numerator over r * L
    L: int
    m: int
    witness: tuple[int, ...]


def _scan(p: int, r: int, entries) -> tuple[_Best, _Best | None]:
    """Scan lcm entries for min ||L p/r|| / L; returns best and the best
    runner-up holding a different rational value (for certification)."""
    best: _Best | None = None
    second: _Best | None = None
    for e in entries:
        L = e.L
        q0, rem = divmod(p * L, r)
        if 2 * rem <= r:
            m, c = q0, rem
        else:
            m, c = q0 + 1, r - rem
        if best is None:
            best = _Best(c, L, m, e.witness)
            continue
        if m * best.L == best.m * L:
            continue  # same rational value in lower terms; keep the smaller L
        if c * best.L < best.c * L:
            second = best
            best = _Best(c, L, m, e.witness)
        elif second is None or c * second.L < second.c * L:
            second = _Best(c, L, m, e.witness)
    assert best is not None
    return best, second


def best_approx(theta, N: int, k: int, lcmset: LcmSet | None = None) -> ApproxSolution:
    """Exact best k-term approximation by scanning the reachable lcm set.

    Ties are broken toward smaller L, then smaller m (the scan runs in
    increasing L and only strict improvements replace the incumbent).  With
    an inexact theta the argmin is certified only when the best and
    runner-up error intervals separate; an uncertified result is returned
    with certified=False and the runner-up attached.
    """
    if N < 1 or k < 1:
        raise InvalidInputError("need N >= 1 and k >= 1")
    tv = _as_theta(theta)
    if lcmset is None:
        lcmset = build_lcm_set(N, k)
    elif lcmset.N != N or lcmset.k != k:
        raise InvalidInputError(
            f"lcm set was built for (N={lcmset.N}, k={lcmset.k}), not (N={N}, k={k})"
        )
    p, r = tv.approx.numerator, tv.approx.denominator
    best, second = _scan(p, r, lcmset.entries)
    err = Fraction(best.c, r * best.L)
    certified = True
    alternate = None
    if not tv.is_exact and second is not None:
        err2 = Fraction(second.c, r * second.L)
        if err2 - err <= 2 * tv.eps:
            certified = False
            alternate = (second.L, err2)
    a = reconstruct_tuple(best.L, best.witness, best.m)
    return ApproxSolution(
        numerators=a,
        denominators=best.witness,
        L=best.L,
        m=best.m,
        error=err,
        error_radius=tv.eps,
        certified=certified,
        alternate=alternate,
    )


def best_approx_bruteforce(
    theta,
    N: int,
    k: int,
    *,
    coprime_only: bool = False,
    budget: int = DEFAULT_WORK_BUDGET,
) -> ApproxSolution:
    """Independent oracle: enumerate every denominator tuple in [1, N]^k.

    Tie-broken like `best_approx` (smaller error, then L, then m, then
    lexicographically smallest tuple).  coprime_only restricts the
    enumeration to pairwise-coprime tuples; the minimum is unchanged,
    because dividing shared primes out of a witness preserves its lcm
    and never raises a denominator.
    """
    if N < 1 or k < 1:
        raise InvalidInputError("need N >= 1 and k >= 1")
    if N**k > budget:
        raise BudgetExceededError(f"{N}^{k} tuples exceed the budget of {budget}")
    tv = _as_theta(theta)
    p, r = tv.approx.numerator, tv.approx.denominator
    best = None  # (c, L, m, qs) compared by error first, exactly
    for qs in product(range(1, N + 1), repeat=k):
        if coprime_only and any(
            gcd(qs[i], qs[j]) != 1 for i in range(k) for j in range(i + 1, k)
        ):
            continue
        L = lcm(*qs)
        q0, rem = divmod(p * L, r)
        if 2 * rem <= r:
            m, c = q0, rem
        else:
            m, c = q0 + 1, r - rem
        if best is None:
            best = (c, L, m, qs)
            continue
        cmp = c * best[1] - best[0] * L
        if cmp < 0 or (cmp == 0 and (L, m, qs) < best[1:]):
            best = (c, L, m, qs)
    assert best is not None
    c, L, m, qs = best
    a = reconstruct_tuple(L, qs, m)
    return ApproxSolution(
        numerators=a,
        denominators=qs,
        L=L,
        m=m,
        error=Fraction(c, r * L),
        error_radius=tv.eps,
    )


def _convergents(p: int, r: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents of p/r as (h, k) pairs, virtual 1/0 first."""
    out = [(1, 0)]
    prev2, prev1 = (0, 1), (1, 0)
    a, b = p, r
    while b:
        q, rem = divmod(a, b)
        a, b = b, rem
        cur = (q * prev1[0] + prev2[0], q * prev1[1] + prev2[1])
        out.append(cur)
        prev2, prev1 = prev1, cur
    return out


def dirichlet_k1(theta, N: int) -> ApproxSolution:
    """Single-fraction approximation certifying the error < 1/(qN) guarantee.

    Takes the continued-fraction convergent with the largest denominator
    q <= N, refined by the deepest intermediate fraction that still fits;
    among the candidates that certify the inequality, the smaller error
    wins.  The final convergent below N always certifies, so the result
    set is never empty for exact theta.
    """
    if N < 1:
        raise InvalidInputError("need N >= 1")
    tv = _as_theta(theta)
    p, r = tv.approx.numerator, tv.approx.denominator
    convs = _convergents(p, r)
    # convs[0] is the virtual 1/0; convs[1] always has denominator 1 <= N
    i = 1
    while i + 1 < len(convs) and convs[i + 1][1] <= N:
        i += 1
    hp, kp = convs[i - 1]
    h, kq = convs[i]
    candidates = [(h, kq)]
    if i + 1 < len(convs):  # theta not yet hit exactly: try an intermediate fraction
        t = (N - kp) // kq
        if t >= 1:
            candidates.append((hp + t * h, kp + t * kq))
    scored = []
    for hh, qq in candidates:
        err = abs(Fraction(hh, qq) - tv.approx)
        certified = (err + tv.eps) * qq * N < 1
        scored.append((err, qq, hh, certified))
    satisfying = [s for s in scored if s[3]]
    assert satisfying or not tv.is_exact  # the final convergent always certifies
    if satisfying:
        err, qq, hh, _ = min(satisfying)
        certified = True
    else:
        # only possible when the theta radius is too coarse; report it
        err, qq, hh, certified = min(scored)
    return ApproxSolution(
        numerators=(hh,),
        denominators=(qq,),
        L=qq,
        m=hh,
        error=err,
        error_radius=tv.eps,
        certified=certified,
    )
