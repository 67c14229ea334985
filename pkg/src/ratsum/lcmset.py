"""The set of least common denominators reachable by k-term rational sums.

For fixed denominators q_1..q_k <= N the values of a_1/q_1 + ... + a_k/q_k
form exactly (1/L) * Z with L = lcm(q_1,...,q_k): every numerator is an
integer combination of the L/q_i, whose gcd is 1.  Best-approximation
therefore only depends on the set Lambda_k(N) of reachable lcms, which
this module constructs by k-1 relaxation passes of
lcm(q_1,...,q_k) = lcm(lcm(q_1,...,q_{k-1}), q_k), carrying for each L a
minimum-product witness tuple (ties broken lexicographically, so output
is deterministic).

The set is divisor-closed (drop prime powers from a witness component),
and every member has a pairwise-coprime witness of the same minimal
product: assign each prime of L to one component that attains its full
exponent and divide it out of the others, which never raises any q_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterator, NamedTuple

from .errors import BudgetExceededError, InvalidInputError

DEFAULT_MAX_ENTRIES = 10**7
_WIDE_INT_LIMIT = 1 << 128  # parity with fixed-width builds; keeps N^k printable


class LcmEntry(NamedTuple):
    L: int
    witness: tuple[int, ...]
    min_product: int


@dataclass(frozen=True)
class LcmSet:
    """Sorted census of reachable lcms for k denominators bounded by N."""

    N: int
    k: int
    entries: tuple[LcmEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[LcmEntry]:
        return iter(self.entries)

    def values(self) -> list[int]:
        return [e.L for e in self.entries]


def build_lcm_set(N: int, k: int, *, max_entries: int = DEFAULT_MAX_ENTRIES) -> LcmSet:
    """Construct Lambda_k(N) with a minimum-product witness per entry.

    Iterative closure: start from the k=1 set {q : q <= N}, then relax all
    candidates lcm(L', q) keeping the smallest product per reachable L.
    The per-step map has at most |Lambda_{k-1}| * N candidates.
    """
    if N < 1 or k < 1:
        raise InvalidInputError("need N >= 1 and k >= 1")
    if N**k >= _WIDE_INT_LIMIT:
        raise BudgetExceededError(f"N^k = {N}^{k} exceeds the 128-bit entry limit")
    if N > max_entries:
        raise BudgetExceededError(
            f"lcm set for N={N} starts with {N} entries, budget is {max_entries}"
        )
    # L -> (min_product, witness); the tuple order makes min() break product
    # ties by lexicographically smallest witness.
    cur: dict[int, tuple[int, tuple[int, ...]]] = {
        q: (q, (q,)) for q in range(1, N + 1)
    }
    for _ in range(k - 1):
        nxt: dict[int, tuple[int, tuple[int, ...]]] = {}
        for lp, (prod, wit) in cur.items():
            if len(nxt) > max_entries:  # refuse mid-pass; overshoot is at most N
                raise BudgetExceededError(
                    f"lcm set for N={N}, k={k} exceeds {max_entries} entries "
                    f"(partial census size {len(nxt)})"
                )
            for q in range(1, N + 1):
                cand = (prod * q, wit + (q,))
                key = lcm(lp, q)
                old = nxt.get(key)
                if old is None or cand < old:
                    nxt[key] = cand
        if len(nxt) > max_entries:
            raise BudgetExceededError(
                f"lcm set for N={N}, k={k} exceeds {max_entries} entries "
                f"(partial census size {len(nxt)})"
            )
        cur = nxt
    entries = tuple(
        LcmEntry(L=key, witness=val[1], min_product=val[0])
        for key, val in sorted(cur.items())
    )
    return LcmSet(N=N, k=k, entries=entries)


class Density(NamedTuple):
    size: int
    ratio: float


def density(N: int, k: int, *, max_entries: int = DEFAULT_MAX_ENTRIES) -> Density:
    """Census size |Lambda_k(N)| and its density |Lambda_k(N)| / N^k."""
    s = len(build_lcm_set(N, k, max_entries=max_entries))
    return Density(size=s, ratio=s / N**k)
