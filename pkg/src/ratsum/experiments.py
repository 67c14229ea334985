"""Reproducible sweeps: scaling of the best k-term error, the coprime-sum
ratio, the covering refutation over the lcm census, and the exponent fit
for the product-weighted error.

Determinism contract: a fixed (config, seed) reproduces identical output
bytes, and the thread count never changes results.  Theta samples are
drawn up front, in order, from a single Mersenne Twister stream
(CPython's random.Random seeded with the 64-bit seed: for each sample,
den = randint(1, den_bound) then num = randint(0, den - 1)).  Worker
processes only ever evaluate pure per-cell functions, and the ordered
reduction is a plain map.
"""

from __future__ import annotations

import functools
import json
import math
import multiprocessing
import platform
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import __version__
from .errors import BudgetExceededError, InvalidInputError
from .kernel import alias_average, counting_sum, tail_sum
from .lcmset import DEFAULT_MAX_ENTRIES, LcmSet, build_lcm_set
from .numtheory import (
    DEFAULT_WORK_BUDGET,
    build_sieves,
    coprime_weighted_sum,
    divisor_reciprocal_sum,
)
from .solver import ThetaValue, best_approx, parse_theta

SAMPLERS = ("uniform-rational", "named-constants", "fixed-list")
DEFAULT_DEN_BOUND = 10**6
KERNEL_DELTA_GRID = (0.01, 0.05, 0.1, 0.3, 0.45)


@dataclass(frozen=True)
class SweepConfig:
    """Grid, sampling and execution parameters for a sweep."""

    k: int
    n_grid: tuple[int, ...]
    sampler: str = "uniform-rational"
    samples: int = 50
    seed: int = 0
    threads: int = 1
    den_bound: int = DEFAULT_DEN_BOUND
    theta_list: tuple[str, ...] = ()
    worst_case_row: bool = True
    budget: int = DEFAULT_MAX_ENTRIES  # lcm-census entry cap per grid point

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInputError("need k >= 1")
        if not self.n_grid or any(n < 1 for n in self.n_grid):
            raise InvalidInputError("N grid must be nonempty positive integers")
        if list(self.n_grid) != sorted(set(self.n_grid)):
            raise InvalidInputError("N grid must be strictly increasing")
        if self.sampler not in SAMPLERS:
            raise InvalidInputError(f"unknown sampler {self.sampler!r}; pick from {SAMPLERS}")
        if self.sampler == "uniform-rational" and self.samples < 1:
            raise InvalidInputError("uniform-rational sampling needs samples >= 1")
        if self.threads < 1:
            raise InvalidInputError("need threads >= 1")


def sample_thetas(config: SweepConfig) -> list[ThetaValue]:
    """Materialize the ordered theta list for a config (N-independent part)."""
    if config.sampler == "uniform-rational":
        rng = random.Random(config.seed)
        out = []
        for _ in range(config.samples):
            den = rng.randint(1, config.den_bound)
            num = rng.randint(0, den - 1)
            out.append(ThetaValue.from_fraction(Fraction(num, den)))
        return out
    if config.sampler == "named-constants":
        return [ThetaValue.named("golden"), ThetaValue.named("sqrt2m1")]
    return [parse_theta(s) for s in config.theta_list]


@dataclass(frozen=True)
class SweepRecord:
    n: int
    k: int
    theta_id: str
    error_str: str        # exact "p/q" when theta is exact, "" otherwise
    error_float: float
    scaled_error: float   # error * N^k
    product_scaled: float  # error * (q_1*...*q_k) * N^k
    lcm: int
    witness_product: int
    certified: bool


@dataclass(frozen=True)
class SweepSummary:
    n: int
    max_scaled_error: float
    mean_scaled_error: float


@dataclass(frozen=True)
class SweepResult:
    records: tuple[SweepRecord, ...]
    summaries: tuple[SweepSummary, ...]
    truncated_at: int | None = None  # first grid N the budget refused, if any


def _sweep_cell(tv: ThetaValue, n: int, k: int, lam: LcmSet) -> SweepRecord:
    sol = best_approx(tv, n, k, lam)
    nk = n**k
    prod = math.prod(sol.denominators)
    return SweepRecord(
        n=n,
        k=k,
        theta_id=tv.label,
        error_str=f"{sol.error.numerator}/{sol.error.denominator}" if tv.is_exact else "",
        error_float=float(sol.error),
        scaled_error=float(sol.error * nk),
        product_scaled=float(sol.error * prod * nk),
        lcm=sol.L,
        witness_product=prod,
        certified=sol.certified,
    )


def _run_cells(fn, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with multiprocessing.Pool(threads) as pool:
        return pool.map(fn, items)


def scaling_sweep(config: SweepConfig) -> SweepResult:
    """Best k-term error across the N grid for the sampled thetas.

    Each N additionally gets an injected worst-case row theta = 1/(2 N^k)
    (id "worst") unless worst_case_row is off; that row's scaled error is
    exactly 1/2 by construction, which pins the sweep's scale.

    A budget refusal partway through the grid truncates the sweep: the
    completed rows are returned with truncated_at set to the refused N
    (the CSV gets an explicit truncation marker row).
    """
    thetas = sample_thetas(config)
    records: list[SweepRecord] = []
    summaries: list[SweepSummary] = []
    truncated_at = None
    for n in config.n_grid:
        try:
            lam = build_lcm_set(n, config.k, max_entries=config.budget)
        except BudgetExceededError:
            truncated_at = n
            break
        cells = list(thetas)
        if config.worst_case_row:
            worst = ThetaValue.from_fraction(Fraction(1, 2 * n**config.k))
            worst = ThetaValue(approx=worst.approx, exact=worst.exact, label="worst")
            cells.insert(0, worst)
        fn = functools.partial(_sweep_cell, n=n, k=config.k, lam=lam)
        rows = _run_cells(fn, cells, config.threads)
        records.extend(rows)
        scaled = [r.scaled_error for r in rows]
        summaries.append(
            SweepSummary(
                n=n,
                max_scaled_error=max(scaled),
                mean_scaled_error=math.fsum(scaled) / len(scaled),
            )
        )
    return SweepResult(
        records=tuple(records),
        summaries=tuple(summaries),
        truncated_at=truncated_at,
    )


def product_error_statistic(tv: ThetaValue, lam: LcmSet) -> Fraction:
    """min over L in the census of ||L theta||/L * min_product(L), exactly.

    The error of a best sum with denominators q_1..q_k depends on the tuple
    only through L, so minimizing error * (q_1*...*q_k) splits into the
    per-L minimum product times the per-L error: two independent minima.
    """
    p, r = tv.approx.numerator, tv.approx.denominator
    best_num = best_den = None
    for e in lam.entries:
        rem = (p * e.L) % r
        c = min(rem, r - rem)
        num, den = c * e.min_product, e.L
        if best_num is None or num * best_den < best_num * den:
            best_num, best_den = num, den
    return Fraction(best_num, r * best_den)


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of log(max product-scaled error) on log(log(3N))."""

    exponent: float
    intercept: float
    residuals: tuple[float, ...]
    grid: tuple[int, ...]
    maxima: tuple[float, ...]


def _fit_cell(tv: ThetaValue, lam: LcmSet) -> Fraction:
    return product_error_statistic(tv, lam)


def exponent_fit(config: SweepConfig) -> FitResult:
    """Fit the exponent c in max_theta error*(q_1..q_k)*N^k ~ (log 3N)^c.

    Natural logs throughout (a base change only shifts the intercept).  A
    finite sample bounds the worst case from below, so the fitted exponent
    is an estimate, not a verdict; residuals are always reported.
    """
    if len(config.n_grid) < 2:
        raise InvalidInputError("degenerate fit: need at least two grid points")
    thetas = sample_thetas(config)
    maxima: list[float] = []
    for n in config.n_grid:
        lam = build_lcm_set(n, config.k)
        cells = list(thetas)
        if config.worst_case_row:
            cells.insert(0, ThetaValue.from_fraction(Fraction(1, 2 * n**config.k)))
        if not cells:
            raise InvalidInputError("no thetas to sweep: empty list and no worst-case row")
        stats = _run_cells(functools.partial(_fit_cell, lam=lam), cells, config.threads)
        y = max(stats) * n**config.k
        if y == 0:
            raise InvalidInputError(
                f"degenerate fit: zero maximum at N={n} (every theta hit exactly)"
            )
        maxima.append(float(y))
    # closed-form least squares via fsum: byte-reproducible across platforms,
    # which LAPACK-backed fits are not
    xs = [math.log(math.log(3 * n)) for n in config.n_grid]
    ys = [math.log(y) for y in maxima]
    n_pts = len(xs)
    sx, sy = math.fsum(xs), math.fsum(ys)
    sxx = math.fsum(x * x for x in xs)
    sxy = math.fsum(x * y for x, y in zip(xs, ys))
    denom = n_pts * sxx - sx * sx
    if denom == 0:
        raise InvalidInputError("degenerate fit: regressor values coincide")
    slope = (n_pts * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n_pts
    residuals = tuple(y - (slope * x + intercept) for x, y in zip(xs, ys))
    return FitResult(
        exponent=slope,
        intercept=intercept,
        residuals=residuals,
        grid=tuple(config.n_grid),
        maxima=tuple(maxima),
    )


@dataclass(frozen=True)
class RefuteRow:
    n: int
    k: int
    size: int
    measure: Fraction    # 4*C*|Lambda_k(N)| / N^k
    refuted: bool        # measure < 1 witnesses that no constant C works at this N
    recip_d_pow: float   # (sum_{q<=N} 1/d(q))^k, the census lower bound
    recip_d_scaled: float  # recip_d_pow * (log 3N)^k / N^k


def refute_strong_bound(C, k: int, n_grid: Sequence[int]) -> list[RefuteRow]:
    """Covering measure 4*C*|Lambda_k(N)|/N^k across the grid.

    If every theta admitted an error <= C/((q_1..q_k) N^k) approximation,
    intervals of total length at most this measure would cover [0,1]; a
    value below 1 refutes that for the given C and N.  Only endpoint
    monotonicity is asserted here (density decay does the rest).  Each row
    also carries the census lower bound (sum 1/d(q))^k and its comparison
    against N^k / (log 3N)^k.
    """
    C = Fraction(C)
    if C <= 0:
        raise InvalidInputError("need C > 0")
    if not n_grid:
        raise InvalidInputError("need a nonempty N grid")
    tables = build_sieves(max(n_grid))
    rows = []
    for n in n_grid:
        size = len(build_lcm_set(n, k))
        measure = Fraction(4 * C.numerator * size, C.denominator * n**k)
        drs_pow = float(divisor_reciprocal_sum(n, tables) ** k)
        rows.append(
            RefuteRow(
                n=n,
                k=k,
                size=size,
                measure=measure,
                refuted=measure < 1,
                recip_d_pow=drs_pow,
                recip_d_scaled=drs_pow * math.log(3 * n) ** k / n**k,
            )
        )
    assert rows[-1].measure <= rows[0].measure, (
        "covering measure increased across the grid endpoints"
    )
    return rows


def coprime_ratio_sweep(
    x_grid: Sequence[int], k: int, *, budget: int = DEFAULT_WORK_BUDGET
) -> list[tuple[int, int, int, float]]:
    """Rows (x, k, sum, sum/x^(2k)) for the pairwise-coprime weighted sum."""
    if not x_grid:
        raise InvalidInputError("need a nonempty x grid")
    rows = []
    for x in x_grid:
        s = coprime_weighted_sum(x, k, budget=budget)
        rows.append((x, k, s, s / x ** (2 * k)))
    return rows


def kernel_check_table(
    m_max: int = 50,
    deltas: Sequence[float] = KERNEL_DELTA_GRID,
    *,
    max_terms: int = 10**6,
) -> list[dict]:
    """Aliasing and tail-bound verification rows for m <= m_max on a delta grid.

    The lattice Fourier sum (frequency multiples of m) is bracketed by the
    truncated tail sum, and compared against its pointwise alias average
    (1/m) * sum_j g(j/m); agreement within the bracket radius plus float
    noise verifies the identity at that precision.
    """
    rows = []
    for delta in deltas:
        for m in range(1, m_max + 1):
            ts = tail_sum(m, delta, max_terms=max_terms)
            lattice = delta + ts.value
            alias = alias_average(m, delta)
            gap = abs(lattice - alias)
            rows.append(
                {
                    "m": m,
                    "delta": delta,
                    "alias_avg": alias,
                    "lattice_value": lattice,
                    "lattice_radius": ts.radius,
                    "alias_gap": gap,
                    "alias_ok": gap <= ts.radius + 1e-9,
                    "tail_value": ts.value,
                    "tail_radius": ts.radius,
                    "tail_bound": ts.bound,
                    "tail_ok": ts.value <= ts.bound,
                }
            )
    return rows


def counting_gap_table(
    theta: float,
    n: int,
    k: int,
    deltas: Sequence[float],
    *,
    budget: int = DEFAULT_WORK_BUDGET,
) -> list[dict]:
    """Direct-vs-main-term gap rows for the kernel counting sum."""
    rows = []
    for delta in deltas:
        cs = counting_sum(theta, n, k, delta, budget=budget)
        gap = abs(cs.direct - cs.main_term)
        rows.append(
            {
                "theta": theta,
                "n": n,
                "k": k,
                "delta": delta,
                "direct": cs.direct,
                "main_term": cs.main_term,
                "gap": gap,
                "gap_bound": cs.gap_bound,
                "ok": gap <= cs.gap_bound,
            }
        )
    return rows


# ---------------------------------------------------------------------------
# serialization helpers (shared by the CLI and the golden-file tests)

def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    """RFC-4180 CSV (CRLF line ends), all cells rendered deterministically."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\r\n".join(lines) + "\r\n"


def format_jsonl(objs: Sequence[dict]) -> str:
    return "".join(json.dumps(o, separators=(",", ":")) + "\n" for o in objs)


def sweep_csv(result: SweepResult) -> str:
    header = [
        "N", "k", "theta", "error", "error_float", "scaled_error",
        "product_scaled", "L", "witness_product", "certified",
    ]
    rows: list[list] = []
    for r in result.records:
        rows.append([
            r.n, r.k, r.theta_id, r.error_str, r.error_float, r.scaled_error,
            r.product_scaled, r.lcm, r.witness_product, r.certified,
        ])
    for s in result.summaries:
        rows.append([s.n, "", "max", "", "", s.max_scaled_error, "", "", "", ""])
        rows.append([s.n, "", "mean", "", "", s.mean_scaled_error, "", "", "", ""])
    if result.truncated_at is not None:
        rows.append([result.truncated_at, "", "truncated", "", "", "", "", "", "", ""])
    return format_csv(header, rows)


def fit_csv(fit: FitResult) -> str:
    header = ["N", "max_product_scaled", "log_log_3n", "fitted", "residual",
              "exponent", "intercept"]
    rows = []
    for n, y, res in zip(fit.grid, fit.maxima, fit.residuals):
        x = math.log(math.log(3 * n))
        rows.append([n, y, x, fit.exponent * x + fit.intercept, res,
                     fit.exponent, fit.intercept])
    return format_csv(header, rows)


def refute_csv(rows: Sequence[RefuteRow]) -> str:
    header = ["N", "k", "size", "measure", "measure_float", "refuted",
              "recip_d_pow", "recip_d_scaled"]
    return format_csv(
        header,
        [[r.n, r.k, r.size, r.measure, float(r.measure), r.refuted,
          r.recip_d_pow, r.recip_d_scaled] for r in rows],
    )


def metadata(command: str, config: dict) -> str:
    """Deterministic sidecar describing a run; threads are execution-only and
    deliberately excluded so outputs stay byte-identical across thread counts."""
    cfg = {k: v for k, v in config.items() if k != "threads"}
    doc = {
        "command": command,
        "config": cfg,
        "prng": "python-random-mt19937",
        "package": "ratsum",
        "version": __version__,
        "python": platform.python_version(),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
