"""Sweep determinism, summary invariants, and the report tables."""

from fractions import Fraction

import pytest

import ratsum.experiments as xp
from ratsum import InvalidInputError, build_lcm_set
from ratsum.solver import ThetaValue, parse_theta


def test_sampler_sequence_is_pinned():
    # documented stream: random.Random(seed); den = randint(1, den_bound),
    # num = randint(0, den - 1).  These three values are frozen for seed 42.
    cfg = xp.SweepConfig(k=2, n_grid=(8,), samples=3, seed=42)
    labels = [tv.label for tv in xp.sample_thetas(cfg)]
    assert labels == ["5559/31928", "517/558", "128393/288390"]


def test_sampler_kinds():
    named = xp.SweepConfig(k=1, n_grid=(4,), sampler="named-constants")
    assert [t.label for t in xp.sample_thetas(named)] == ["golden", "sqrt2m1"]
    fixed = xp.SweepConfig(k=1, n_grid=(4,), sampler="fixed-list",
                           theta_list=("1/3", "0.5"))
    assert [t.exact for t in xp.sample_thetas(fixed)] == [Fraction(1, 3), Fraction(1, 2)]


def test_config_validation():
    with pytest.raises(InvalidInputError):
        xp.SweepConfig(k=0, n_grid=(4,))
    with pytest.raises(InvalidInputError):
        xp.SweepConfig(k=1, n_grid=())
    with pytest.raises(InvalidInputError):
        xp.SweepConfig(k=1, n_grid=(8, 4))
    with pytest.raises(InvalidInputError):
        xp.SweepConfig(k=1, n_grid=(4,), sampler="bogus")
    with pytest.raises(InvalidInputError):
        xp.SweepConfig(k=1, n_grid=(4,), samples=0)


def test_worst_case_row_is_exact():
    cfg = xp.SweepConfig(k=2, n_grid=(4, 8, 16), samples=2, seed=1)
    res = xp.scaling_sweep(cfg)
    worst = [r for r in res.records if r.theta_id == "worst"]
    assert len(worst) == 3
    for r in worst:
        assert r.error_str == f"1/{2 * r.n ** 2}"
        assert r.scaled_error == 0.5
        assert r.product_scaled == 0.5
        assert r.lcm == 1 and r.witness_product == 1


def test_sweep_deterministic_and_thread_invariant():
    cfg1 = xp.SweepConfig(k=2, n_grid=(6, 9), samples=6, seed=37, threads=1)
    cfg2 = xp.SweepConfig(k=2, n_grid=(6, 9), samples=6, seed=37, threads=2)
    a = xp.sweep_csv(xp.scaling_sweep(cfg1))
    b = xp.sweep_csv(xp.scaling_sweep(cfg1))
    c = xp.sweep_csv(xp.scaling_sweep(cfg2))
    assert a == b == c
    assert a.startswith("N,k,theta,error,error_float,scaled_error,")
    assert "\r\n" in a


def test_sweep_truncates_on_budget_with_marker():
    cfg = xp.SweepConfig(k=2, n_grid=(4, 64), samples=2, seed=1, budget=100)
    res = xp.scaling_sweep(cfg)
    assert res.truncated_at == 64
    assert [s.n for s in res.summaries] == [4]  # partial rows survive
    assert ",truncated," in xp.sweep_csv(res)


def test_scaled_error_bounded_k1_grid():
    # max error * N stays modest for k = 1 on the default-style random sample
    cfg = xp.SweepConfig(k=1, n_grid=(8, 16, 32, 64, 128), samples=50, seed=14)
    res = xp.scaling_sweep(cfg)
    assert all(s.max_scaled_error <= 10 for s in res.summaries)


def test_sweep_summary_rows():
    cfg = xp.SweepConfig(k=1, n_grid=(5,), samples=3, seed=2)
    res = xp.scaling_sweep(cfg)
    scaled = [r.scaled_error for r in res.records]
    s = res.summaries[0]
    assert s.max_scaled_error == max(scaled)
    assert s.mean_scaled_error == pytest.approx(sum(scaled) / len(scaled))


def test_product_error_statistic_reduction():
    # statistic must equal brute min over tuples of error * product
    from itertools import product as iproduct
    from math import lcm, prod

    theta = Fraction(13, 57)
    n, k = 5, 2
    lam = build_lcm_set(n, k)
    stat = xp.product_error_statistic(ThetaValue.from_fraction(theta), lam)
    brute = None
    for qs in iproduct(range(1, n + 1), repeat=k):
        L = lcm(*qs)
        rem = (theta.numerator * L) % theta.denominator
        c = min(rem, theta.denominator - rem)
        val = Fraction(c, theta.denominator * L) * prod(qs)
        brute = val if brute is None else min(brute, val)
    assert stat == brute


def test_exponent_fit_flat_for_worst_case_only():
    cfg = xp.SweepConfig(k=2, n_grid=(8, 16, 32), sampler="fixed-list")
    fit = xp.exponent_fit(cfg)
    assert fit.maxima == (0.5, 0.5, 0.5)
    assert abs(fit.exponent) < 1e-12
    assert max(abs(r) for r in fit.residuals) < 1e-12


def test_exponent_fit_degenerate_cases():
    with pytest.raises(InvalidInputError):
        xp.exponent_fit(xp.SweepConfig(k=2, n_grid=(8,), samples=1, seed=1))
    # every theta representable and no worst-case row: zero maxima
    cfg = xp.SweepConfig(k=1, n_grid=(4, 8), sampler="fixed-list",
                         theta_list=("1/2",), worst_case_row=False)
    with pytest.raises(InvalidInputError):
        xp.exponent_fit(cfg)


def test_exponent_fit_reports_residuals():
    cfg = xp.SweepConfig(k=2, n_grid=(8, 16, 32), samples=5, seed=42)
    fit = xp.exponent_fit(cfg)
    assert len(fit.residuals) == len(fit.grid) == len(fit.maxima) == 3
    assert all(y > 0 for y in fit.maxima)


def test_refute_examples():
    rows = xp.refute_strong_bound(1, 2, (3,))
    assert rows[0].measure == Fraction(16, 9) and not rows[0].refuted
    rows = xp.refute_strong_bound(1, 1, (4,))
    assert rows[0].measure == 4  # |Lambda_1(N)| = N exactly: never refutes
    rows = xp.refute_strong_bound(1, 2, (4,))
    assert rows[0].measure == Fraction(3, 2)
    # census lower bound column: (sum 1/d(q))^k and its (log 3N)^k/N^k scaling
    assert rows[0].recip_d_pow == pytest.approx(float(Fraction(7, 3) ** 2), abs=1e-12)
    assert rows[0].recip_d_scaled == pytest.approx(
        float(Fraction(7, 3) ** 2) * __import__("math").log(12) ** 2 / 16, abs=1e-12
    )
    assert rows[0].size >= rows[0].recip_d_pow  # the observed lower bound


def test_refute_monotone_endpoints():
    rows = xp.refute_strong_bound(Fraction(1, 2), 2, (8, 16, 32))
    assert rows[-1].measure <= rows[0].measure
    assert [r.n for r in rows] == [8, 16, 32]


def test_coprime_ratio_sweep_rows():
    rows = xp.coprime_ratio_sweep((50,), 1)
    assert rows == [(50, 1, 1275, 0.51)]
    rows = xp.coprime_ratio_sweep((3,), 2)
    assert rows[0][2] == 23 and rows[0][3] == pytest.approx(23 / 81)


def test_kernel_check_table_flags():
    rows = xp.kernel_check_table(6, (0.1, 0.3), max_terms=10**5)
    assert len(rows) == 12
    assert all(r["alias_ok"] and r["tail_ok"] for r in rows)


def test_counting_gap_table():
    rows = xp.counting_gap_table(0.37, 4, 1, (0.3, 0.1))
    assert len(rows) == 2
    assert all(r["ok"] for r in rows)
    assert all(r["gap"] <= r["gap_bound"] for r in rows)


def test_csv_cell_rendering():
    text = xp.format_csv(["a", "b"], [[Fraction(1, 3), True], [0.5, False]])
    assert text == "a,b\r\n1/3,true\r\n0.5,false\r\n"


def test_metadata_excludes_threads():
    doc = xp.metadata("sweep", {"seed": 1, "threads": 8, "k": 2})
    assert '"threads"' not in doc
    assert '"seed": 1' in doc
    assert '"prng": "python-random-mt19937"' in doc
