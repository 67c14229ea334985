"""Command-line front end.

One subcommand per verification facet: sieve, lemma1, kernel-check,
lcmset, approx, sweep, ck, refute.  Results go to --out or stdout;
delimited outputs can be rendered to a figure next to the file with
--plot.  Exit codes: 0 success, 1 invalid input, 2 budget refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetExceededError, InvalidInputError
from . import experiments as xp
from .lcmset import DEFAULT_MAX_ENTRIES, build_lcm_set, density
from .numtheory import DEFAULT_WORK_BUDGET, build_sieves
from .solver import (
    best_approx,
    best_approx_bruteforce,
    dirichlet_k1,
    parse_theta,
    solution_to_dict,
)

_GAP_DELTAS = (0.3, 0.1, 0.02)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; 2 is reserved for budget refusals here
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _int_grid(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise InvalidInputError(f"bad integer grid {text!r}") from None


def _float_grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise InvalidInputError(f"bad float grid {text!r}") from None


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_bytes(text.encode())


def _emit_meta(command: str, config: dict, out: str | None):
    if out is not None:
        Path(out + ".meta.json").write_bytes(xp.metadata(command, config).encode())


def _plot_path(args) -> str | None:
    if not getattr(args, "plot", False):
        return None
    if args.out is None:
        raise InvalidInputError("--plot needs --out to know where to put the figure")
    return str(Path(args.out).with_suffix(".png"))


def _cmd_sieve(args) -> int:
    tables = build_sieves(args.n, max_entries=args.budget or 10**8)
    if args.format == "json":
        rows = [
            {"n": n, "phi": tables.phi[n], "mu": tables.mu[n], "d": tables.divcount[n]}
            for n in range(1, args.n + 1)
        ]
        _emit(xp.format_jsonl(rows), args.out)
    else:
        rows = [
            [n, tables.phi[n], tables.mu[n], tables.divcount[n]]
            for n in range(1, args.n + 1)
        ]
        _emit(xp.format_csv(["n", "phi", "mu", "d"], rows), args.out)
    return 0


def _cmd_lemma1(args) -> int:
    rows = xp.coprime_ratio_sweep(
        args.grid or (50, 100, 200, 400), args.k, budget=args.budget or DEFAULT_WORK_BUDGET
    )
    _emit(xp.format_csv(["x", "k", "sum", "ratio"], rows), args.out)
    _emit_meta("lemma1", {"k": args.k, "grid": list(args.grid or (50, 100, 200, 400))}, args.out)
    if (fig := _plot_path(args)) is not None:
        from . import figures

        figures.plot_coprime_ratio(rows, fig)
    return 0


def _cmd_kernel_check(args) -> int:
    if args.theta is not None:
        tv = parse_theta(args.theta)
        deltas = (args.delta,) if args.delta is not None else _GAP_DELTAS
        rows = xp.counting_gap_table(
            float(tv.approx), args.n, args.k, deltas,
            budget=args.budget or DEFAULT_WORK_BUDGET,
        )
        header = ["theta", "n", "k", "delta", "direct", "main_term", "gap",
                  "gap_bound", "ok"]
        _emit(xp.format_csv(header, [[r[h] for h in header] for r in rows]), args.out)
        return 0
    deltas = args.grid or xp.KERNEL_DELTA_GRID
    rows = xp.kernel_check_table(args.n, deltas, max_terms=args.budget or 10**6)
    header = ["m", "delta", "alias_avg", "lattice_value", "lattice_radius",
              "alias_gap", "alias_ok", "tail_value", "tail_radius", "tail_bound",
              "tail_ok"]
    _emit(xp.format_csv(header, [[r[h] for h in header] for r in rows]), args.out)
    if (fig := _plot_path(args)) is not None:
        from . import figures

        figures.plot_kernel_check(rows, fig)
    return 0


def _cmd_lcmset(args) -> int:
    cap = args.budget or DEFAULT_MAX_ENTRIES
    if args.grid:
        rows = []
        for n in args.grid:
            d = density(n, args.k, max_entries=cap)
            rows.append([n, args.k, d.size, d.ratio])
        if args.format == "json":
            _emit(xp.format_jsonl(
                [{"N": r[0], "k": r[1], "size": r[2], "ratio": r[3]} for r in rows]
            ), args.out)
        else:
            _emit(xp.format_csv(["N", "k", "size", "ratio"], rows), args.out)
        if (fig := _plot_path(args)) is not None:
            from . import figures

            figures.plot_census(rows, fig)
        return 0
    if args.n is None:
        raise InvalidInputError("lcmset needs --n (full dump) or --grid (census)")
    lam = build_lcm_set(args.n, args.k, max_entries=cap)
    if args.format == "json":
        _emit(xp.format_jsonl(
            [{"L": e.L, "min_product": e.min_product, "witness": list(e.witness)}
             for e in lam.entries]
        ), args.out)
    else:
        rows = [[e.L, e.min_product, "*".join(str(q) for q in e.witness)]
                for e in lam.entries]
        _emit(xp.format_csv(["L", "min_product", "witness"], rows), args.out)
    return 0


def _cmd_approx(args) -> int:
    tv = parse_theta(args.theta)
    if args.method == "brute":
        sol = best_approx_bruteforce(
            tv, args.n, args.k, coprime_only=args.coprime_only,
            budget=args.budget or DEFAULT_WORK_BUDGET,
        )
    elif args.method == "cf":
        if args.k != 1:
            raise InvalidInputError("--method cf is the single-fraction path; needs --k 1")
        sol = dirichlet_k1(tv, args.n)
    else:
        sol = best_approx(tv, args.n, args.k)
    if not sol.certified:
        alt = f"; runner-up L={sol.alternate[0]}" if sol.alternate else ""
        print(
            f"warning: argmin not certified at theta radius {float(sol.error_radius):.3e}{alt}",
            file=sys.stderr,
        )
    doc = solution_to_dict(sol, tv, args.n, args.k)
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _sweep_config(args) -> xp.SweepConfig:
    if args.sampler == "uniform-rational" and args.seed is None:
        raise InvalidInputError("--seed is required for randomized sampling")
    return xp.SweepConfig(
        k=args.k,
        n_grid=args.grid,
        sampler=args.sampler,
        samples=args.samples,
        seed=args.seed if args.seed is not None else 0,
        threads=args.threads,
        den_bound=args.den_bound,
        theta_list=tuple(t for t in (args.theta_list or "").split(",") if t),
        budget=args.budget or DEFAULT_MAX_ENTRIES,
    )


def _config_dict(cfg: xp.SweepConfig) -> dict:
    return {
        "k": cfg.k,
        "n_grid": list(cfg.n_grid),
        "sampler": cfg.sampler,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "den_bound": cfg.den_bound,
        "theta_list": list(cfg.theta_list),
        "worst_case_row": cfg.worst_case_row,
        "budget": cfg.budget,
    }


def _cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    result = xp.scaling_sweep(cfg)
    _emit(xp.sweep_csv(result), args.out)
    _emit_meta("sweep", _config_dict(cfg), args.out)
    if (fig := _plot_path(args)) is not None and result.summaries:
        from . import figures

        figures.plot_sweep(result, cfg.k, fig)
    if result.truncated_at is not None:
        print(
            f"budget refused: grid truncated at N={result.truncated_at}; "
            "partial output written",
            file=sys.stderr,
        )
        return 2
    return 0


def _cmd_ck(args) -> int:
    cfg = _sweep_config(args)
    fit = xp.exponent_fit(cfg)
    if args.format == "json":
        doc = {
            "exponent": fit.exponent,
            "intercept": fit.intercept,
            "residuals": list(fit.residuals),
            "grid": list(fit.grid),
            "maxima": list(fit.maxima),
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(xp.fit_csv(fit), args.out)
    _emit_meta("ck", _config_dict(cfg), args.out)
    if (fig := _plot_path(args)) is not None:
        from . import figures

        figures.plot_fit(fit, fig)
    return 0


def _cmd_refute(args) -> int:
    try:
        c = Fraction(args.c)
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"bad constant {args.c!r}") from None
    rows = xp.refute_strong_bound(c, args.k, args.grid)
    _emit(xp.refute_csv(rows), args.out)
    _emit_meta("refute", {"C": str(c), "k": args.k, "grid": list(args.grid)}, args.out)
    if (fig := _plot_path(args)) is not None:
        from . import figures

        figures.plot_refute(rows, fig)
    return 0


def _add_common(p: argparse.ArgumentParser, *, fmt=True, out=True, budget=True, plot=False):
    if fmt:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    if out:
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    if budget:
        p.add_argument("--budget", type=int, help="work / memory budget override")
    if plot:
        p.add_argument("--plot", action="store_true",
                       help="also render a figure next to --out")


def build_parser() -> _Parser:
    top = _Parser(prog="ratsum", description=__doc__)
    top.add_argument("--version", action="version", version=f"ratsum {__version__}")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sieve", help="phi/mu/d tables up to --n")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_sieve)

    p = sub.add_parser("lemma1", help="pairwise-coprime weighted sum ratios")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--grid", type=_int_grid, help="x values (default 50,100,200,400)")
    _add_common(p, fmt=False, plot=True)
    p.set_defaults(func=_cmd_lemma1)

    p = sub.add_parser(
        "kernel-check",
        help="kernel identity table, or the counting-sum gap when --theta is given",
    )
    p.add_argument("--n", type=int, default=50, help="max m (identity) or max q (gap)")
    p.add_argument("--k", type=int, default=1, help="tuple length in gap mode")
    p.add_argument("--theta", help="switch to counting-sum gap mode")
    p.add_argument("--delta", type=float, help="kernel width (gap mode)")
    p.add_argument("--grid", type=_float_grid, help="delta grid for the identity table")
    _add_common(p, fmt=False, plot=True)
    p.set_defaults(func=_cmd_kernel_check)

    p = sub.add_parser("lcmset", help="reachable-lcm census or full dump")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--grid", type=_int_grid, help="census over these N values")
    _add_common(p, plot=True)
    p.set_defaults(func=_cmd_lcmset)

    p = sub.add_parser("approx", help="best k-term approximation of --theta")
    p.add_argument("--theta", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--method", choices=("scan", "brute", "cf"), default="scan")
    p.add_argument("--coprime-only", action="store_true",
                   help="restrict brute force to pairwise-coprime tuples")
    _add_common(p, fmt=False)
    p.set_defaults(func=_cmd_approx)

    for name, fn, helptext in (
        ("sweep", _cmd_sweep, "scaled best-error sweep over an N grid"),
        ("ck", _cmd_ck, "exponent fit for the product-weighted error"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--grid", type=_int_grid, required=True)
        p.add_argument("--samples", type=int, default=50)
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--sampler", choices=xp.SAMPLERS, default="uniform-rational")
        p.add_argument("--theta-list", help="comma list for --sampler fixed-list")
        p.add_argument("--den-bound", type=int, default=xp.DEFAULT_DEN_BOUND)
        _add_common(p, fmt=(name == "ck"), plot=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("refute", help="covering measure of product-weighted intervals")
    p.add_argument("--c", default="1", help="constant C as integer or p/q")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--grid", type=_int_grid, required=True)
    _add_common(p, fmt=False, plot=True)
    p.set_defaults(func=_cmd_refute)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as e:
        return int(e.code or 0)
    except InvalidInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BudgetExceededError as e:
        print(f"budget refused: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
