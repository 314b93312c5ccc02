"""Batch command-line interface.

Every subcommand writes a plain-column table (CSV by default, JSON on
request) to ``--output`` or stdout, and a short human summary to stderr.
Exit codes: 0 ok, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from . import analytics, number_theory, performance, qft_kernel, statevector, store

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

ORACLE_TOLERANCE = 1e-9


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def int_list(text: str) -> tuple[int, ...]:
    """``"1,2,3"`` or ``"9..21"`` / ``"9-21"`` (inclusive) or a mix."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        for sep in ("..", "-"):
            if sep in part.lstrip("-"):
                lo, hi = part.split(sep, 1)
                out.extend(range(int(lo), int(hi) + 1))
                break
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty list {text!r}")
    return tuple(out)


def _emit(args, rows, columns, tag="") -> None:
    text = store.write_rows(args.output, rows, columns, args.format, tag)
    if text is not None:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_orders(args) -> int:
    if (args.N is None) == (args.limit is None):
        raise UsageError("give either N or --limit")
    recs = [number_theory.semiprime_record(args.N)] if args.N is not None else number_theory.enumerate_semiprimes(args.limit)
    rows = []
    for rec in recs:
        spectrum = store.cached_spectrum(rec, args.cache_dir)
        rows.extend({"N": rec.N, "p": rec.p, "q": rec.q, "n": rec.n, "omega": w, "nu": nu} for w, nu in spectrum.entries)
    _emit(args, rows, ("N", "p", "q", "n", "omega", "nu"), "orders")
    _note(f"{len(recs)} semiprime(s), {len(rows)} spectrum entries")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = store.SweepConfig(
        n_values=args.n or (),
        b_values=args.b,
        per_n=args.per_n,
        s0_samples=args.s0_samples,
        threads=args.threads,
        seed=args.seed,
        cache=args.cache_dir,
        unsafe_large=args.unsafe_large,
        semiprimes=args.N,
    )
    if not config.n_values and not config.semiprimes:
        raise UsageError("give --n or --N")
    result = store.run_sweep(config)
    _emit(args, result.rows, store.SWEEP_COLUMNS, f"sweep config={config.config_hash()}")
    _note(f"{len(result.rows)} rows, config {config.config_hash()}")
    return EXIT_OK


def cmd_peak_shape(args) -> int:
    rec = number_theory.semiprime_record(args.N)
    spectrum = store.cached_spectrum(rec, args.cache_dir)
    if args.omega not in spectrum.orders:
        raise UsageError(f"omega={args.omega} is not an order of N={rec.N}")
    if not 0 <= args.j < args.omega:
        raise UsageError("need 0 <= j < omega")
    rows, crossings = [], []
    for b in args.b:
        if not 0 <= b <= rec.n - 1:
            raise UsageError(f"b={b} outside 0..{rec.n - 1}")
        scan = performance.peak_shape_scan(rec.n, b, args.omega, args.j, args.window)
        top = max(p for _, p in scan)
        rows.extend({"b": b, "l": l, "P_tilde": p, "shape": p / top} for l, p in scan)
        crossings.append(performance.half_max_crossing(scan, "left"))
    _emit(args, rows, ("b", "l", "P_tilde", "shape"), f"peak-shape N={rec.N} omega={args.omega} j={args.j}")
    spread = max(crossings) - min(crossings)
    _note("half-max crossings: " + ", ".join(f"b={b}: {c:.4f}" for b, c in zip(args.b, crossings)))
    _note(f"spread {spread:.4f}")
    return EXIT_OK


def cmd_separability(args) -> int:
    if args.N:
        recs = [number_theory.semiprime_record(N) for N in args.N]
    else:
        recs = number_theory.semiprimes_for_n(args.n, args.per_n)
    rows = []
    for rec in recs:
        qft_kernel.check_cap(rec.n, args.unsafe_large)
        spectrum = store.cached_spectrum(rec, args.cache_dir)
        for b in args.b:
            rep = performance.separability(rec, b, spectrum)
            rows.append(
                {
                    "N": rec.N,
                    "n": rec.n,
                    "b": b,
                    "delta_k": rep.delta_k,
                    "delta_j": rep.delta_j,
                    "log2_delta_k": math.log2(rep.delta_k) if rep.delta_k > 0 else None,
                    "log2_delta_j": math.log2(rep.delta_j) if rep.delta_j > 0 else None,
                }
            )
    _emit(args, rows, ("N", "n", "b", "delta_k", "delta_j", "log2_delta_k", "log2_delta_j"), "separability")
    return EXIT_OK


def cmd_fit(args) -> int:
    rows = store.read_rows(args.input)
    bs = args.b or tuple(sorted({int(r["b"]) for r in rows}))
    fits = []
    for b in bs:
        try:
            fits.append(analytics.fit_exponential(rows, b, args.n_min))
        except analytics.FitError as exc:
            _note(f"b={b}: {exc}")
    if not fits:
        raise UsageError("no b value could be fitted")
    columns = ("b", "xi_fitted", "xi_model", "xi_analytic", "ratio_to_model", "n_min", "n_max", "count", "residual_rms")
    _emit(args, store.fit_rows(fits), columns, "fit")
    return EXIT_OK


def cmd_analytic(args) -> int:
    if args.nt:
        for b in args.b:
            try:
                tp = analytics.transition_point(b, empirical=True)
            except analytics.OutOfValidityError as exc:
                _note(f"b={b}: {exc}")
                continue
            print(f"{tp.n_t_formula:.2f}" if len(args.b) == 1 else f"b={b} {tp.n_t_formula:.2f}")
            emp = "none" if tp.n_t_empirical is None else f"{tp.n_t_empirical:.3f}"
            note = "" if tp.valid else " (outside the regime where the formula is meant to hold)"
            _note(f"b={b}: quadratic root {tp.n_t_quadratic:.4f}, model crossing {emp}{note}")
        return EXIT_OK
    rows = []
    for b in args.b:
        row = {
            "b": b,
            "xi_model": analytics.xi_model(b),
            "xi_analytic": analytics.analytic_xi(b),
            "validity_bound": analytics.validity_bound(b),
            "taylor_validity_bound": analytics.taylor_validity_bound(b),
            "fbar": analytics.fbar(),
        }
        try:
            row["n_t"] = analytics.transition_point(b).n_t_formula
        except analytics.OutOfValidityError:
            row["n_t"] = None
        for n in args.n or ():
            if n < b + 2:
                continue
            m = analytics.moments(n, b)
            rows.append(
                row
                | {
                    "n": n,
                    "phi_max": qft_kernel.phi_max(n, b),
                    "mean_phi": m.mean,
                    "mean_phi_sq": m.mean_square,
                    "mean_k_mean_sq": m.mean_square_of_k_mean,
                    "sigma_hat_sq": analytics.sigma_hat_squared(n, b),
                    "P_small": analytics.model_P_small_n(n, b),
                    "P_large": analytics.model_P_large_n(n, b) if n >= analytics.ANCHOR_N else None,
                }
            )
        if not args.n:
            rows.append(row)
    columns = ["b", "xi_model", "xi_analytic", "validity_bound", "taylor_validity_bound", "fbar", "n_t"]
    if args.n:
        columns += ["n", "phi_max", "mean_phi", "mean_phi_sq", "mean_k_mean_sq", "sigma_hat_sq", "P_small", "P_large"]
    _emit(args, rows, columns, "analytic")
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = [
        number_theory.verify_order2_uniqueness(args.limit),
        number_theory.verify_max_order_bound(args.limit),
    ]
    for rep in reports:
        _note(str(rep))
    total = sum(len(r.violations) for r in reports)
    print(f"{total} violations (order-2 uniqueness, max-order bound)")
    return EXIT_OK if total == 0 else EXIT_CHECK_FAILED


def oracle_deltas(N: int, b_values: Sequence[int] | None = None) -> list[dict]:
    """Peak probabilities from the phase formulas against the gate-level circuit."""
    rec = number_theory.semiprime_record(N)
    bs = sorted({1, 2, rec.n - 1}) if b_values is None else sorted(set(b_values))
    out = []
    for w in number_theory.order_spectrum(rec).orders:
        state = statevector.initial_state(rec.n, w)
        for b in bs:
            if not 0 <= b <= rec.n - 1:
                raise UsageError(f"b={b} outside 0..{rec.n - 1} for N={N}")
            dist = statevector.measure_distribution(statevector.apply_banded_qft(state, b))
            ps = qft_kernel.peak_set(rec.n, w)
            formula = performance.peak_probabilities(rec.n, b, w)
            delta = np.abs(formula - dist[ps.l])
            out.append({"N": N, "n": rec.n, "omega": w, "b": b, "peaks": w, "max_abs_delta": float(delta.max())})
    return out


def cmd_oracle_check(args) -> int:
    rows = [r for N in args.N for r in oracle_deltas(N, args.b)]
    _emit(args, rows, ("N", "n", "omega", "b", "peaks", "max_abs_delta"), "oracle-check")
    worst = max(r["max_abs_delta"] for r in rows)
    ok = worst <= ORACLE_TOLERANCE
    _note(f"max |delta| = {worst:.3e} over {len(rows)} (N, omega, b) cases: {'ok' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bandqft", description="Banded QFT period-finding experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--cache-dir", default=None, help=f"spectrum cache (default ${store.CACHE_ENV})")
        return p

    p = add("orders", cmd_orders, "order spectrum of N or of every semiprime below a limit")
    p.add_argument("N", nargs="?", type=int)
    p.add_argument("--limit", type=int)

    p = add("sweep", cmd_sweep, "ensemble performance P_N(n, b)")
    p.add_argument("--n", type=int_list, help="register sizes, e.g. 9..21")
    p.add_argument("--N", type=int_list, help="explicit semiprimes instead of --n")
    p.add_argument("--b", type=int_list, required=True)
    p.add_argument("--per-n", type=int, default=5)
    p.add_argument("--s0-samples", type=int, default=None, help="average over this many random s0")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unsafe-large", action="store_true")

    p = add("peak-shape", cmd_peak_shape, "probability around one Fourier peak for several bandwidths")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--omega", type=int, required=True)
    p.add_argument("--b", type=int_list, required=True)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--j", type=int, default=1)

    p = add("separability", cmd_separability, "k- and j-factorisation errors")
    p.add_argument("--N", type=int_list)
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--per-n", type=int, default=5)
    p.add_argument("--b", type=int_list, default=(1, 2, 3, 4, 5, 6))
    p.add_argument("--unsafe-large", action="store_true")

    p = add("fit", cmd_fit, "exponential decay constants from a sweep file")
    p.add_argument("--input", required=True)
    p.add_argument("--b", type=int_list)
    p.add_argument("--n-min", type=int, default=analytics.ANCHOR_N)

    p = add("analytic", cmd_analytic, "closed-form predictions")
    p.add_argument("--b", type=int_list, required=True)
    p.add_argument("--n", type=int_list)
    p.add_argument("--nt", action="store_true", help="print the transition point only")

    p = add("verify", cmd_verify, "exhaustive checks of the order theorems")
    p.add_argument("--limit", type=int, default=10_000)

    p = add("oracle-check", cmd_oracle_check, "phase formulas against the gate-level circuit")
    p.add_argument("--N", type=int_list, default=(15, 21, 33, 35, 39))
    p.add_argument("--b", type=int_list, default=None, help="default 1, 2 and n-1")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, qft_kernel.CapExceededError, statevector.ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
