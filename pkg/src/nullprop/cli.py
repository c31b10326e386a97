"""Command-line interface: estimation, calibration, simulation experiments
and figure-data export.

Every randomized command either takes an explicit --seed or generates one and
records it in the output, so any report can be reproduced exactly from its
embedded configuration echo.
"""

from __future__ import annotations

import argparse
import csv
import json
import secrets
import sys

from . import __version__
from .bounding import (
    BoundingFunctionSpec,
    BoundingSequenceSpec,
    analytic_beta,
)
from .calibration import (
    CacheError,
    CalibrationRequest,
    CalibrationTable,
    cached_calibrate,
)
from .estimator import EstimateConfig, PValueSample, default_interval, estimate_lambda
from .simlab import (
    EstimateConfig as _EstimateConfig,  # noqa: F401  (re-export convenience)
    PowerCurveResult,
    ShiftModel,
    daniels_check,
    power_curve,
    regime_grid,
)

DEFAULT_METHOD_FOR_DELTA = {"linear": "daniels", "constant": "dkw", "stddev": "gumbel"}


class CliError(RuntimeError):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def read_pvalues(path: str, column: str | None = None) -> PValueSample:
    """Read p-values from a one-per-line text file or a CSV with a named
    column.  Out-of-range values are an error, never silently clipped."""
    values = []
    if column is not None or path.endswith(".csv"):
        column = column or "pvalue"
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or column not in reader.fieldnames:
                raise CliError(f"{path}: missing column {column!r}")
            for lineno, row in enumerate(reader, start=2):
                raw = row[column]
                try:
                    v = float(raw)
                except (TypeError, ValueError):
                    raise CliError(f"{path}:{lineno}: unparseable value {raw!r}") from None
                if not 0.0 <= v <= 1.0:
                    raise CliError(f"{path}:{lineno}: p-value {v} outside [0, 1]")
                values.append(v)
    else:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    v = float(line)
                except ValueError:
                    raise CliError(f"{path}:{lineno}: unparseable line {line!r}") from None
                if not 0.0 <= v <= 1.0:
                    raise CliError(f"{path}:{lineno}: p-value {v} outside [0, 1]")
                values.append(v)
    if not values:
        raise CliError(f"{path}: no p-values found")
    return PValueSample(sorted(values), source=path)


def _write_json(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True)
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _write_csv(rows: list[dict], columns, path: str | None) -> None:
    out = sys.stdout if path is None or path == "-" else open(path, "w", newline="", encoding="utf-8")
    try:
        writer = csv.writer(out)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
    finally:
        if out is not sys.stdout:
            out.close()


def _load_cache(path: str | None) -> CalibrationTable | None:
    if path is None:
        return None
    try:
        return CalibrationTable.load(path)
    except FileNotFoundError:
        return CalibrationTable()


def _seed_or_generate(seed: int | None) -> int:
    return secrets.randbits(63) if seed is None else seed


def _interval_arg(args, n: int) -> tuple[float, float]:
    if args.interval is not None:
        return (args.interval[0], args.interval[1])
    return default_interval(n)


def cmd_estimate(args) -> dict:
    sample = read_pvalues(args.input, args.column)
    delta = BoundingFunctionSpec(args.delta)
    method = args.method or DEFAULT_METHOD_FOR_DELTA[args.delta]
    interval = _interval_arg(args, sample.n)
    seed = _seed_or_generate(args.seed) if method == "monte_carlo" else args.seed
    sequence = BoundingSequenceSpec(
        method=method,
        alpha=args.alpha,
        interval=interval,
        mc_replicates=args.mc_replicates,
        mc_seed=seed,
    )
    config = EstimateConfig(
        delta=delta, sequence=sequence, interval=interval, refine_grid=args.refine_grid
    )
    table = _load_cache(args.cache)
    report = estimate_lambda(sample, config, table=table, workers=args.workers)
    if table is not None and args.cache is not None:
        table.save(args.cache)
    doc = {
        "version": __version__,
        "command": "estimate",
        "input": args.input,
        "n": report.n,
        "lambda_hat": report.lambda_hat,
        "lambda_hat_raw": report.lambda_hat_raw,
        "argmax_t": report.argmax_t,
        "beta_used": report.beta_used,
        "alpha": report.alpha,
        "hc_reject": report.hc_reject,
        "fwer_lambda": report.fwer_lambda,
        "empty_interval": report.empty_interval,
        "seed": seed,
        "config": report.config,
    }
    _write_json(doc, args.output)
    return doc


def cmd_calibrate(args) -> dict:
    delta = BoundingFunctionSpec(args.delta)
    seed = _seed_or_generate(args.seed)
    table = _load_cache(args.cache) or CalibrationTable()
    rows = []
    for n in args.n:
        interval = _interval_arg(args, n)
        req = CalibrationRequest(
            n=n,
            delta=delta,
            interval=interval,
            alpha=args.alpha,
            replicates=args.replicates,
            seed=seed,
        )
        entry = cached_calibrate(req, table=table, workers=args.workers)
        method = DEFAULT_METHOD_FOR_DELTA[args.delta]
        try:
            beta_analytic = analytic_beta(method, n, args.alpha)
        except ValueError:
            beta_analytic = float("nan")
        rows.append(
            {
                "n": n,
                "delta_kind": args.delta,
                "a": interval[0],
                "b": interval[1],
                "alpha": args.alpha,
                "replicates": entry.replicates_used,
                "seed": seed,
                "beta_mc": entry.beta,
                "achieved_level": entry.achieved_level,
                "beta_analytic": beta_analytic,
            }
        )
    if args.cache is not None:
        table.save(args.cache)
    doc = {"version": __version__, "command": "calibrate", "seed": seed, "entries": rows}
    if args.format == "csv":
        _write_csv(
            rows,
            (
                "n",
                "delta_kind",
                "a",
                "b",
                "alpha",
                "replicates",
                "seed",
                "beta_mc",
                "achieved_level",
                "beta_analytic",
            ),
            args.output,
        )
    else:
        _write_json(doc, args.output)
    return doc


def cmd_simulate_power(args) -> dict:
    seed = _seed_or_generate(args.seed)
    models = [
        ShiftModel(
            kappa=args.kappa,
            r=0.5,
            n=args.n,
            lambda_true=args.lambda_true,
            seed=seed + i,
            mu=mu,
        )
        for i, mu in enumerate(args.mu)
    ]
    table = _load_cache(args.cache)
    configs = []
    for kind in args.delta:
        method = args.method or DEFAULT_METHOD_FOR_DELTA[kind]
        sequence = BoundingSequenceSpec(
            method=method,
            alpha=args.alpha,
            mc_replicates=args.mc_replicates,
            mc_seed=seed if method == "monte_carlo" else None,
        )
        configs.append(EstimateConfig(delta=BoundingFunctionSpec(kind), sequence=sequence))
    result = power_curve(models, configs, args.replicates, table=table)
    if table is not None and args.cache is not None:
        table.save(args.cache)
    _write_csv(result.rows, PowerCurveResult.COLUMNS, args.output)
    return {
        "version": __version__,
        "command": "simulate-power",
        "seed": seed,
        "rows": len(result.rows),
    }


def cmd_simulate_regime(args) -> dict:
    rows = []
    for nu in args.nu:
        rows.extend(regime_grid(nu, args.grid_points, args.grid_points))
    _write_csv(rows, ("nu", "gamma", "r", "regime", "fwer_full_detection"), args.output)
    return {"version": __version__, "command": "simulate-regime", "rows": len(rows)}


def cmd_check_daniels(args) -> dict:
    seed = _seed_or_generate(args.seed)
    prob = daniels_check(args.n, args.lam, args.replicates, seed)
    doc = {
        "version": __version__,
        "command": "check-daniels",
        "n": args.n,
        "lam": args.lam,
        "replicates": args.replicates,
        "seed": seed,
        "empirical_probability": prob,
        "exact_probability": 1.0 / args.lam,
    }
    _write_json(doc, args.output)
    return doc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nullprop",
        description="Lower confidence bounds for the proportion of false null hypotheses",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_default=None):
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--seed", type=int, default=seed_default)
        p.add_argument("--output", default=None, help="output path (default stdout)")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("estimate", help="lower bound for the false-null proportion")
    p.add_argument("--input", required=True)
    p.add_argument("--column", default=None, help="CSV column name holding p-values")
    p.add_argument("--delta", choices=("linear", "constant", "stddev"), default="stddev")
    p.add_argument(
        "--method", choices=("daniels", "dkw", "gumbel", "monte_carlo"), default=None
    )
    p.add_argument("--interval", nargs=2, type=float, default=None, metavar=("A", "B"))
    p.add_argument("--refine-grid", type=int, default=0)
    p.add_argument("--mc-replicates", type=int, default=1000)
    p.add_argument("--cache", default=None)
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("calibrate", help="Monte Carlo bounding sequence for an interval")
    p.add_argument("--n", type=int, action="append", required=True)
    p.add_argument("--delta", choices=("linear", "constant", "stddev"), default="stddev")
    p.add_argument("--interval", nargs=2, type=float, default=None, metavar=("A", "B"))
    p.add_argument("--replicates", type=int, default=1000)
    p.add_argument("--cache", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("simulate-power", help="detected-proportion curves vs shift")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--lambda-true", type=float, required=True)
    p.add_argument("--kappa", type=float, default=2.0)
    p.add_argument("--mu", type=float, action="append", required=True)
    p.add_argument(
        "--delta",
        choices=("linear", "constant", "stddev"),
        action="append",
        required=True,
    )
    p.add_argument(
        "--method", choices=("daniels", "dkw", "gumbel", "monte_carlo"), default=None
    )
    p.add_argument("--mc-replicates", type=int, default=1000)
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--cache", default=None)
    common(p)
    p.set_defaults(func=cmd_simulate_power)

    p = sub.add_parser("simulate-regime", help="asymptotic detection-regime grid")
    p.add_argument("--nu", type=float, action="append", default=None)
    p.add_argument("--grid-points", type=int, default=100)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_simulate_regime, nu_default=[0.0, 0.5, 1.0])

    p = sub.add_parser("check-daniels", help="exact-identity Monte Carlo check")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--replicates", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_check_daniels)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate-regime" and args.nu is None:
        args.nu = [0.0, 0.5, 1.0]
    try:
        args.func(args)
    except (CliError, CacheError, ValueError, OSError) as exc:
        print(json.dumps({"error": str(exc), "command": args.command}), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
