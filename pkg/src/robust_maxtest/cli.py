"""Command-line interface.

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 failure in the middle of a simulation suite.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .critical import cv_diag_exact, cv_diag_expansion, mc_sup_quantile
from .harness import emit_results_csv, load_suite, run_experiment
from .maxtests import run_mean_test, run_winsor_boot_test, run_winsor_test
from .model import DataError, RobustMaxTestError, TuningConfig, load_sample_csv, validate_sample
from .rates import check_theorem_conditions, rate_report

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_RUNTIME = 0, 2, 3, 4

TEST_METHODS = {"mean": run_mean_test, "winsor": run_winsor_test, "winsor-boot": run_winsor_boot_test}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _opt(parser, *names, **kw):
    # accept both --eta-bar and --eta_bar
    flags = []
    for name in names:
        flags.append(name)
        alt = "--" + name[2:].replace("-", "_")
        if alt != name:
            flags.append(alt)
    parser.add_argument(*flags, **kw)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="robust-maxtest", description="Robust max-tests for high-dimensional means.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="run a max-test on a CSV dataset and print a JSON report")
    t.add_argument("dataset")
    t.add_argument("--method", choices=sorted(TEST_METHODS), default="winsor")
    t.add_argument("--alpha", type=float, default=0.05)
    t.add_argument("--c", type=float, default=1.1)
    _opt(t, "--c-cov", type=float, default=1.1)
    _opt(t, "--eta-bar", type=float, default=0.0)
    _opt(t, "--boot-draws", type=int, default=2000)
    t.add_argument("--seed", type=int, default=0)
    _opt(t, "--has-header", action="store_true")
    t.add_argument("--verbose", action="store_true", help="include per-coordinate statistics")

    c = sub.add_parser("critval", help="print a critical value")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--alpha", type=float, default=0.05)
    c.add_argument("--mode", choices=("exact", "expansion", "mc"), default="exact")
    _opt(c, "--corr-file", default=None, help="CSV correlation matrix for --mode mc (identity if omitted)")
    c.add_argument("--draws", type=int, default=100000)
    c.add_argument("--seed", type=int, default=0)

    r = sub.add_parser("rates", help="evaluate rate diagnostics (constants set to 1)")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--d", type=int, required=True)
    r.add_argument("--m", type=float, required=True)
    _opt(r, "--eta-bar", type=float, default=0.0)
    r.add_argument("--xi", type=float, default=0.5)

    s = sub.add_parser("simulate", help="run a JSON suite of Monte Carlo experiments")
    s.add_argument("suite")
    s.add_argument("--out", required=True)
    s.add_argument("--threads", type=int, default=1)
    return p


def cmd_test(args) -> int:
    try:
        cfg = TuningConfig(
            alpha=args.alpha,
            c=args.c,
            c_cov=args.c_cov,
            eta_bar=args.eta_bar,
            boot_draws=args.boot_draws,
            seed=args.seed,
        )
    except RobustMaxTestError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    try:
        sample = load_sample_csv(args.dataset, has_header=args.has_header)
    except (DataError, FileNotFoundError) as exc:
        raise CliError(str(exc), EXIT_DATA) from exc
    findings = validate_sample(sample)
    if findings:
        raise CliError("invalid sample: " + ", ".join(map(str, findings)), EXIT_DATA)
    try:
        report = TEST_METHODS[args.method](sample, cfg)
    except RobustMaxTestError as exc:
        code = EXIT_DATA if type(exc).__name__ == "AllCoordinatesDegenerate" else EXIT_USAGE
        raise CliError(f"{type(exc).__name__}: {exc}", code) from exc
    _emit(report.to_dict(verbose=args.verbose))
    return EXIT_OK


def cmd_critval(args) -> int:
    try:
        if args.mode == "exact":
            value = cv_diag_exact(args.d, args.alpha)
        elif args.mode == "expansion":
            value = cv_diag_expansion(args.d, args.alpha)
        else:
            if args.corr_file:
                corr = np.loadtxt(args.corr_file, delimiter=",", ndmin=2)
                if corr.shape != (args.d, args.d):
                    raise CliError(f"correlation file is {corr.shape}, expected ({args.d}, {args.d})", EXIT_USAGE)
            else:
                corr = np.eye(args.d)
            value = mc_sup_quantile(corr, args.alpha, args.draws, args.seed)
    except (RobustMaxTestError, OSError) as exc:
        raise CliError(f"{type(exc).__name__}: {exc}", EXIT_USAGE) from exc
    _emit({"alpha": args.alpha, "critical_value": value, "d": args.d, "mode": args.mode})
    return EXIT_OK


def cmd_rates(args) -> int:
    try:
        rep = rate_report(args.n, args.d, args.m, args.eta_bar, args.xi)
        verdicts = check_theorem_conditions(args.n, args.d, args.m, args.eta_bar, args.xi)
    except RobustMaxTestError as exc:
        raise CliError(f"{type(exc).__name__}: {exc}", EXIT_USAGE) from exc
    out = rep.to_dict()
    out["conditions"] = verdicts
    _emit(out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        suite = load_suite(args.suite)
    except (OSError, ValueError, KeyError, TypeError, RobustMaxTestError) as exc:
        raise CliError(f"cannot load suite: {type(exc).__name__}: {exc}", EXIT_USAGE) from exc
    done = []
    for spec in suite:
        try:
            res = run_experiment(spec, threads=max(1, args.threads))
        except RobustMaxTestError as exc:
            emit_results_csv(done, args.out)
            raise CliError(f"experiment {spec.label!r} failed: {exc}", EXIT_RUNTIME) from exc
        done.append((spec, res))
        for method, mr in res.methods.items():
            print(f"{spec.label}\t{method}\t{mr.reject_rate:.4f}", file=sys.stdout)
    emit_results_csv(done, args.out)
    return EXIT_OK


COMMANDS = {"test": cmd_test, "critval": cmd_critval, "rates": cmd_rates, "simulate": cmd_simulate}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
