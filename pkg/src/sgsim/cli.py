"""Command line front end.

Subcommands: decoherence-curve, pointer, entropy, collapse-audit,
scaling-study, validate.  Tables go to --out (or stdout) as CSV or JSON
with fixed float formatting, so identical configurations produce
byte-identical files.  ``--plot`` additionally renders a PNG figure next
to the output file.  SG_THREADS caps the sweep worker pool.

Exit codes: 0 success, 1 configuration error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .experiments import SWEEPABLE, build_table
from .sweep import (ConfigError, SweepSpec, parse_config_file, parse_sweep,
                    rows_to_csv, rows_to_json)

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VALIDATION = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; remap to the config-error code
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="flat key = value file; flags override file values")
    common.add_argument("--out", metavar="PATH",
                        help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), dest="fmt", default=None,
                        help="table format (default csv)")
    common.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="coupling / mean branch velocity (default 1.0)")
    common.add_argument("--sigma0", type=float, default=None,
                        help="packet width (default 1.0)")
    common.add_argument("--T", type=float, default=None,
                        help="measurement time; scaling-study reads the constant c "
                             "of T(k) = c/sqrt(2k+1) from this flag "
                             "(default 6*sigma0/lambda, twice the decoherence time)")
    common.add_argument("--k", type=int, default=None,
                        help="half-size of the chain, sites -k..k (default 8)")
    common.add_argument("--alpha2", type=float, default=None,
                        help="spin-up weight |alpha|^2 (default 0.5)")
    common.add_argument("--sweep", action="append", default=None,
                        metavar="PARAM:START:STOP:COUNT[:log]",
                        help="sweep declaration; repeatable, first sweep outermost")
    common.add_argument("--plot", action="store_true",
                        help="render a PNG next to the output file (requires --out)")

    parser = _Parser(prog="sgsim",
                     description="decoherence tables for a spin measured by a "
                                 "chain of Gaussian packets")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("decoherence-curve", "branch overlap, distance and off-diagonal decay"),
            ("pointer", "center-of-mass characteristic function and spin readout"),
            ("entropy", "mixture entropy, per-site entropy and mixing gap"),
            ("collapse-audit", "entropy bookkeeping across collapse"),
            ("scaling-study", "shrinking measurement time T(k) = c/sqrt(2k+1)")):
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        cmd.set_defaults(func=_run_table, experiment=name)
    val = sub.add_parser("validate", help="run every oracle-vs-analytic comparison")
    val.add_argument("--out", metavar="PATH", help="write the report here too")
    val.add_argument("--perturb-sigma0", type=float, default=0.0,
                     help="skew the analytic sigma0 by this fraction "
                          "(sensitivity check; any nonzero value must fail)")
    val.set_defaults(func=_run_validate, experiment="validate")
    return parser


def _merge_params(args) -> tuple[dict, list[SweepSpec], str | None, str]:
    file_values: dict[str, str] = {}
    file_sweeps: list[SweepSpec] = []
    if args.config:
        file_values, file_sweeps = parse_config_file(args.config)

    def pick(flag_value, file_key, cast, default):
        if flag_value is not None:
            return flag_value
        if file_key in file_values:
            try:
                return cast(file_values[file_key])
            except ValueError as exc:
                raise ConfigError(f"config key {file_key!r}: {exc}") from None
        return default

    lam = pick(args.lam, "lambda", float, 1.0)
    sigma0 = pick(args.sigma0, "sigma0", float, 1.0)
    base = {
        "lambda": lam,
        "sigma0": sigma0,
        "T": pick(args.T, "T", float, 6.0 * sigma0 / lam),
        "k": pick(args.k, "k", int, 8),
        "alpha2": pick(args.alpha2, "alpha2", float, 0.5),
        "rho": pick(None, "rho", float, 1.0 / sigma0),
    }
    sweeps = [parse_sweep(text) for text in args.sweep] if args.sweep else file_sweeps
    out = args.out if args.out is not None else file_values.get("out")
    fmt = args.fmt if args.fmt is not None else file_values.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    return base, sweeps, out, fmt


def _default_sweeps(experiment: str, base: dict) -> list[SweepSpec]:
    sigma0 = base["sigma0"]
    if experiment == "pointer":
        return [SweepSpec("rho", -8.0 / sigma0, 8.0 / sigma0, 257)]
    if experiment == "entropy":
        return [SweepSpec("alpha2", 0.0, 1.0, 11)]
    if experiment == "collapse-audit":
        return [SweepSpec("alpha2", 0.1, 0.9, 9)]
    if experiment == "scaling-study":
        return [SweepSpec("k", 1, 10000, 41, log=True)]
    return [SweepSpec("k", 1, 64, 64)]


def _run_table(args) -> int:
    base, sweeps, out, fmt = _merge_params(args)
    if not sweeps:
        sweeps = _default_sweeps(args.experiment, base)
    allowed = SWEEPABLE[args.experiment]
    for spec in sweeps:
        if spec.param not in allowed:
            raise ConfigError(
                f"{args.experiment} cannot sweep {spec.param!r}; "
                f"choose from {', '.join(allowed)}")
    if args.plot and not out:
        raise ConfigError("--plot requires --out")
    table = build_table(args.experiment, base, sweeps)
    text = rows_to_csv(table.fieldnames, table.rows) if fmt == "csv" \
        else rows_to_json(table.fieldnames, table.rows)
    _write(out, text)
    if args.plot:
        from . import plotting  # matplotlib import deferred until needed
        plotting.render(table, os.path.splitext(out)[0] + ".png")
    return EXIT_OK


def _run_validate(args) -> int:
    from .validation import report, run_validation
    results = run_validation(perturb_sigma0=args.perturb_sigma0)
    text = report(results)
    sys.stdout.write(text)
    if args.out:
        _write(args.out, text)
    return EXIT_OK if all(res.passed for res in results) else EXIT_VALIDATION


def _write(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
