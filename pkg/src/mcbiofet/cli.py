"""Command line front end: ``mcbiofet <verb> [options]``.

Exit codes: 0 success, 1 invalid parameters or config, 2 numeric failure,
3 I/O error. The default config path can be set with ``MCBIOFET_CONFIG``.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import CapacityUndefined, capacity_closed_form, optimal_input_pdf
from .link import LinkModel
from .oracles import ConvergenceError, normality_check, simulate_link
from .params import (ConfigError, SystemParams, advisories, default_params, load_config,
                     parse_assignment, render_config, to_si, validate)
from .sweep import VARIABLES, SweepSpec, run_sweep, sweep_csv, write_csv
from .validation import run_checks, summary

ENV_CONFIG = "MCBIOFET_CONFIG"
EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, msg, code):
        super().__init__(msg)
        self.code = code


def resolve_params(args) -> SystemParams:
    path = args.config or os.environ.get(ENV_CONFIG)
    try:
        params = load_config(path) if path else default_params()
        updates = dict(parse_assignment(s.replace("=", " = ", 1), "--set") for s in args.set)
        params = params.with_values(**updates)
    except FileNotFoundError as exc:
        raise CliError(f"config not found: {exc.filename}", EXIT_IO) from None
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}", EXIT_IO) from None
    except (ConfigError, KeyError) as exc:
        raise CliError(str(exc.args[0]) if exc.args else str(exc), EXIT_INVALID) from None
    bad = validate(params)
    if bad:
        raise CliError("invalid parameters:\n  " + "\n  ".join(bad), EXIT_INVALID)
    return params


def emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc}", EXIT_IO) from None
    else:
        sys.stdout.write(text)


def cmd_capacity(args) -> int:
    params = resolve_params(args)
    link = LinkModel(params)
    try:
        res = capacity_closed_form(link, args.variant)
    except CapacityUndefined as exc:
        raise CliError(f"capacity undefined: {exc}", EXIT_NUMERIC) from None
    td = link.derived
    report = {
        "C_bits": res.C_bits, "L": res.L, "M": res.M, "K_norm": res.K_norm,
        "arcsin_hi": res.arcsin_hi, "arcsin_lo": res.arcsin_lo,
        "sigma2_F_A2": link.sigma2_F, "g_FET_S": td.g_FET, "psi_L_V": td.psi_L,
        "lambda_D_m": td.lambda_D, "N_r": link.N_r, "formula_variant": res.formula_variant,
        "flatband_literal": params.noise.flatband_literal, "param_hash": params.digest(),
        "warnings": advisories(params),
    }
    if args.json:
        emit(json.dumps(report, indent=2) + "\n", args.out)
        return EXIT_OK
    lines = [f"{k:<18} {v:.6g}" if isinstance(v, float) else f"{k:<18} {v}"
             for k, v in report.items() if k != "warnings"]
    lines += [f"# warning: {w}" for w in report["warnings"]]
    emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_distribution(args) -> int:
    params = resolve_params(args)
    if args.grid < 64:
        raise CliError("--grid must be >= 64", EXIT_INVALID)
    pdf = optimal_input_pdf(params, args.grid)
    buf = io.StringIO()
    write_csv(["Ntx (1)", "density (1/molecule)"], zip(pdf.grid.tolist(), pdf.density.tolist()), buf)
    emit(buf.getvalue(), args.out)
    return EXIT_OK


def _sweep_values(args) -> SweepSpec:
    key = VARIABLES[args.variable][0]
    if args.values:
        raw = [float(v) for v in args.values.split(",")]
    elif args.range:
        start, stop, num = args.range.split(":")
        lo, hi = float(start), float(stop)
        raw = (np.geomspace(lo, hi, int(num)) if args.spacing == "log"
               else np.linspace(lo, hi, int(num))).tolist()
    else:
        raise CliError("sweep needs --values or --range", EXIT_INVALID)
    if args.unit and key:
        raw = [to_si(key, v, args.unit) for v in raw]
    return SweepSpec(args.variable, tuple(raw))


def cmd_sweep(args) -> int:
    params = resolve_params(args)
    try:
        spec = _sweep_values(args)
    except (ValueError, ConfigError) as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    rows = run_sweep(spec, params, workers=args.workers)
    emit(sweep_csv(spec, rows), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    params = resolve_params(args)
    try:
        checks = run_checks(params, args.level)
    except ConvergenceError as exc:
        raise CliError(str(exc), EXIT_NUMERIC) from None
    for c in checks:
        print(c.line(), file=sys.stderr)
    result = summary(checks)
    emit(json.dumps(result, indent=2) + "\n", args.out)
    return EXIT_OK if result["passed"] else EXIT_NUMERIC


def cmd_simulate(args) -> int:
    params = resolve_params(args)
    sim = simulate_link(params, args.ntx, args.trials, args.seed, args.workers)
    report = {
        "Ntx": sim.Ntx, "n_trials": sim.n_trials, "seed": args.seed,
        "mean_A": sim.mean, "expected_mean_A": sim.expected_mean,
        "mean_z": (sim.mean - sim.expected_mean) / sim.mean_stderr,
        "var_A2": sim.var, "expected_var_A2": sim.expected_var,
        "var_z": (sim.var - sim.expected_var) / sim.var_stderr,
        "normality_ks": normality_check(sim.samples) if sim.n_trials > 1 else float("nan"),
        "param_hash": params.digest(),
    }
    print(json.dumps(report, indent=2))
    if args.out:
        buf = io.StringIO()
        write_csv(["I_rx (A)"], ([v] for v in sim.samples.tolist()), buf)
        emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_template(args) -> int:
    emit(render_config(resolve_params(args)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"parameter file (default: ${ENV_CONFIG} or built-in)")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one parameter, e.g. --set 'channel.d=150 um'")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="mcbiofet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("capacity", parents=[common], help="closed-form capacity report")
    p.add_argument("--json", action="store_true")
    p.add_argument("--variant", choices=["corrected", "literal"], default="corrected",
                   help="arcsine form; 'literal' keeps the printed lower argument")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("distribution", parents=[common], help="capacity-achieving input pdf as CSV")
    p.add_argument("--grid", type=int, default=1024)
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("sweep", parents=[common], help="capacity along one parameter")
    p.add_argument("variable", choices=sorted(VARIABLES))
    p.add_argument("--values", help="comma separated list")
    p.add_argument("--range", help="START:STOP:NUM")
    p.add_argument("--spacing", choices=["log", "linear"], default="log")
    p.add_argument("--unit", help="unit of the given values (default SI)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", parents=[common], help="oracle cross-checks")
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo output-current samples")
    p.add_argument("--ntx", type=float, default=1e9)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("params", help="parameter file utilities")
    psub = p.add_subparsers(dest="params_verb", required=True)
    t = psub.add_parser("template", parents=[common], help="print a commented parameter file")
    t.set_defaults(func=cmd_template)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"mcbiofet: {exc}", file=sys.stderr)
        return exc.code
    except ConvergenceError as exc:
        print(f"mcbiofet: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
