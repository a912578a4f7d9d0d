"""Command-line front end: ``python -m theta_lab <subcommand> [flags]``.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or config
error, 3 a numerical budget was exhausted.
"""
from __future__ import annotations

import argparse
import math
import sys

from .checks import RunConfig, Session, full_report, law_checks, selftest_checks
from .eisenstein import ClosedFormParams, ip_closed, ip_direct, norm_from_residue
from .errors import ReductionFailure, ToleranceNotMet
from .report import VerificationReport, emit_report

SUBCOMMANDS = ("selftest", "law-check", "xavg", "ip", "residues", "norm", "full-report")
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _floats(text):
    return tuple(float(v) for v in str(text).split(",") if v.strip())


def _ints(text):
    return tuple(int(v) for v in str(text).split(",") if v.strip())


def _c_value(text):
    text = str(text).strip()
    return "auto" if text == "auto" else float(text)


def _threads(text):
    text = str(text).strip()
    return "auto" if text == "auto" else int(text)


# config key -> (RunConfig field, parser)
_KEYS = {
    "p": ("p", _ints), "s": ("s", _floats), "Y": ("Y", float), "tol-tile": ("tol_tile", float),
    "tol-ip": ("tol_ip", float), "grid": ("grid", _floats), "c": ("c", _c_value),
    "threads": ("threads", _threads), "seed": ("seed", int), "ip-p": ("ip_p", _ints),
}


def read_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, val = (part.strip() for part in line.split("=", 1))
        key = key.replace("_", "-")
        if key == "out":
            values["out"] = val
            continue
        if key not in _KEYS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        field_name, parse = _KEYS[key]
        try:
            values[field_name] = parse(val)
        except ValueError as exc:
            raise ConfigError(f"{path}:{n}: bad value for {key}: {val!r}") from exc
    return values


def build_parser():
    parser = argparse.ArgumentParser(prog="theta_lab", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="flat key = value file; flags override it")
    parser.add_argument("--p", type=_ints, help="comma-separated odd primes")
    parser.add_argument("--s", type=_floats, help="comma-separated real s values for the Rankin integral")
    parser.add_argument("--Y", type=float, help="truncation height for tile integrals")
    parser.add_argument("--tol-tile", type=float, dest="tol_tile")
    parser.add_argument("--tol-ip", type=float, dest="tol_ip")
    parser.add_argument("--grid", type=_floats, help="y grid for the Fourier-constant fit")
    parser.add_argument("--c", type=_c_value, help="Fourier constant: 'auto' (fitted) or a number")
    parser.add_argument("--out", help="write the report (JSON) here")
    parser.add_argument("--threads", type=_threads, help="worker count or 'auto' (THETA_LAB_THREADS wins)")
    parser.add_argument("--seed", type=int)
    return parser


def make_config(args) -> tuple:
    values = read_config_file(args.config) if args.config else {}
    out = values.pop("out", None)
    for _, (field_name, _) in _KEYS.items():
        flag = getattr(args, field_name, None)
        if flag is not None:
            values[field_name] = flag
    if args.out is not None:
        out = args.out
    try:
        cfg = RunConfig(**values)
        cfg.quad()
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg, out


def _print_checks(checks, stream):
    for c in checks:
        print(c.line(), file=stream)


def _residues_table(session, stream):
    table = session.residue_table()
    for p, row in table.items():
        print(f"p = {p}", file=stream)
        for name, val in row.items():
            print(f"  {name:<24} {val:.15g}", file=stream)
    return table


def run(subcommand, config: RunConfig, out=None, stream=None) -> int:
    stream = stream or sys.stdout
    session = Session(config)
    report = VerificationReport(config_echo=config.echo())
    try:
        if subcommand == "selftest":
            report.check_results = selftest_checks(session)
        elif subcommand == "law-check":
            report.check_results = law_checks(session)
        elif subcommand == "xavg":
            check = session.fourier_constant()
            report.check_results = [check]
            report.fitted_c = check.details["fitted_c"]
            print(f"fitted c = {report.fitted_c:.15g}  residual = {check.details['fit_residual']:.3g}", file=stream)
        elif subcommand == "ip":
            check = session.rankin_integral()
            report.check_results = [check]
            for row in check.details["rows"]:
                print(f"p={row['p']} s={row['s']:g}  direct={row['direct']:.12g}  "
                      f"closed={row['closed']:.12g}  rel={row['rel_error']:.2e}", file=stream)
        elif subcommand == "residues":
            report.check_results = [session.residue_machinery(), session.eisenstein_residue()]
            report.fitted_c = session.fit().c
            report.residue_candidates = _residues_table(session, stream)
        elif subcommand == "norm":
            check = session.norm_pipelines()
            report.check_results = [check]
            report.norm_direct = check.details["norm_direct"]
            report.norm_from_residue = check.details["norm_from_residue"]
            report.final_ratio_to_pi = report.norm_direct / math.pi
            print(f"norm_direct = {report.norm_direct:.15g} = {report.final_ratio_to_pi:.12g} pi", file=stream)
            for p, v in report.norm_from_residue.items():
                print(f"norm_from_residue(p={p}) = {v:.15g} = {v / math.pi:.12g} pi", file=stream)
        elif subcommand == "full-report":
            report = full_report(session)
            out = out or "report.json"
            print(f"final ratio to pi = {report.final_ratio_to_pi:.12g}; claimed ratio "
                  f"{report.paper_claim_ratio:g}; agreement = {report.agreement_with_paper}", file=stream)
            _residues_table(session, stream)
        else:
            raise ConfigError(f"unknown subcommand {subcommand!r}")
    except (ToleranceNotMet, ReductionFailure) as exc:
        print(f"numerical budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _print_checks(report.check_results, stream)
    if out:
        emit_report(report, out)
        print(f"report written to {out}", file=stream)
    return report.exit_code()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, out = make_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(args.subcommand, cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
