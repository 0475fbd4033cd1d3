"""Command-line front end: single-point evaluations, sweeps and the self-test."""

from __future__ import annotations

import argparse
import json
import sys

from .config import QUANTITIES, ConfigError, RunConfig, config_from_dict, parse_config
from .errors import DomainError, EOCombError, SingularSystemError
from .sweep import default_jobs, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_NUMERICAL, EXIT_SELFTEST = 0, 1, 2, 3, 4

SUBCOMMAND_QUANTITIES = {
    "spectra": ["n_out", "bandwidth"],
    "cm": ["cm"],
    "squeeze": ["squeezing"],
    "metrics": ["metrics"],
    "fidelity": ["fidelity"],
    "densecode": ["capacity"],
}


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _load_config(args) -> RunConfig:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    else:
        data = {"model": args.model or "three_mode"}
    if args.model:
        data["model"] = args.model
    params = dict(data.get("parameters", {}))
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        params[key.strip()] = _parse_value(value.strip())
    data["parameters"] = params
    if args.command in SUBCOMMAND_QUANTITIES:
        data["quantities"] = SUBCOMMAND_QUANTITIES[args.command]
    if args.quantity:
        data["quantities"] = list(args.quantity)
    if args.format:
        data.setdefault("output", {})["format"] = args.format
    if args.out:
        data.setdefault("output", {})["path"] = args.out
    return config_from_dict(data)


def _classify(table, n_axes: int) -> int:
    """0 when at least one grid point produced a value, otherwise physics (2) or numerical (3)."""
    for row in table.rows:
        if any(x == x for x in row[n_axes:-1]):
            return EXIT_OK
    flags = table.flags
    if flags and all("numerical" in f for f in flags):
        return EXIT_NUMERICAL
    return EXIT_PHYSICS


def _run(args) -> int:
    config = _load_config(args)
    table = run_sweep(config, jobs=args.jobs)
    text = table.render(config.output["format"])
    path = config.output["path"]
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    code = _classify(table, len(config.sweep))
    if code != EXIT_OK:
        print(f"eocomb: no grid point could be evaluated ({table.flags[0]})", file=sys.stderr)
    return code


def _selftest(args) -> int:
    from .selftest import run_selftest

    report = run_selftest(include_slow=not args.quick)
    text = report.to_text() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eocomb", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*SUBCOMMAND_QUANTITIES, "sweep"):
        p = sub.add_parser(name, help=f"evaluate {name}" if name != "sweep" else "run a parameter sweep")
        p.add_argument("--config", metavar="PATH", help="JSON run configuration")
        p.add_argument("--model", choices=("three_mode", "comb"), help="override the config model")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a parameter (repeatable)")
        p.add_argument("--out", metavar="PATH", help="write the table here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--jobs", type=int, default=None,
                       help=f"worker processes (default {default_jobs()})")
        if name == "sweep":
            p.add_argument("--quantity", action="append", choices=QUANTITIES,
                           help="quantity group to tabulate (repeatable; default from config)")
    p = sub.add_parser("selftest", help="run the oracle batteries")
    p.add_argument("--out", metavar="PATH", help="also write the report here")
    p.add_argument("--quick", action="store_true", help="skip the phase-space integration battery")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "quantity"):
        args.quantity = None
    try:
        if args.command == "selftest":
            return _selftest(args)
        return _run(args)
    except ConfigError as exc:
        print(f"eocomb: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularSystemError as exc:
        print(f"eocomb: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DomainError, EOCombError) as exc:
        print(f"eocomb: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
