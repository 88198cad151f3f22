"""Command line front end for the Fourier experiments.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from . import expharness as eh
from . import selftest
from .errors import ContractViolation, InvariantViolation, NumericalFailure

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_INVARIANT = 0, 2, 3, 4

COMMANDS = ("noise-table", "bias-table", "lambda-sweep", "snr-lambdaopt", "tradeoff-curve", "selftest")
LOG_SNRS = (0.0, 10.0, 20.0, 30.0, math.inf)

# Per-command defaults for the list-valued options (lambda grid name, SNRs).
DEFAULTS = {
    "noise-table": ("paper", eh.TABLE_SNRS),
    "bias-table": ("paper", eh.TABLE_SNRS),
    "lambda-sweep": ("log", (20.0,)),
    "snr-lambdaopt": ("log", LOG_SNRS),
    "tradeoff-curve": ("paper", (20.0,)),
}
LIST_KEYS = {"m", "lambda", "snr"}
SCALAR_KEYS = {"n", "trials", "seed", "solver", "out", "format", "workers"}


class ConfigError(ContractViolation):
    pass


def _parser():
    p = argparse.ArgumentParser(prog="framerecon", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="file of 'key = value' lines; flags take precedence")
        s.add_argument("--seed", type=int)
        s.add_argument("--out", help="output path (default: stdout)")
        s.add_argument("-v", "--verbose", action="store_true")
        if name == "selftest":
            s.add_argument("--trials", type=int, help="number of random frame pairs (default 200)")
            continue
        s.add_argument("--n", type=int)
        s.add_argument("--m", action="append", type=int)
        s.add_argument("--lambda", dest="lambda", action="append",
                       help="grid value, repeatable, or grid:paper / grid:log")
        s.add_argument("--snr", action="append", help="SNR in dB, repeatable; 'inf' allowed")
        s.add_argument("--trials", type=int)
        s.add_argument("--solver", choices=("direct", "cg"))
        s.add_argument("--format", choices=("csv", "json"))
        s.add_argument("--workers", type=int)
    return p


def read_config(path):
    """Parse ``key = value`` lines; list keys may repeat or hold comma-separated values."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lstrip("-").replace("_", "-")
            if key in LIST_KEYS:
                values.setdefault(key, []).extend(v.strip() for v in value.split(",") if v.strip())
            elif key in SCALAR_KEYS:
                values[key] = value
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def _number(text, kind, what):
    try:
        return kind(text)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid {what}: {text!r}") from None


def _lambda_grid(items, default):
    items = items or [f"grid:{default}"]
    if len(items) == 1 and items[0].startswith("grid:"):
        name = items[0][5:]
        grids = {"paper": eh.TABLE_GRID, "log": eh.LOG_GRID}
        if name not in grids:
            raise ConfigError(f"unknown lambda grid {name!r} (use paper or log)")
        return grids[name], name
    return tuple(_number(x, float, "lambda") for x in items), "custom"


def _merge(args):
    """Flags over config file over defaults."""
    merged = read_config(args.config) if args.config else {}
    for key in LIST_KEYS | SCALAR_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = [str(v) for v in flag] if key in LIST_KEYS else str(flag)
    return merged


def build_config(command, merged):
    grid_default, snr_default = DEFAULTS[command]
    grid, grid_name = _lambda_grid(merged.get("lambda"), grid_default)
    snrs = tuple(_number(s, float, "snr") for s in merged["snr"]) if "snr" in merged else snr_default
    solver = merged.get("solver", "direct")
    if solver not in ("direct", "cg"):
        raise ConfigError(f"unknown solver {solver!r}")
    fmt = merged.get("format", "csv")
    config = eh.ExperimentConfig(
        n=_number(merged.get("n", 90), int, "n"),
        m_list=tuple(_number(m, int, "m") for m in merged.get("m", [10])),
        lambda_grid=grid,
        snr_list=snrs,
        trials=_number(merged.get("trials", 1000), int, "trials"),
        master_seed=_number(merged.get("seed", 0), int, "seed"),
        mode="bias" if command == "bias-table" else "noise",
        output_format=fmt,
        solver=solver,
        workers=_number(merged.get("workers", 1), int, "workers"),
    )
    return config, grid_name


def _metadata(command, config, grid_name, rows):
    failed = {}
    for row in rows:
        failed[str(row.m)] = row.failed_trials
    return {
        "command": command,
        "n": config.n,
        "m": list(config.m_list),
        "lambda_grid": grid_name,
        "lambda_values": list(config.lambda_grid),
        "snr_db": [_json_float(s) for s in config.snr_list],
        "trials": config.trials,
        "seed": config.master_seed,
        "solver": config.solver,
        "mode": config.mode,
        "failed_trials": failed,
    }


def _json_float(x):
    return "inf" if math.isinf(x) else x


def run_command(command, config):
    if command == "noise-table":
        return eh.run_noise_table(config)
    if command == "bias-table":
        return eh.run_bias_table(config)
    if command == "lambda-sweep":
        return eh.run_lambda_sweep(config, config.snr_list[0], config.lambda_grid)
    if command == "snr-lambdaopt":
        return eh.run_snr_lambdaopt(config)
    return eh.run_tradeoff_curve(config, config.snr_list[0])


def _emit(rows, config, metadata, out):
    dest = out if out else sys.stdout
    if config.output_format == "json":
        eh.emit_json(rows, dest, metadata=metadata)
    else:
        eh.emit_csv(rows, dest, kind="lambdaopt" if metadata["command"] == "snr-lambdaopt" else "aggregate")


def _selftest(args):
    merged = read_config(args.config) if args.config else {}
    trials = args.trials if args.trials is not None else _number(merged.get("trials", 200), int, "trials")
    seed = args.seed if args.seed is not None else _number(merged.get("seed", 0), int, "seed")
    checks = selftest.run(trials, seed)
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name}: worst {c.worst:.3e} (limit {c.limit:.0e})" for c in checks]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_INVARIANT


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "selftest":
            return _selftest(args)
        config, grid_name = build_config(args.command, _merge(args))
        rows = run_command(args.command, config)
        _emit(rows, config, _metadata(args.command, config, grid_name, rows), args.out)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        print(json.dumps(exc.dump, default=str, indent=1), file=sys.stderr)
        return EXIT_INVARIANT
    except (ContractViolation, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
