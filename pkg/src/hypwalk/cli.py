"""Command-line interface.

    hypwalk run <config.toml> --out <dir> [--threads N] [--seed SEED]
    hypwalk validate <config.toml>
    hypwalk replay <records.jsonl>

Exit codes: 0 success, 1 error (bad config, I/O, replay mismatch),
2 incomplete run (a trial exceeded its budget; partial report written).

Seed resolution for `run`: --seed override, else experiment.master_seed
from the config, else the HYPWALK_SEED environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .errors import SchemaError
from .experiments import parse_config, replay, run_experiment, write_report

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCOMPLETE = 2


def _read_config(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _print_schema_error(exc: SchemaError):
    print("invalid config:", file=sys.stderr)
    for key, reason in exc.problems:
        print(f"  {key}: {reason}", file=sys.stderr)


def _resolve_seed(config, override):
    if override is not None:
        return override, "cli-override"
    if config.master_seed is not None:
        return config.master_seed, "config"
    env = os.environ.get("HYPWALK_SEED")
    if env is not None:
        try:
            seed = int(env)
            if seed < 0:
                raise ValueError
        except ValueError:
            raise SchemaError([("HYPWALK_SEED",
                                "must be a nonnegative integer")])
        return seed, "env"
    raise SchemaError([("experiment.master_seed",
                        "no seed: set it in the config, pass --seed, or "
                        "export HYPWALK_SEED")])


def cmd_run(args) -> int:
    try:
        config = _read_config(args.config)
        seed, source = _resolve_seed(config, args.seed)
    except SchemaError as exc:
        _print_schema_error(exc)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if seed != config.master_seed:
        config = type(config)(
            experiment_id=config.experiment_id, kind=config.kind,
            master_seed=seed, model=config.model,
            distribution=config.distribution, n_grid=config.n_grid,
            trials=config.trials, params=config.params, raw=config.raw)
    report = run_experiment(config, threads=args.threads, seed_source=source)
    paths = write_report(report, args.out)
    for p in paths:
        print(p)
    if not report.complete:
        print(f"incomplete: {report.error}", file=sys.stderr)
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        config = _read_config(args.config)
    except SchemaError as exc:
        _print_schema_error(exc)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"ok: {config.experiment_id} ({config.kind}), "
          f"n_grid={list(config.n_grid)}, trials={config.trials}")
    return EXIT_OK


def cmd_replay(args) -> int:
    try:
        ok, diffs = replay(args.records)
    except (OSError, ValueError, KeyError, SchemaError) as exc:
        if isinstance(exc, SchemaError):
            _print_schema_error(exc)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if ok:
        print("replay ok: aggregates match the stored report")
        return EXIT_OK
    for d in diffs:
        print(d, file=sys.stderr)
    return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypwalk",
        description="deterministic random-walk experiments on free groups "
                    "and free products")
    parser.add_argument("--version", action="version",
                        version=f"hypwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config", help="path to a TOML experiment config")
    p_run.add_argument("--out", required=True,
                       help="output directory for records/summary/report")
    p_run.add_argument("--threads", type=int, default=1,
                       help="worker processes (records are identical for "
                            "any value)")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override the master seed")
    p_run.set_defaults(func=cmd_run)

    p_val = sub.add_parser("validate", help="validate a config and exit")
    p_val.add_argument("config", help="path to a TOML experiment config")
    p_val.set_defaults(func=cmd_validate)

    p_rep = sub.add_parser("replay",
                           help="recompute aggregates from records.jsonl "
                                "and compare with report.json")
    p_rep.add_argument("records", help="path to records.jsonl")
    p_rep.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
