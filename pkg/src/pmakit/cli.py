"""Command line front end.

Three subcommands: ``bench`` runs the configured benchmark and writes
result files, ``sweep`` varies one fused-ensemble parameter across a
list of values, and ``show`` pretty-prints result files from an output
directory.  Exit codes: 0 success, 1 configuration problem, 2 data
problem, 3 experiment failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

from .bench import (
    METHODS,
    SWEEP_AXES,
    ExperimentConfig,
    emit_results,
    run_experiment,
    run_sweep,
)
from .errors import (
    ConfigError,
    DataError,
    ExperimentError,
    InvalidInputError,
    PmaError,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags, which collides with the
    # data-error code; route usage problems through ConfigError instead
    def error(self, message):
        raise ConfigError(f"{message} (see '{self.prog} --help')")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="experiment config (JSON)")
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override master seed")
    p.add_argument("--repeats", type=int, default=None, help="override repeat count")
    p.add_argument(
        "--parallel", choices=("on", "off"), default=None,
        help="run repeats in a thread pool",
    )
    p.add_argument(
        "--methods", default=None,
        help=f"comma-separated subset of {','.join(METHODS)}",
    )
    p.add_argument(
        "--format", choices=("csv", "json"), default="csv",
        help="accuracy table format",
    )


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="pmakit",
        description="dimension-reduction benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    bench = sub.add_parser(
        "bench", help="run the configured benchmark", parents=[], add_help=True
    )
    _add_common(bench)

    sweep = sub.add_parser("sweep", help="vary one fused-ensemble parameter")
    _add_common(sweep)
    sweep.add_argument(
        "--axis", required=True, choices=SWEEP_AXES,
        help="which parameter to sweep",
    )
    sweep.add_argument(
        "--values", required=True,
        help="comma-separated positive integers",
    )

    show = sub.add_parser("show", help="pretty-print result files")
    show.add_argument("--out", default="results", help="directory to read")
    return parser


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_file(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.repeats is not None:
        cfg = replace(cfg, repeats=args.repeats)
    if args.parallel is not None:
        cfg = replace(cfg, parallel=(args.parallel == "on"))
    if args.methods is not None:
        names = tuple(m.strip() for m in args.methods.split(",") if m.strip())
        cfg = replace(cfg, methods=names)
    cfg.validate()
    return cfg


def _print_csv_aligned(path: Path) -> None:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return
    widths = [
        max(len(r[i]) for r in rows if i < len(r))
        for i in range(max(len(r) for r in rows))
    ]
    for r in rows:
        print("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(r)).rstrip())


def _cmd_show(out_dir: str) -> int:
    out = Path(out_dir)
    if not out.is_dir():
        raise DataError(f"no such results directory: {out}")
    found = False
    for stem, title in (
        ("train_accuracy", "train accuracy (calibration)"),
        ("test_accuracy", "test accuracy (prediction)"),
    ):
        c, j = out / f"{stem}.csv", out / f"{stem}.json"
        if c.exists():
            print(f"{title}:")
            _print_csv_aligned(c)
            print()
            found = True
        elif j.exists():
            print(f"{title}:")
            print(j.read_text().rstrip())
            print()
            found = True
    for path in sorted(out.glob("sweep_*.csv")):
        print(f"{path.name}:")
        _print_csv_aligned(path)
        print()
        found = True
    meta_path = out / "metadata.json"
    if meta_path.exists():
        meta = json.loads(meta_path.read_text())
        cfg = meta.get("config", {})
        print(
            f"seed {cfg.get('seed')}, {cfg.get('repeats')} repeats, "
            f"{len(cfg.get('datasets', []))} datasets, "
            f"{len(meta.get('warnings', []))} warnings"
        )
        found = True
    if not found:
        raise DataError(f"no result files in {out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.error("a command is required: bench, sweep, or show")
        if args.command == "show":
            return _cmd_show(args.out)
        cfg = _load_config(args)
        if args.command == "bench":
            result = run_experiment(cfg)
            paths = emit_results(result, args.out, args.format)
        else:
            try:
                values = [int(v) for v in args.values.split(",") if v.strip()]
            except ValueError as e:
                raise ConfigError(f"bad --values: {e}") from None
            results = run_sweep(cfg, args.axis, values)
            paths = emit_results(results, args.out, args.format)
        for p in paths:
            print(f"wrote {p}")
        return 0
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (DataError, InvalidInputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except PmaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
