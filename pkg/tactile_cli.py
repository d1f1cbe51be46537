#!/usr/bin/env python3
"""
TactileSensePro command line.

Usage:
    python tactile_cli.py simulate datasets/contact_sequence.csv -o stream.txt
    python tactile_cli.py collect -o protocol.csv
    python tactile_cli.py thresholds
    python tactile_cli.py calibrate protocol.csv -o model.json --orders 1-5
    python tactile_cli.py estimate model.json stream.txt -o frames.txt
    python tactile_cli.py report frames.txt --truth datasets/contact_sequence.csv

Exit codes: 0 success, 1 usage, 2 data/parse, 3 numerical (singular fit).
"""

import argparse
import logging
import sys
from typing import List, Optional

from scripts.calibration_utils import format_fit_report
from scripts.command_utils import (
    cmd_calibrate,
    cmd_collect,
    cmd_estimate,
    cmd_report,
    cmd_simulate,
    cmd_thresholds,
)
from scripts.config_utils import load_config, parse_orders
from scripts.exceptions import TactileError

logger = logging.getLogger("tactile_cli")


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the usage code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="KEY=value config file (defaults if omitted)")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--gain", type=float, help="amplifier gain (e.g. 22 or 41.36)")
    common.add_argument("--window", type=int, help="moving-average window")
    common.add_argument("--orders", help="polynomial orders, e.g. 1-5 or 1,3")
    common.add_argument("--repeats", type=int, help="cross-validation repeats")
    common.add_argument("--strict-paper-cv", action="store_true",
                        help="use only fold 0 as the test fold")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="warnings only")

    parser = _Parser(description="Dual-layer soft tactile sensor toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="scenario → sample stream")
    p.add_argument("scenario")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("collect", parents=[common], help="weight protocol → dataset CSV")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--quadrant", type=int, default=1, choices=[1, 2, 3, 4])

    p = sub.add_parser("thresholds", parents=[common], help="weight sweep → element thresholds")
    p.add_argument("--weights", help="comma-separated gram-weights (protocol set if omitted)")
    p.add_argument("-o", "--output", help="CSV file (stdout if omitted)")

    p = sub.add_parser("calibrate", parents=[common], help="dataset → model file")
    p.add_argument("dataset")
    p.add_argument("-o", "--output", required=True, help="model file to write")
    p.add_argument("--report-out", help="also write the per-order RMSE table here")

    p = sub.add_parser("estimate", parents=[common], help="model + stream → frames")
    p.add_argument("model")
    p.add_argument("stream", help="sample stream file, or - for stdin")
    p.add_argument("-o", "--output", help="frame file (stdout if omitted)")

    p = sub.add_parser("report", parents=[common], help="frames → text summary")
    p.add_argument("frames")
    p.add_argument("--truth", help="scenario CSV used as ground truth")
    p.add_argument("--rmse", action="store_true", help="require an RMSE (needs --truth)")
    p.add_argument("-o", "--output", help="summary file (stdout if omitted)")
    return parser


def _configure_logging(args) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def run(args) -> None:
    config = load_config(args.config).with_overrides(
        seed=args.seed,
        gain=args.gain,
        window=args.window,
        orders=parse_orders(args.orders) if args.orders else None,
        repeats=args.repeats,
        strict_paper_cv=args.strict_paper_cv,
    )

    if args.command == "simulate":
        cmd_simulate(config, args.scenario, args.output)
    elif args.command == "collect":
        cmd_collect(config, args.output, quadrant=args.quadrant)
    elif args.command == "thresholds":
        weights = [float(w) for w in args.weights.split(",")] if args.weights else None
        table = cmd_thresholds(config, args.output, weights)
        if not args.output:
            sys.stdout.write(table.to_csv(index=False, float_format="%.6g"))
    elif args.command == "calibrate":
        report = cmd_calibrate(config, args.dataset, args.output, args.report_out)
        sys.stdout.write(format_fit_report(report))
    elif args.command == "estimate":
        if args.output:
            with open(args.output, "w", newline="\n") as out:
                cmd_estimate(config, args.model, args.stream, out)
        else:
            cmd_estimate(config, args.model, args.stream)
    elif args.command == "report":
        text = cmd_report(config, args.frames, args.truth, require_rmse=args.rmse)
        if args.output:
            with open(args.output, "w", newline="\n") as out:
                out.write(text)
        else:
            sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _configure_logging(args)
    try:
        run(args)
    except TactileError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return 2
    except ValueError as exc:
        logger.error("bad input: %s", exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
