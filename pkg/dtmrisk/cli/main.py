"""dtmrisk command line: measure, sweep, fit, moment and oracle subcommands.

Exit codes: 0 success, 1 oracle mismatch, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

from dtmrisk.config import settings
from dtmrisk.distribution.elliptical import EllipticalDistribution
from dtmrisk.estimation.mle import fit_normal_mle
from dtmrisk.exceptions import DTMError, DomainError
from dtmrisk.generators.families import FamilyKind, make_family
from dtmrisk.ingestion.base import ReturnSource
from dtmrisk.ingestion.csv_loader import CsvReturnSource
from dtmrisk.ingestion.demo_data import SEGMENT_KEYS, DemoReturnSource, segment_parameters
from dtmrisk.logging_config import setup_logging
from dtmrisk.measures.engine import MEASURE_ORDERS, dte, dtm, risk_report
from dtmrisk.workers.sweep import (
    SweepRunner,
    fixed_width_schedule,
    parse_windows,
    symmetric_schedule,
)
from dtmrisk.workers.verification import compare_with_oracle

logger = logging.getLogger("dtmrisk.cli")

EXIT_OK = 0
EXIT_ORACLE_MISMATCH = 1
EXIT_USAGE = 2

FAMILY_CHOICES = [k.value for k in FamilyKind if k is not FamilyKind.CUSTOM]
SWEEP_COLUMNS = ["p", "q", "dte", "dtv", "dts", "dtk"]


# ─── Formatting ─────────────────────────────────────────────────


def _sci(value: float) -> str:
    return f"{value:.{settings.output_digits - 1}e}"


def _number(value: float | None) -> float | None:
    """Round to the configured significant digits; infinities become null."""
    if value is None or not math.isfinite(value):
        return None
    return float(_sci(value))


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, output: str | None) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", output)


# ─── Argument handling ──────────────────────────────────────────


def _measure_list(text: str) -> list[str]:
    measures = [m.strip().lower() for m in text.split(",") if m.strip()]
    unknown = [m for m in measures if m not in MEASURE_ORDERS]
    if unknown or not measures:
        raise argparse.ArgumentTypeError(
            f"measures must be a subset of {','.join(MEASURE_ORDERS)}, got '{text}'"
        )
    return measures


def _order_list(text: str) -> list[int]:
    try:
        orders = [int(n) for n in text.split(",") if n.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"orders must be integers, got '{text}'") from None
    if any(n < 2 for n in orders):
        raise argparse.ArgumentTypeError("dtm orders must be >= 2")
    return orders


def _add_distribution_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", choices=FAMILY_CHOICES, default="normal")
    parser.add_argument("--mu", type=float, default=None, help="location (default 0)")
    parser.add_argument("--sigma", type=float, default=None, help="scale (default 1)")
    parser.add_argument("--dof", type=float, default=None, help="student-t degrees of freedom m")
    parser.add_argument("--shape", type=float, default=None, help="pearson-vii shape t")
    parser.add_argument(
        "--segment",
        choices=sorted(SEGMENT_KEYS),
        default=None,
        help="take mu and sigma from the reference LSE segment fit",
    )
    parser.add_argument("--output", default=None, help="write to this file instead of stdout")


def _add_window_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=float, default=0.0, help="lower quantile level")
    parser.add_argument("--q", type=float, default=1.0, help="upper quantile level")


def _distribution(args: argparse.Namespace) -> EllipticalDistribution:
    family = make_family(args.family, dof=args.dof, shape=args.shape)
    mu, sigma = 0.0, 1.0
    if args.segment:
        mu, sigma = segment_parameters(args.segment)
    if args.mu is not None:
        mu = args.mu
    if args.sigma is not None:
        sigma = args.sigma
    return EllipticalDistribution(mu=mu, sigma=sigma, family=family)


# ─── Subcommands ────────────────────────────────────────────────


def cmd_measure(args: argparse.Namespace) -> int:
    dist = _distribution(args)
    window = dist.window(args.p, args.q)
    report = risk_report(dist, window, measures=args.measures, dtm_orders=args.dtm_orders)

    payload: dict = {"family": report.family}
    for key in ("mu", "sigma", "p", "q", "x_p", "x_q"):
        payload[key] = _number(getattr(report, key))
    for key in args.measures:
        payload[key] = _number(getattr(report, key))
    for n, value in sorted(report.dtm.items()):
        payload[f"dtm{n}"] = _number(value)
    payload["warnings"] = report.warnings
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    dist = _distribution(args)
    dist.family.require_moment(max(MEASURE_ORDERS.values()))

    if args.windows:
        windows = parse_windows(args.windows)
    elif args.schedule == "fixed-width":
        windows = fixed_width_schedule(args.width)
    else:
        windows = symmetric_schedule()

    rows = SweepRunner(max_workers=args.workers).run(dist, windows)
    with_errors = any(row.error for row in rows)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS + (["error"] if with_errors else []))
    for row in rows:
        cells = [_sci(row.p), _sci(row.q)]
        if row.report is not None:
            cells += [_sci(getattr(row.report, key)) for key in SWEEP_COLUMNS[2:]]
        else:
            cells += [""] * (len(SWEEP_COLUMNS) - 2)
        if with_errors:
            cells.append(row.error or "")
        writer.writerow(cells)

    _emit(buffer.getvalue(), args.output)
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    source: ReturnSource
    if args.input:
        source = CsvReturnSource(args.input)
    elif args.demo:
        source = DemoReturnSource(n_obs=args.demo, seed=args.seed)
    else:
        raise DomainError("fit needs --input PATH or --demo N")

    summary = fit_normal_mle(source.load()).to_summary()
    payload = {
        "names": summary.names,
        "n_obs": summary.n_obs,
        "mean": [_number(v) for v in summary.mean],
        "covariance": [[_number(v) for v in row] for row in summary.covariance],
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_moment(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise DomainError(f"--n must be >= 1, got {args.n}")
    dist = _distribution(args)
    dist.family.require_moment(args.n)
    window = dist.window(args.p, args.q)
    value = dte(dist, window) if args.n == 1 else dtm(dist, window, args.n)
    _emit(_sci(value) + "\n", args.output)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    dist = _distribution(args)
    window = dist.window(args.p, args.q)
    if args.n is None:
        summary = compare_with_oracle(dist, window, measures=args.measures)
    elif args.n == 1:
        summary = compare_with_oracle(dist, window, measures=["dte"])
    elif args.n >= 2:
        summary = compare_with_oracle(dist, window, measures=[], dtm_orders=[args.n])
    else:
        raise DomainError(f"--n must be >= 1, got {args.n}")

    payload = {
        "family": summary.family,
        "p": _number(summary.p),
        "q": _number(summary.q),
        "tolerance": summary.tolerance,
        "comparisons": [
            {
                "measure": c.measure,
                "closed_form": _number(c.closed_form),
                "oracle": _number(c.oracle),
                "relative_error": _number(c.relative_error),
                "warnings": c.warnings,
            }
            for c in summary.comparisons
        ],
        "max_relative_error": _number(summary.max_relative_error),
        "passed": summary.passed,
    }
    _emit_json(payload, args.output)
    return EXIT_OK if summary.passed else EXIT_ORACLE_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtmrisk",
        description="Doubly truncated moment risk measures for elliptical distributions.",
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    measure = sub.add_parser("measure", help="DTE, DTV, DTS, DTK on one window (JSON)")
    _add_distribution_args(measure)
    _add_window_args(measure)
    measure.add_argument("--measures", type=_measure_list, default=list(MEASURE_ORDERS))
    measure.add_argument("--dtm-orders", type=_order_list, default=[])
    measure.set_defaults(handler=cmd_measure)

    sweep = sub.add_parser("sweep", help="measures over a window schedule (CSV)")
    _add_distribution_args(sweep)
    sweep.add_argument("--schedule", choices=["symmetric", "fixed-width"], default="symmetric")
    sweep.add_argument("--width", type=float, default=0.65, help="fixed-width window mass")
    sweep.add_argument("--windows", default=None, help="explicit list 'p:q,p:q,...'")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.set_defaults(handler=cmd_sweep)

    fit = sub.add_parser("fit", help="normal MLE of return columns (JSON)")
    fit.add_argument("--input", default=None, help="CSV of returns")
    fit.add_argument("--demo", type=int, default=None, help="fit N synthetic reference draws")
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--output", default=None)
    fit.set_defaults(handler=cmd_fit)

    moment = sub.add_parser("moment", help="n-th DTM, or DTE for n = 1")
    _add_distribution_args(moment)
    _add_window_args(moment)
    moment.add_argument("--n", type=int, required=True)
    moment.set_defaults(handler=cmd_moment)

    oracle = sub.add_parser("oracle", help="closed form vs quadrature oracle (JSON)")
    _add_distribution_args(oracle)
    _add_window_args(oracle)
    oracle.add_argument("--measures", type=_measure_list, default=list(MEASURE_ORDERS))
    oracle.add_argument("--n", type=int, default=None, help="compare one moment order instead")
    oracle.set_defaults(handler=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging("DEBUG" if args.verbose else settings.log_level)

    try:
        return args.handler(args)
    except DTMError as exc:
        logger.debug(f"{args.command} failed: {exc!r}")
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
