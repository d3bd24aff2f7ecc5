"""
Command-line entry point: `cstre {scan,threshold,trace,tables,check,convert}`.

Exit codes: 0 success, 1 failed check or table residual, 2 invalid input,
3 numerical failure. Errors are reported as one stderr line,
`error: kind=<ExceptionName> message=<text>`.
"""

import argparse
import csv
import io
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from cstre import env, utils
from cstre.checks import format_report, run_checks
from cstre.schema import (
    CstreError,
    DimensionMismatchError,
    FamilyDomainError,
    InvalidCutError,
    InvalidParameterError,
    ScanSpec,
    StateFileError,
    ThresholdResult,
    UnsupportedCombinationError,
)
from cstre.scan import rows_to_csv, run_scan
from cstre.separability import CRITERION_NAMES, convergence_trace, criterion_for, threshold
from cstre.state_factory import FAMILY_CHOICES, PURE_STATE_CHOICES, build_family, resolve_cut
from cstre.state_io import load_state, save_state
from cstre.tables import build_tables_report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL = 3

INPUT_ERRORS = (
    InvalidCutError,
    InvalidParameterError,
    FamilyDomainError,
    StateFileError,
    UnsupportedCombinationError,
    DimensionMismatchError,
)

THRESHOLD_COLUMNS = (
    "family",
    "cut",
    "criterion",
    "q",
    "crossing_found",
    "x_star",
    "bracket_lo",
    "bracket_hi",
    "tol",
    "iterations",
)

NO_CROSSING = "no_crossing"


class _Parser(argparse.ArgumentParser):
    """Usage errors surface as InvalidParameterError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise InvalidParameterError(message)


def parse_q_values(text: str) -> list[float]:
    """'2', '1.5,2,5' or 'inf'."""
    values = []
    for part in text.split(","):
        token = part.strip().lower()
        if not token:
            continue
        try:
            value = math.inf if token in ("inf", "infinity") else float(token)
        except ValueError as e:
            raise InvalidParameterError(f"bad q value '{part}'") from e
        if math.isnan(value):
            raise InvalidParameterError("q must not be NaN")
        values.append(value)
    if not values:
        raise InvalidParameterError(f"no q values in '{text}'")
    return values


def parse_x_grid(text: str) -> tuple[float, float, float]:
    """'start:stop:step'."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidParameterError(f"x grid '{text}' is not start:stop:step")
    try:
        start, stop, step = (float(part) for part in parts)
    except ValueError as e:
        raise InvalidParameterError(f"bad number in x grid '{text}'") from e
    return start, stop, step


def parse_bracket(text: str) -> tuple[float, float]:
    """'lo:hi'."""
    parts = text.split(":")
    if len(parts) != 2:
        raise InvalidParameterError(f"bracket '{text}' is not lo:hi")
    try:
        lo, hi = (float(part) for part in parts)
    except ValueError as e:
        raise InvalidParameterError(f"bad number in bracket '{text}'") from e
    return lo, hi


def _criteria(text: str) -> list[str]:
    names = [part.strip().lower() for part in text.split(",") if part.strip()]
    unknown = [name for name in names if name not in CRITERION_NAMES]
    if unknown or not names:
        raise InvalidParameterError(f"unknown criterion {unknown or text!r}, expected {CRITERION_NAMES}")
    return names


def _add_family_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", choices=FAMILY_CHOICES, type=str.lower)
    parser.add_argument("--n", type=int, help="number of qubits or qudits")
    parser.add_argument("--d", type=int, help="local dimension (qudit family)")
    parser.add_argument("--psi", choices=PURE_STATE_CHOICES, type=str.lower, help="named pure part")
    parser.add_argument("--custom-state", help="pure-state JSON file for custom families")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cstre", description="Entanglement detection with conditional sandwiched Tsallis relative entropy")
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="criterion values over an (x, q) grid")
    _add_family_args(scan)
    scan.add_argument("--state-file", help="density-matrix JSON file instead of a family")
    scan.add_argument("--cut", default="1:rest")
    scan.add_argument("--criterion", default="cstre", help="comma list of " + ", ".join(CRITERION_NAMES))
    scan.add_argument("--q", default="inf", help="number, comma list, or inf")
    scan.add_argument("--x-grid", default="0:1:0.01", help="start:stop:step")
    scan.add_argument("--out")

    thresh = sub.add_parser("threshold", help="bisect for the sign change of one criterion")
    _add_family_args(thresh)
    thresh.add_argument("--cut", default="1:rest")
    thresh.add_argument("--criterion", default="cstre", choices=CRITERION_NAMES, type=str.lower)
    thresh.add_argument("--q", default="inf")
    thresh.add_argument("--bracket", help="lo:hi, default the family domain")
    thresh.add_argument("--tol", type=float)
    thresh.add_argument("--out", help="CSV file to append the result to")

    trace = sub.add_parser("trace", help="crossing x(q) over a q grid")
    _add_family_args(trace)
    trace.add_argument("--cut", default="1:rest")
    trace.add_argument("--criterion", default="cstre,ar", help="comma list of cstre, ar, renyi")
    trace.add_argument("--q", default="1.01,1.5,2,5,10,100,inf")
    trace.add_argument("--tol", type=float)
    trace.add_argument("--out")

    tables = sub.add_parser("tables", help="closed-form eigenvalue and threshold tables")
    tables.add_argument("--out")

    check = sub.add_parser("check", help="named regression checks and acceptance gate")
    check.add_argument("--tolerance", type=float, help=f"printed-decimal tolerance (default {env.CHECK_TOLERANCE})")
    check.add_argument("--special-only", action="store_true", help="skip the acceptance rows")

    convert = sub.add_parser("convert", help="write a family member or normalise a state file")
    _add_family_args(convert)
    convert.add_argument("--state-file", help="state file to re-emit")
    convert.add_argument("--x", type=float, help="family parameter")
    convert.add_argument("--out", required=True)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        utils.atomic_write_text(out, text)
        utils.logger.info("cli._emit(): wrote %s", out)
    else:
        sys.stdout.write(text)


def _family(args: argparse.Namespace):
    if args.family is None:
        raise InvalidParameterError("--family is required")
    return build_family(args.family, n=args.n, d=args.d, psi=args.psi, custom_state=args.custom_state)


def cmd_scan(args: argparse.Namespace) -> int:
    spec = ScanSpec(
        family=args.family,
        n=args.n,
        d=args.d,
        psi=args.psi,
        custom_state=args.custom_state,
        state_file=args.state_file,
        cut=args.cut,
        criteria=_criteria(args.criterion),
        q_values=parse_q_values(args.q),
        x_grid=parse_x_grid(args.x_grid),
        out=args.out,
    )
    _emit(rows_to_csv(run_scan(spec)), spec.out)
    return EXIT_OK


def _format_threshold(family_label: str, cut_label: str, result: ThresholdResult) -> str:
    q = "-" if result.q is None else f"{result.q:g}"
    x_star = NO_CROSSING if result.x_star is None else f"{result.x_star:.10f}"
    lo, hi = result.bracket
    return (
        f"{family_label} cut={cut_label} criterion={result.criterion.value} q={q} "
        f"x_star={x_star} bracket=[{lo:.12g}, {hi:.12g}] tol={result.tol:g} "
        f"iterations={result.iterations}\n"
    )


def _append_threshold_row(path: str, family_label: str, cut_label: str, result: ThresholdResult) -> None:
    target = Path(path)
    existing = target.read_text(encoding="utf-8") if target.exists() else ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=THRESHOLD_COLUMNS, lineterminator="\n")
    if not existing:
        writer.writeheader()
    writer.writerow(
        {
            "family": family_label,
            "cut": cut_label,
            "criterion": result.criterion.value,
            "q": utils.format_float(result.q),
            "crossing_found": str(result.crossing_found).lower(),
            "x_star": utils.format_float(result.x_star),
            "bracket_lo": utils.format_float(result.bracket[0]),
            "bracket_hi": utils.format_float(result.bracket[1]),
            "tol": utils.format_float(result.tol),
            "iterations": result.iterations,
        }
    )
    utils.atomic_write_text(target, existing + buffer.getvalue())


def cmd_threshold(args: argparse.Namespace) -> int:
    q_values = parse_q_values(args.q)
    if len(q_values) != 1:
        raise InvalidParameterError("threshold takes a single q")
    q = q_values[0]
    criterion = criterion_for(args.criterion, q)
    bracket = parse_bracket(args.bracket) if args.bracket else None
    selected = _family(args)
    family, cut = resolve_cut(selected, args.cut)
    result = threshold(family, cut, criterion, q=q, bracket=bracket, tol=args.tol)
    sys.stdout.write(_format_threshold(selected.label, args.cut, result))
    if args.out:
        _append_threshold_row(args.out, selected.label, args.cut, result)
    return EXIT_OK


def cmd_trace(args: argparse.Namespace) -> int:
    names = _criteria(args.criterion)
    grid = parse_q_values(args.q)
    family, cut = resolve_cut(_family(args), args.cut)
    criteria = [criterion_for(name, 2.0) for name in names]
    if any(not c.needs_q for c in criteria):
        raise InvalidParameterError("trace criteria must depend on q: cstre, ar or renyi")
    traces = [convergence_trace(family, cut, c, grid, tol=args.tol) for c in criteria]

    buffer = io.StringIO()
    columns = ["q"] + [f"x_{name}" for name in names]
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for i, q in enumerate(grid):
        cells = [utils.format_float(q)]
        for trace in traces:
            x = trace.rows[i].x_crossing
            cells.append(NO_CROSSING if x is None else utils.format_float(x))
        writer.writerow(cells)
    _emit(buffer.getvalue(), args.out)
    return EXIT_OK


def cmd_tables(args: argparse.Namespace) -> int:
    report = build_tables_report()
    _emit(report.text, args.out)
    if not report.passed:
        utils.logger.error(
            "cli.cmd_tables(): residuals too large (eigenvalues %.3e, thresholds %.3e)",
            report.max_eigen_residual,
            report.max_threshold_residual,
        )
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    if args.tolerance is not None and not args.tolerance > 0:
        raise InvalidParameterError(f"--tolerance must be positive, got {args.tolerance}")
    results = run_checks(args.tolerance, include_acceptance=not args.special_only)
    sys.stdout.write(format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def cmd_convert(args: argparse.Namespace) -> int:
    if (args.family is None) == (args.state_file is None):
        raise InvalidParameterError("give exactly one of --family or --state-file")
    if args.state_file is not None:
        rho = load_state(args.state_file)
    else:
        if args.x is None:
            raise InvalidParameterError("--x is required with --family")
        rho = _family(args).evaluate(args.x)
    save_state(rho, args.out)
    return EXIT_OK


COMMANDS = {
    "scan": cmd_scan,
    "threshold": cmd_threshold,
    "trace": cmd_trace,
    "tables": cmd_tables,
    "check": cmd_check,
    "convert": cmd_convert,
}


def _report(error: BaseException) -> None:
    message = str(error).replace("\n", " ").strip()
    sys.stderr.write(f"error: kind={type(error).__name__} message={message}\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except INPUT_ERRORS as e:
        _report(e)
        return EXIT_INVALID_INPUT
    except ValidationError as e:
        _report(InvalidParameterError(str(e.errors()[0].get("msg", e))))
        return EXIT_INVALID_INPUT
    except CstreError as e:
        _report(e)
        return EXIT_NUMERICAL
    except (ArithmeticError, ValueError) as e:
        utils.logger.exception("cli.main(): numerical failure")
        _report(e)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
