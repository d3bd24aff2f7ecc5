"""
Grid scans: criterion values over (x, q) for one family and cut, emitted as CSV.
"""

import csv
import io
from typing import Optional

from cstre import utils
from cstre.families import StateFamily
from cstre.linalg import DensityMatrix
from cstre.parallel import map_in_order
from cstre.schema import BipartiteCut, Criterion, ScanRow, ScanSpec
from cstre.separability import classify, criterion_for, criterion_value
from cstre.state_factory import build_family, parse_cut, resolve_cut
from cstre.state_io import load_state

__all__ = ["SCAN_COLUMNS", "prepare_scan", "run_scan", "rows_to_csv"]

SCAN_COLUMNS = ("x", "q", "criterion", "value", "verdict", "error")

# (q, criterion) pairs evaluated at every grid point, in output order.
Plan = list[tuple[Optional[float], Criterion]]


def _plan(spec: ScanSpec) -> Plan:
    """
    q inner, criteria innermost. Criteria that ignore q are emitted once per
    point, with an empty q cell.
    """
    plan: Plan = []
    seen: set[Criterion] = set()
    for q in spec.q_values:
        for name in spec.criteria:
            criterion = criterion_for(name, q)
            if criterion.needs_q or criterion in (Criterion.CSTRE_QINF, Criterion.AR_QINF):
                plan.append((q, criterion))
            elif criterion not in seen:
                seen.add(criterion)
                plan.append((None, criterion))
    return plan


def prepare_scan(
    spec: ScanSpec,
) -> tuple[Optional[StateFamily], Optional[DensityMatrix], BipartiteCut, Plan]:
    """
    Resolve everything a scan needs before any grid point is computed, so
    invalid requests fail without output.
    """
    if spec.state_file is not None:
        rho = load_state(spec.state_file)
        return None, rho, parse_cut(spec.cut, rho.n_factors), _plan(spec)
    family = build_family(spec.family or "", n=spec.n, d=spec.d, psi=spec.psi, custom_state=spec.custom_state)
    family, cut = resolve_cut(family, spec.cut)
    xs = spec.x_values()
    family.check_domain(xs[0])
    family.check_domain(xs[-1])
    return family, None, cut, _plan(spec)


def _point_rows(
    x: Optional[float], rho: DensityMatrix, cut: BipartiteCut, plan: Plan
) -> list[ScanRow]:
    rows = []
    for q, criterion in plan:
        try:
            value = criterion_value(rho, cut, criterion, q)
        except Exception as e:
            utils.logger.warning(
                "scan._point_rows(): x=%s q=%s %s failed: %s", x, q, criterion.value, e
            )
            rows.append(ScanRow(x=x, q=q, criterion=criterion, error=f"{type(e).__name__}: {e}"))
            continue
        rows.append(ScanRow(x=x, q=q, criterion=criterion, value=value, verdict=classify(value)))
    return rows


def run_scan(spec: ScanSpec, max_concurrency: Optional[int] = None) -> list[ScanRow]:
    """
    One row per (x, q, criterion): x outer, q inner. Points are computed in
    parallel and emitted in grid order. A point that fails keeps its rows,
    with the exception recorded in `error`.
    """
    family, rho, cut, plan = prepare_scan(spec)
    if family is None:
        assert rho is not None
        return _point_rows(None, rho, cut, plan)

    xs = spec.x_values()

    def scan_point(x: float) -> list[ScanRow]:
        return _point_rows(x, family.evaluate(x), cut, plan)

    rows: list[ScanRow] = []
    failed = 0
    for x, result in zip(xs, map_in_order(scan_point, xs, max_concurrency)):
        if isinstance(result, BaseException):
            failed += 1
            utils.logger.warning("scan.run_scan(): x=%s failed: %s", x, result)
            error = f"{type(result).__name__}: {result}"
            rows.extend(ScanRow(x=x, q=q, criterion=c, error=error) for q, c in plan)
            continue
        rows.extend(result)
    utils.logger.info(
        "scan.run_scan(): %s cut %s, %d points x %d columns, %d failed points",
        family.label,
        cut.label,
        len(xs),
        len(plan),
        failed,
    )
    return rows


def rows_to_csv(rows: list[ScanRow]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(
            {
                "x": utils.format_float(row.x),
                "q": utils.format_float(row.q),
                "criterion": row.criterion.value,
                "value": utils.format_float(row.value),
                "verdict": row.verdict.value if row.verdict is not None else "",
                "error": row.error,
            }
        )
    return buffer.getvalue()
