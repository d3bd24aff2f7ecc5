"""
Separability verdicts and thresholds.

The q -> inf limit of the CSTRE test is evaluated analytically: the sandwich
exponent tends to -1/2, so D~_q < 0 for large q exactly when
mu_max(sigma^-1/2 rho sigma^-1/2) > 1, i.e. when the reduction operator
I_A (x) rho_B - rho_AB has a negative eigenvalue. Thresholds are found by
bisection on x over a bracket where the criterion changes sign.
"""

import math
from typing import Callable, Iterable, Optional

import numpy as np

from cstre import env, utils
from cstre.entropies import (
    ar_conditional,
    conditioning_operator,
    cstre,
    sandwiched_renyi_conditional,
    sandwiched_spectrum,
    von_neumann_conditional,
)
from cstre.families import StateFamily
from cstre.linalg import (
    DensityMatrix,
    HermitianOperator,
    eig,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
)
from cstre.parallel import map_in_order
from cstre.schema import (
    BipartiteCut,
    ConvergenceTrace,
    Criterion,
    InvalidParameterError,
    ThresholdResult,
    TraceRow,
    Verdict,
)

__all__ = [
    "reduction_operator",
    "classify",
    "cstre_qinf_value",
    "cstre_qinf_verdict",
    "ar_qinf_value",
    "ar_qinf_verdict",
    "ppt_min_eigenvalue",
    "criterion_value",
    "criterion_for",
    "threshold",
    "ppt_threshold",
    "convergence_trace",
]

CRITERION_NAMES = ("cstre", "ar", "renyi", "vn", "ppt", "reduction")

# Finite-q criteria and the limit each one tends to as q -> inf.
_LIMITS = {
    Criterion.CSTRE_AT_Q: Criterion.CSTRE_QINF,
    Criterion.RENYI_AT_Q: Criterion.CSTRE_QINF,
    Criterion.AR_AT_Q: Criterion.AR_QINF,
}


def reduction_operator(rho_ab: DensityMatrix, cut: BipartiteCut) -> HermitianOperator:
    """I_A (x) rho_B - rho_AB; PSD for every state passing the reduction criterion."""
    sigma = conditioning_operator(rho_ab, cut)
    return HermitianOperator(rho_ab.dims, sigma.matrix - rho_ab.matrix)


def classify(value: float, boundary_tol: Optional[float] = None) -> Verdict:
    tol = env.BOUNDARY_TOL if boundary_tol is None else boundary_tol
    if abs(value) < tol:
        return Verdict.BOUNDARY
    return Verdict.NEGATIVE if value < 0 else Verdict.NONNEGATIVE


def cstre_qinf_value(rho_ab: DensityMatrix, cut: BipartiteCut) -> float:
    """1 - mu_max(sigma^-1/2 rho sigma^-1/2), sigma = I_A (x) rho_B on its support."""
    sigma = conditioning_operator(rho_ab, cut)
    spectrum = sandwiched_spectrum(rho_ab, sigma, -0.5)
    return 1.0 - float(spectrum.eigenvalues[0])


def cstre_qinf_verdict(rho_ab: DensityMatrix, cut: BipartiteCut) -> Verdict:
    """
    Sign of the CSTRE as q -> inf: NEGATIVE (entangled), NONNEGATIVE, or
    BOUNDARY within env.BOUNDARY_TOL.
    """
    return classify(cstre_qinf_value(rho_ab, cut))


def _top_eigenvalue(rho: DensityMatrix) -> tuple[float, int]:
    values = eig(rho, keep_vectors=False).eigenvalues
    top = float(values[0])
    return top, int(np.sum(values > top - env.BOUNDARY_TOL))


def ar_qinf_value(rho_ab: DensityMatrix, cut: BipartiteCut) -> float:
    """lambda_max(rho_B) - lambda_max(rho_AB); same sign as the AR entropy at large q."""
    cut.validate_for(rho_ab.n_factors)
    top_ab, _ = _top_eigenvalue(rho_ab)
    top_b, _ = _top_eigenvalue(partial_trace(rho_ab, cut.b_factors))
    return top_b - top_ab


def ar_qinf_verdict(rho_ab: DensityMatrix, cut: BipartiteCut) -> Verdict:
    """
    On a tie of the largest eigenvalues Tr rho_AB^q / Tr rho_B^q tends to the
    ratio of their multiplicities, which then decides the sign.
    """
    cut.validate_for(rho_ab.n_factors)
    top_ab, count_ab = _top_eigenvalue(rho_ab)
    top_b, count_b = _top_eigenvalue(partial_trace(rho_ab, cut.b_factors))
    verdict = classify(top_b - top_ab)
    if verdict is not Verdict.BOUNDARY or count_ab == count_b:
        return verdict
    return Verdict.NEGATIVE if count_ab > count_b else Verdict.NONNEGATIVE


def ppt_min_eigenvalue(rho_ab: DensityMatrix, cut: BipartiteCut) -> float:
    return min_eigenvalue(partial_transpose(rho_ab, cut))


def criterion_for(name: str, q: Optional[float]) -> Criterion:
    """
    Map a CLI criterion name and q to a Criterion. q = inf selects the
    analytic limit; the Renyi limit is the CSTRE limit.
    """
    key = (name or "").strip().lower()
    infinite = q is not None and math.isinf(q)
    if key in ("vn", "von_neumann"):
        return Criterion.VON_NEUMANN
    if key == "ppt":
        return Criterion.PPT
    if key == "reduction":
        return Criterion.REDUCTION
    if key in ("cstre", "renyi", "ar"):
        if q is None:
            raise InvalidParameterError(f"criterion '{key}' needs q (a number or inf)")
        if key == "ar":
            return Criterion.AR_QINF if infinite else Criterion.AR_AT_Q
        if infinite:
            return Criterion.CSTRE_QINF
        return Criterion.CSTRE_AT_Q if key == "cstre" else Criterion.RENYI_AT_Q
    raise InvalidParameterError(f"unknown criterion '{name}', expected one of {CRITERION_NAMES}")


def criterion_value(
    rho_ab: DensityMatrix,
    cut: BipartiteCut,
    criterion: Criterion,
    q: Optional[float] = None,
) -> float:
    """Scalar whose sign is the verdict of criterion; negative means entangled."""
    if criterion.needs_q and q is None:
        raise InvalidParameterError(f"{criterion.value} needs a finite q")
    if criterion is Criterion.CSTRE_QINF:
        return cstre_qinf_value(rho_ab, cut)
    if criterion is Criterion.CSTRE_AT_Q:
        return cstre(rho_ab, cut, q).value  # type: ignore[arg-type]
    if criterion is Criterion.RENYI_AT_Q:
        return sandwiched_renyi_conditional(rho_ab, cut, q).value  # type: ignore[arg-type]
    if criterion is Criterion.AR_QINF:
        return ar_qinf_value(rho_ab, cut)
    if criterion is Criterion.AR_AT_Q:
        return ar_conditional(rho_ab, cut, q).value  # type: ignore[arg-type]
    if criterion is Criterion.VON_NEUMANN:
        return von_neumann_conditional(rho_ab, cut).value
    if criterion is Criterion.PPT:
        return ppt_min_eigenvalue(rho_ab, cut)
    return min_eigenvalue(reduction_operator(rho_ab, cut))


def _bisect(
    is_negative: Callable[[float], bool],
    lo: float,
    hi: float,
    lo_negative: bool,
    tol: float,
    max_iterations: int,
) -> tuple[float, float, int]:
    iterations = 0
    while hi - lo > tol and iterations < max_iterations:
        mid = 0.5 * (lo + hi)
        if is_negative(mid) == lo_negative:
            lo = mid
        else:
            hi = mid
        iterations += 1
    return lo, hi, iterations


def threshold(
    family: StateFamily,
    cut: BipartiteCut,
    criterion: Criterion,
    q: Optional[float] = None,
    bracket: Optional[tuple[float, float]] = None,
    tol: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> ThresholdResult:
    """
    Locate the x where criterion changes sign on family across cut.

    Args:
        family: State family; evaluated only inside its domain.
        cut: Bipartition of the family's factors.
        criterion: Which scalar to bisect on.
        q: Entropic index for the *_AT_Q criteria; inf routes to the limit.
        bracket: Search interval, default the family domain.
        tol: Final bracket width, default env.BISECTION_TOL, at least 1e-10.
        max_iterations: Default env.BISECTION_MAX_ITERATIONS.

    Returns:
        ThresholdResult. When both ends have the same sign the result has
        crossing_found=False and carries the end values; no exception.
    """
    if criterion.needs_q and q is not None and math.isinf(q):
        criterion = _LIMITS[criterion]
    tol = env.BISECTION_TOL if tol is None else float(tol)
    if not tol >= 1e-10:
        raise InvalidParameterError(f"bisection tolerance {tol} is below 1e-10")
    max_iterations = env.BISECTION_MAX_ITERATIONS if max_iterations is None else max_iterations
    lo, hi = family.domain if bracket is None else (float(bracket[0]), float(bracket[1]))
    if not lo < hi:
        raise InvalidParameterError(f"bracket ({lo}, {hi}) is empty")
    family.check_domain(lo)
    family.check_domain(hi)
    cut.validate_for(family.n_factors)
    q_used = q if criterion.needs_q else None

    def value(x: float) -> float:
        return criterion_value(family.evaluate(x), cut, criterion, q_used)

    def is_negative(x: float) -> bool:
        return value(x) < -env.CROSSING_TOL

    value_lo, value_hi = value(lo), value(hi)
    lo_negative = value_lo < -env.CROSSING_TOL
    if lo_negative == (value_hi < -env.CROSSING_TOL):
        utils.logger.info(
            "separability.threshold(): no crossing for %s %s on [%g, %g] (ends %.3e, %.3e)",
            family.label,
            criterion.value,
            lo,
            hi,
            value_lo,
            value_hi,
        )
        return ThresholdResult(
            criterion=criterion,
            q=q_used,
            crossing_found=False,
            bracket=(lo, hi),
            tol=tol,
            iterations=0,
            end_values=(value_lo, value_hi),
        )

    final_lo, final_hi, iterations = _bisect(is_negative, lo, hi, lo_negative, tol, max_iterations)
    x_star = 0.5 * (final_lo + final_hi)
    result = ThresholdResult(
        criterion=criterion,
        q=q_used,
        crossing_found=True,
        x_star=x_star,
        bracket=(final_lo, final_hi),
        tol=tol,
        iterations=iterations,
        end_values=(value_lo, value_hi),
        value_at_root=value(x_star),
    )
    utils.logger.info(
        "separability.threshold(): %s %s cut %s q=%s -> x*=%.10f after %d iterations",
        family.label,
        criterion.value,
        cut.label,
        "-" if q_used is None else f"{q_used:g}",
        x_star,
        iterations,
    )
    return result


def ppt_threshold(
    family: StateFamily,
    cut: BipartiteCut,
    bracket: Optional[tuple[float, float]] = None,
    tol: Optional[float] = None,
) -> ThresholdResult:
    return threshold(family, cut, Criterion.PPT, bracket=bracket, tol=tol)


def convergence_trace(
    family: StateFamily,
    cut: BipartiteCut,
    criterion: Criterion,
    q_grid: Iterable[float],
    bracket: Optional[tuple[float, float]] = None,
    tol: Optional[float] = None,
    max_concurrency: Optional[int] = None,
) -> ConvergenceTrace:
    """
    Crossing x(q) of a finite-q criterion for every q in q_grid (each > 1,
    inf allowed for the analytic limit). Rows without a sign change carry
    x_crossing=None.
    """
    criterion = {
        Criterion.CSTRE_QINF: Criterion.CSTRE_AT_Q,
        Criterion.AR_QINF: Criterion.AR_AT_Q,
    }.get(criterion, criterion)
    if criterion not in _LIMITS:
        raise InvalidParameterError(
            f"convergence traces need a q-dependent criterion, got {criterion.value}"
        )
    grid = [float(q) for q in q_grid]
    bad = [q for q in grid if not q > 1]
    if bad:
        raise InvalidParameterError(f"trace q values must exceed 1, got {bad}")

    def crossing(q: float) -> ThresholdResult:
        return threshold(family, cut, criterion, q=q, bracket=bracket, tol=tol)

    rows: list[TraceRow] = []
    for q, result in zip(grid, map_in_order(crossing, grid, max_concurrency)):
        if isinstance(result, BaseException):
            raise result
        rows.append(TraceRow(q=q, x_crossing=result.x_star, iterations=result.iterations))
    trace = ConvergenceTrace(
        criterion=criterion, family=family.label, cut=cut.label, rows=rows
    )
    if not trace.is_monotone():
        utils.logger.warning(
            "separability.convergence_trace(): %s %s crossings not monotone in q: %s",
            family.label,
            criterion.value,
            trace.crossings(),
        )
    return trace
