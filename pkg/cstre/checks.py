"""
Named regression checks.

`special_case_checks` gathers the one-off separability results (WW-bar at
N=3, 2:2 cuts, isotropic and X states, non-symmetric W); `acceptance_checks`
covers the threshold tables, the PPT agreement, closed-form fidelity, the
property suites and large-N asymptotics. `run_checks` runs both.
"""

import math
from typing import Callable, Optional

import numpy as np

from cstre import env, utils
from cstre.closed_forms import (
    asymptotic_threshold,
    closed_form_ghz_eigs,
    closed_form_thresholds,
    closed_form_w_eigs,
)
from cstre.entropies import (
    ar_conditional,
    cstre,
    sandwiched_tsallis_relative,
    tsallis_relative,
    von_neumann_conditional,
)
from cstre.families import StateFamily
from cstre.linalg import DensityMatrix, eig, tensor_product
from cstre.schema import BipartiteCut, CheckResult, Criterion, Verdict
from cstre.separability import convergence_trace, cstre_qinf_verdict, threshold
from cstre.state_factory import (
    compress_symmetric,
    isotropic_qutrit_family,
    noisy_ghz_family,
    noisy_w_family,
    noisy_wwbar_family,
    nonsymmetric_noisy_family,
    qubit_qutrit_x_family,
    resolve_cut,
)
from cstre.dicke import dicke_state
from cstre.tables import closed_form_residual

__all__ = ["special_case_checks", "acceptance_checks", "run_checks", "format_report"]

FORMULA_TOL = 1e-6
EIGEN_TOL = 1e-10
PROPERTY_SLACK = 1e-9
PROPERTY_SAMPLES = 1000
RNG_SEED = 20240611

CheckFn = Callable[[float], CheckResult]
_SPECIAL: list[tuple[str, CheckFn]] = []
_ACCEPTANCE: list[tuple[str, CheckFn]] = []


def _register(registry: list[tuple[str, CheckFn]], name: str) -> Callable[[CheckFn], CheckFn]:
    def wrap(fn: CheckFn) -> CheckFn:
        registry.append((name, fn))
        return fn

    return wrap


def _bisection_tol(tolerance: float) -> float:
    return max(1e-10, min(env.BISECTION_TOL, tolerance / 10.0))


def _x_star(
    family: StateFamily,
    cut_spec: str,
    criterion: Criterion,
    tolerance: float,
    q: Optional[float] = None,
) -> float:
    resolved, cut = resolve_cut(family, cut_spec)
    result = threshold(resolved, cut, criterion, q=q, tol=_bisection_tol(tolerance))
    return math.nan if result.x_star is None else result.x_star


def _within(computed: float, expected: float, tolerance: float) -> bool:
    return bool(abs(computed - expected) <= tolerance)


def _result(
    name: str,
    expected: str,
    computed: str,
    tolerance: float,
    passed: bool,
    detail: str = "",
) -> CheckResult:
    return CheckResult(
        name=name,
        expected=expected,
        computed=computed,
        tolerance=tolerance,
        passed=passed,
        detail=detail,
    )


def _single(name: str, expected: float, computed: float, tolerance: float) -> CheckResult:
    return _result(
        name, f"{expected:.6f}", f"{computed:.6f}", tolerance, _within(computed, expected, tolerance)
    )


# --- special cases ---


@_register(_SPECIAL, "wwbar_n3_cstre_ppt")
def _wwbar_n3_cstre_ppt(tolerance: float) -> CheckResult:
    family = noisy_wwbar_family(3)
    x_cstre = _x_star(family, "1:rest", Criterion.CSTRE_QINF, tolerance)
    x_ppt = _x_star(family, "1:rest", Criterion.PPT, tolerance)
    return _result(
        "wwbar_n3_cstre_ppt",
        "0.1896",
        f"cstre={x_cstre:.6f} ppt={x_ppt:.6f}",
        tolerance,
        _within(x_cstre, 0.1896, tolerance) and _within(x_ppt, 0.1896, tolerance),
    )


@_register(_SPECIAL, "wwbar_n3_ar")
def _wwbar_n3_ar(tolerance: float) -> CheckResult:
    computed = _x_star(noisy_wwbar_family(3), "1:rest", Criterion.AR_QINF, tolerance)
    return _single("wwbar_n3_ar", 1.0 / 3.0, computed, tolerance)


@_register(_SPECIAL, "wwbar_n4_to_8_closed_form")
def _wwbar_closed_form(tolerance: float) -> CheckResult:
    worst = 0.0
    for n in range(4, 9):
        computed = _x_star(noisy_wwbar_family(n), "1:rest", Criterion.CSTRE_QINF, tolerance)
        worst = max(worst, abs(computed - closed_form_thresholds("wwbar", n)))
    return _result(
        "wwbar_n4_to_8_closed_form", "2/(N^2+N+2)", f"max deviation {worst:.3e}", tolerance, worst <= tolerance
    )


@_register(_SPECIAL, "w_n4_2to2_cstre")
def _w_two_two(tolerance: float) -> CheckResult:
    computed = _x_star(noisy_w_family(4), "2:2", Criterion.CSTRE_QINF, tolerance)
    return _single("w_n4_2to2_cstre", 0.2105, computed, tolerance)


@_register(_SPECIAL, "ghz_n4_2to2_cstre")
def _ghz_two_two(tolerance: float) -> CheckResult:
    computed = _x_star(noisy_ghz_family(4), "2:2", Criterion.CSTRE_QINF, tolerance)
    return _single("ghz_n4_2to2_cstre", 0.2105, computed, tolerance)


@_register(_SPECIAL, "isotropic_qutrit")
def _isotropic(tolerance: float) -> CheckResult:
    computed = _x_star(isotropic_qutrit_family(), "1:1", Criterion.CSTRE_QINF, tolerance)
    return _single("isotropic_qutrit", 1.0 / 3.0, computed, tolerance)


@_register(_SPECIAL, "x_state_qutrit_side")
def _x_state_qutrit(tolerance: float) -> CheckResult:
    # A = qubit, B = qutrit: conditioning on the qutrit marginal diag(3,2,3)/8
    computed = _x_star(qubit_qutrit_x_family(), "1:1", Criterion.CSTRE_QINF, tolerance)
    return _single("x_state_qutrit_side", 0.125, computed, tolerance)


def x_state_qubit_side_values(points: int = 101) -> list[tuple[float, Verdict, float]]:
    """(x, q -> inf verdict, min finite-q CSTRE) on an open grid over (0, 1/4)."""
    family = qubit_qutrit_x_family()
    cut = BipartiteCut(a_factors=(1,), b_factors=(0,))
    rows = []
    for i in range(1, points + 1):
        x = 0.25 * i / (points + 1)
        rho = family.evaluate(x)
        lowest = min(cstre(rho, cut, q).value for q in (1.5, 2.0, 5.0, 50.0))
        rows.append((x, cstre_qinf_verdict(rho, cut), lowest))
    return rows


@_register(_SPECIAL, "x_state_qubit_side_nonnegative")
def _x_state_qubit(tolerance: float) -> CheckResult:
    rows = x_state_qubit_side_values()
    negatives = [x for x, verdict, lowest in rows if verdict is Verdict.NEGATIVE or lowest < -PROPERTY_SLACK]
    return _result(
        "x_state_qubit_side_nonnegative",
        "NONNEGATIVE on (0, 1/4)",
        "NONNEGATIVE" if not negatives else f"NEGATIVE at {len(negatives)} points",
        PROPERTY_SLACK,
        not negatives,
    )


@_register(_SPECIAL, "nonsymmetric_w3_cstre")
def _nonsymmetric_cstre(tolerance: float) -> CheckResult:
    family = nonsymmetric_noisy_family(3, dicke_state(3, 1))
    computed = _x_star(family, "1:rest", Criterion.CSTRE_QINF, tolerance)
    return _single("nonsymmetric_w3_cstre", 0.2096, computed, tolerance)


@_register(_SPECIAL, "nonsymmetric_w3_ar")
def _nonsymmetric_ar(tolerance: float) -> CheckResult:
    family = nonsymmetric_noisy_family(3, dicke_state(3, 1))
    computed = _x_star(family, "1:rest", Criterion.AR_QINF, tolerance)
    return _single("nonsymmetric_w3_ar", 0.2727, computed, tolerance)


# --- acceptance rows ---

W_PRINTED = {3: 0.1547, 4: 0.1123, 5: 0.0883, 6: 0.07275, 8: 0.0538}


@_register(_ACCEPTANCE, "w_cstre_thresholds")
def _w_cstre(tolerance: float) -> CheckResult:
    printed = formula = 0.0
    for n, value in W_PRINTED.items():
        computed = _x_star(noisy_w_family(n), "1:rest", Criterion.CSTRE_QINF, FORMULA_TOL)
        printed = max(printed, abs(computed - value))
        formula = max(formula, abs(computed - closed_form_thresholds("w", n)))
    return _result(
        "w_cstre_thresholds",
        "printed decimals; (-N+sqrt(2N(N-1)))/(N(N-2))",
        f"printed dev {printed:.2e}, formula dev {formula:.2e}",
        tolerance,
        printed <= tolerance and formula <= FORMULA_TOL,
    )


@_register(_ACCEPTANCE, "w_ar_thresholds")
def _w_ar(tolerance: float) -> CheckResult:
    formula = 0.0
    for n in range(3, 11):
        computed = _x_star(noisy_w_family(n), "1:rest", Criterion.AR_QINF, FORMULA_TOL)
        formula = max(formula, abs(computed - 1.0 / (n + 2)))
    family, cut = resolve_cut(noisy_w_family(8), "1:rest")
    trace = convergence_trace(family, cut, Criterion.AR_AT_Q, [10.0, 100.0, 1e3, 1e4])
    endpoint = trace.rows[-1].x_crossing
    endpoint = math.nan if endpoint is None else endpoint
    return _result(
        "w_ar_thresholds",
        "1/(N+2); N=8 trace endpoint 0.1",
        f"formula dev {formula:.2e}, endpoint {endpoint:.6f}",
        tolerance,
        formula <= FORMULA_TOL and _within(endpoint, 0.1, tolerance),
    )


def ghz_single_qubit_conditioning_gap(n: int = 6) -> float:
    """
    max |cstre - ar| / max(1, |ar|) when conditioning on one qubit, whose
    marginal is I/2.
    """
    family = compress_symmetric(noisy_ghz_family(n), n - 1)
    cut = BipartiteCut(a_factors=(0,), b_factors=(1,))
    worst = 0.0
    for x in np.linspace(0.0, 1.0, 11):
        rho = family.evaluate(float(x))
        for q in (0.5, 1.5, 2.0, 5.0, 50.0):
            ar = ar_conditional(rho, cut, q).value
            gap = abs(cstre(rho, cut, q).value - ar) / max(1.0, abs(ar))
            worst = max(worst, gap)
    return worst


@_register(_ACCEPTANCE, "ghz_thresholds")
def _ghz(tolerance: float) -> CheckResult:
    formula = 0.0
    for n in range(3, 11):
        computed = _x_star(noisy_ghz_family(n), "1:rest", Criterion.CSTRE_QINF, FORMULA_TOL)
        formula = max(formula, abs(computed - closed_form_thresholds("ghz", n)))
    n6 = _x_star(noisy_ghz_family(6), "1:rest", Criterion.CSTRE_QINF, FORMULA_TOL)
    gap = ghz_single_qubit_conditioning_gap()
    return _result(
        "ghz_thresholds",
        "2/(N^2+N+2); N=6 0.04545; cstre == ar",
        f"formula dev {formula:.2e}, N=6 {n6:.6f}, cstre-ar gap {gap:.2e}",
        tolerance,
        formula <= FORMULA_TOL and _within(n6, 0.04545, tolerance) and gap < PROPERTY_SLACK,
    )


@_register(_ACCEPTANCE, "ppt_agreement")
def _ppt(tolerance: float) -> CheckResult:
    worst = 0.0
    for factory in (noisy_w_family, noisy_ghz_family, noisy_wwbar_family):
        for n in range(3, 9):
            family = factory(n)
            x_cstre = _x_star(family, "1:rest", Criterion.CSTRE_QINF, FORMULA_TOL)
            x_ppt = _x_star(family, "1:rest", Criterion.PPT, FORMULA_TOL)
            worst = max(worst, abs(x_cstre - x_ppt))
    w_ppt = _x_star(noisy_w_family(4), "2:2", Criterion.PPT, tolerance)
    ghz_ppt = _x_star(noisy_ghz_family(4), "2:2", Criterion.PPT, tolerance)
    return _result(
        "ppt_agreement",
        "1:N-1 agree; 2:2 PPT 0.0808 (W), 0.0625 (GHZ)",
        f"1:N-1 dev {worst:.2e}, 2:2 W {w_ppt:.6f}, GHZ {ghz_ppt:.6f}",
        tolerance,
        worst <= FORMULA_TOL and _within(w_ppt, 0.0808, tolerance) and _within(ghz_ppt, 0.0625, tolerance),
    )


@_register(_ACCEPTANCE, "wwbar_thresholds")
def _wwbar(tolerance: float) -> CheckResult:
    n3_cstre = _x_star(noisy_wwbar_family(3), "1:rest", Criterion.CSTRE_QINF, tolerance)
    n3_ar = _x_star(noisy_wwbar_family(3), "1:rest", Criterion.AR_QINF, tolerance)
    formula = 0.0
    for n in range(4, 9):
        expected = closed_form_thresholds("wwbar", n)
        for criterion in (Criterion.CSTRE_QINF, Criterion.AR_QINF):
            computed = _x_star(noisy_wwbar_family(n), "1:rest", criterion, FORMULA_TOL)
            formula = max(formula, abs(computed - expected))
    return _result(
        "wwbar_thresholds",
        "N=3 cstre 0.1896, ar 0.3333; N>=4 2/(N^2+N+2)",
        f"N=3 cstre {n3_cstre:.6f} ar {n3_ar:.6f}, N>=4 dev {formula:.2e}",
        tolerance,
        _within(n3_cstre, 0.1896, tolerance) and _within(n3_ar, 0.3333, tolerance) and formula <= FORMULA_TOL,
    )


@_register(_ACCEPTANCE, "closed_form_eigenvalues")
def _closed_forms(tolerance: float) -> CheckResult:
    worst = 0.0
    unit = 0.0
    for n in range(3, 9):
        for q in (1.5, 2.0, 5.0, 20.0):
            for x in (0.0, 0.05, 0.3, 0.9):
                worst = max(worst, closed_form_residual("w", n, q, x), closed_form_residual("ghz", n, q, x))
        for x in (0.0, 0.05, 0.3, 0.9):
            for rows in (closed_form_w_eigs(n, 1.0, x), closed_form_ghz_eigs(n, 1.0, x)):
                unit = max(unit, abs(sum(value * fold for _, value, fold in rows) - 1.0))
    return _result(
        "closed_form_eigenvalues",
        "dense residual <= 1e-10; q=1 sum 1",
        f"residual {worst:.2e}, q=1 sum dev {unit:.2e}",
        EIGEN_TOL,
        worst <= EIGEN_TOL and unit <= 1e-12,
    )


@_register(_ACCEPTANCE, "special_cases_exact")
def _special_exact(tolerance: float) -> CheckResult:
    iso = _x_star(isotropic_qutrit_family(), "1:1", Criterion.CSTRE_QINF, FORMULA_TOL)
    x_state = _x_star(qubit_qutrit_x_family(), "1:1", Criterion.CSTRE_QINF, FORMULA_TOL)
    qubit_side = min(lowest for _, _, lowest in x_state_qubit_side_values())
    family = nonsymmetric_noisy_family(3, dicke_state(3, 1))
    ns_cstre = _x_star(family, "1:rest", Criterion.CSTRE_QINF, tolerance)
    ns_ar = _x_star(family, "1:rest", Criterion.AR_QINF, tolerance)
    return _result(
        "special_cases_exact",
        "1/3, 1/8, qubit side >= 0, 0.2096, 0.2727",
        f"{iso:.8f}, {x_state:.8f}, {qubit_side:.2e}, {ns_cstre:.6f}, {ns_ar:.6f}",
        tolerance,
        _within(iso, 1.0 / 3.0, FORMULA_TOL)
        and _within(x_state, 0.125, FORMULA_TOL)
        and qubit_side >= -PROPERTY_SLACK
        and _within(ns_cstre, 0.2096, tolerance)
        and _within(ns_ar, 0.2727, tolerance),
    )


def random_density_matrix(rng: np.random.Generator, size: int, rank: Optional[int] = None) -> np.ndarray:
    """Ginibre-distributed density matrix of the given rank."""
    rank = size if rank is None else rank
    ginibre = rng.normal(size=(size, rank)) + 1j * rng.normal(size=(size, rank))
    matrix = ginibre @ ginibre.conj().T
    return matrix / np.trace(matrix).real


def random_pure_state(rng: np.random.Generator, size: int) -> np.ndarray:
    psi = rng.normal(size=size) + 1j * rng.normal(size=size)
    return psi / np.linalg.norm(psi)


def random_separable_state(rng: np.random.Generator, dims: tuple[int, int], terms: int = 3) -> DensityMatrix:
    """Convex mixture of product pure states."""
    weights = rng.dirichlet(np.ones(terms))
    matrix = np.zeros((dims[0] * dims[1],) * 2, dtype=np.complex128)
    for weight in weights:
        a = random_pure_state(rng, dims[0])
        b = random_pure_state(rng, dims[1])
        product = np.kron(a, b)
        matrix += weight * np.outer(product, product.conj())
    return DensityMatrix.from_matrix(matrix, dims)


def lieb_thirring_violation(samples: int = PROPERTY_SAMPLES, seed: int = RNG_SEED) -> float:
    """max(sandwiched - traditional) over random (rho, sigma, q > 1) triples."""
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for i in range(samples):
        size = 2 + i % 3
        rho = DensityMatrix.from_matrix(random_density_matrix(rng, size), (size,))
        # Mixed with the identity so sigma^(1-q) stays well conditioned.
        sigma_matrix = 0.8 * random_density_matrix(rng, size) + 0.2 * np.eye(size) / size
        sigma = DensityMatrix.from_matrix(sigma_matrix, (size,))
        q = (1.5, 2.0, 5.0)[i % 3]
        worst = max(worst, sandwiched_tsallis_relative(rho, sigma, q) - tsallis_relative(rho, sigma, q))
    return worst


def separable_cstre_minimum(samples: int = PROPERTY_SAMPLES, seed: int = RNG_SEED) -> float:
    rng = np.random.default_rng(seed + 1)
    cut = BipartiteCut(a_factors=(0,), b_factors=(1,))
    lowest = math.inf
    for i in range(samples):
        rho = random_separable_state(rng, (2, 2 + i % 2))
        for q in (1.5, 2.0, 5.0, 50.0):
            lowest = min(lowest, cstre(rho, cut, q).value)
    return lowest


def q_to_one_deviation(step: float = 1e-5) -> float:
    """max |S_q - S_vN| over the built-in families at q = 1 +/- step, for cstre and ar."""
    cases: list[tuple[StateFamily, str]] = [
        (noisy_w_family(3), "1:rest"),
        (noisy_w_family(8), "1:rest"),
        (noisy_ghz_family(5), "1:rest"),
        (noisy_wwbar_family(4), "1:rest"),
        (isotropic_qutrit_family(), "1:1"),
        (qubit_qutrit_x_family(), "1:1"),
        (nonsymmetric_noisy_family(3, dicke_state(3, 1)), "1:rest"),
    ]
    worst = 0.0
    for family, spec in cases:
        resolved, cut = resolve_cut(family, spec)
        hi = resolved.domain[1]
        for x in (0.0, 0.3 * hi, 0.7 * hi, hi):
            rho = resolved.evaluate(x)
            reference = von_neumann_conditional(rho, cut).value
            for q in (1.0 - step, 1.0 + step):
                for value in (cstre(rho, cut, q).value, ar_conditional(rho, cut, q).value):
                    worst = max(worst, abs(value - reference))
    return worst


def compressed_full_gap(max_qubits: int = 8) -> float:
    """max difference of nonzero spectra, compressed vs full space, N <= max_qubits."""
    worst = 0.0
    for n in range(3, max_qubits + 1):
        family = noisy_w_family(n)
        compressed = compress_symmetric(family, 1)
        for x in (0.0, 0.1, 0.5, 0.9):
            full = eig(family.evaluate(x), keep_vectors=False).eigenvalues[: n + 1]
            small = eig(compressed.evaluate(x), keep_vectors=False).eigenvalues[: n + 1]
            worst = max(worst, float(np.max(np.abs(full - small))))
    return worst


@_register(_ACCEPTANCE, "property_suites")
def _properties(tolerance: float) -> CheckResult:
    lieb_thirring = lieb_thirring_violation()
    separable = separable_cstre_minimum()
    q_to_one = q_to_one_deviation()
    compressed = compressed_full_gap()
    crossing = _x_star(noisy_w_family(8), "1:rest", Criterion.VON_NEUMANN, tolerance)
    return _result(
        "property_suites",
        "LT <= 1e-10; separable >= -1e-9; q->1 <= 5e-4; compressed <= 1e-10; vN 0.4246",
        f"{lieb_thirring:.2e}, {separable:.2e}, {q_to_one:.2e}, {compressed:.2e}, {crossing:.6f}",
        tolerance,
        lieb_thirring <= 1e-10
        and separable >= -PROPERTY_SLACK
        and q_to_one <= 5e-4
        and compressed <= EIGEN_TOL
        and _within(crossing, 0.4246, tolerance),
    )


@_register(_ACCEPTANCE, "large_n_asymptotics")
def _asymptotics(tolerance: float) -> CheckResult:
    n = 64
    w = _x_star(noisy_w_family(n), "1:rest", Criterion.CSTRE_QINF, FORMULA_TOL)
    ghz = _x_star(noisy_ghz_family(n), "1:rest", Criterion.CSTRE_QINF, FORMULA_TOL)
    w_rel = abs(w / asymptotic_threshold("w", n) - 1.0)
    ghz_rel = abs(ghz / asymptotic_threshold("ghz", n) - 1.0)
    return _result(
        "large_n_asymptotics",
        "W within 2% of (sqrt2-1)/N, GHZ within 5% of 2/N^2",
        f"W {w_rel:.2%}, GHZ {ghz_rel:.2%}",
        0.05,
        w_rel <= 0.02 and ghz_rel <= 0.05,
    )


def _run(registry: list[tuple[str, CheckFn]], tolerance: Optional[float]) -> list[CheckResult]:
    tol = env.CHECK_TOLERANCE if tolerance is None else tolerance
    results = []
    for name, fn in registry:
        try:
            result = fn(tol)
        except Exception as e:
            utils.logger.exception("checks._run(): %s raised", name)
            result = _result(name, "-", "-", tol, False, detail=f"{type(e).__name__}: {e}")
        utils.logger.info("checks._run(): %s %s", name, "pass" if result.passed else "FAIL")
        results.append(result)
    return results


def special_case_checks(tolerance: Optional[float] = None) -> list[CheckResult]:
    return _run(_SPECIAL, tolerance)


def acceptance_checks(tolerance: Optional[float] = None) -> list[CheckResult]:
    return _run(_ACCEPTANCE, tolerance)


def run_checks(tolerance: Optional[float] = None, include_acceptance: bool = True) -> list[CheckResult]:
    results = special_case_checks(tolerance)
    if include_acceptance:
        results += acceptance_checks(tolerance)
    return results


def format_report(results: list[CheckResult]) -> str:
    width = max((len(r.name) for r in results), default=4)
    lines = [f"{'check':<{width}}  status  tolerance  expected | computed"]
    for r in results:
        status = "pass" if r.passed else "FAIL"
        line = f"{r.name:<{width}}  {status:<6}  {r.tolerance:<9.1e}  {r.expected} | {r.computed}"
        if r.detail:
            line += f"  ({r.detail})"
        lines.append(line)
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
