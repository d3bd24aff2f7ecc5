"""Symbolic eigenvalue tables, threshold table, and their numeric cross-checks."""

from fractions import Fraction
from typing import Iterable, Optional

import numpy as np
from pydantic import BaseModel

from cstre.closed_forms import closed_form_ghz_eigs, closed_form_thresholds, closed_form_w_eigs
from cstre.entropies import conditioning_operator, sandwiched_spectrum
from cstre.schema import BipartiteCut, Criterion
from cstre.separability import threshold
from cstre.state_factory import compress_symmetric, noisy_ghz_family, noisy_w_family

__all__ = [
    "W_EIGENVALUE_TEMPLATES",
    "GHZ_EIGENVALUE_TEMPLATES",
    "TablesReport",
    "symbolic_rows",
    "dense_sandwiched_eigs",
    "closed_form_residual",
    "build_tables_report",
]

TABLE_N_VALUES = (3, 4, 5, 6)
SPOT_CHECK_POINTS = ((1.5, 0.05), (2.0, 0.3), (5.0, 0.1), (20.0, 0.9))
THRESHOLD_N_VALUES = tuple(range(3, 11))
EIGEN_RESIDUAL_LIMIT = 1e-9
THRESHOLD_RESIDUAL_LIMIT = 1e-6

# --- Noisy W family, sandwiched-matrix eigenvalues on the 1:N-1 cut ---

W_EIGENVALUE_TEMPLATES = {
    "lambda_1": "((1-x)/{np1})((1-x)/{n})^((1-q)/q)",
    "lambda_2": "((1-x)/{np1})(1/{n})^((1-q)/q)",
    "lambda_3": "((1-x)/{np1})(1/{n})^(1/q)[{nm2}(1-x)^((1-q)/q)+2({spread})^((1-q)/q)]",
    "lambda_4": "((1+{n}x)/{np1})(1/{n})^(1/q)[1+{nm1}({spread})^((1-q)/q)]",
}

# --- Noisy GHZ family ---

GHZ_EIGENVALUE_TEMPLATES = {
    "mu_1": "((1-x)/{np1})((1-x)/{n})^((1-q)/q)",
    "mu_2": "((1-x)/{np1})({marginal})^((1-q)/q)",
    "mu_3": "((1+{n}x)/{np1})({marginal})^((1-q)/q)",
    "mu_4": "((1-x)/{np1})(1/{n})^(1/q)[{nm1}(1-x)^((1-q)/q)+({half})^((1-q)/q)]",
}

ABSENT = "--"

TABLE_HEADER_TEMPLATE = """Sandwiched-matrix eigenvalues, noisy {family} family, 1:N-1 cut
{rule}"""

THRESHOLD_HEADER = (
    "   N   W cstre (closed)     W cstre (numeric)    W ar (closed)        "
    "W ar (numeric)       GHZ (closed)         GHZ (numeric)"
)


class TablesReport(BaseModel):
    text: str
    max_eigen_residual: float
    max_threshold_residual: float

    @property
    def passed(self) -> bool:
        return (
            self.max_eigen_residual <= EIGEN_RESIDUAL_LIMIT
            and self.max_threshold_residual <= THRESHOLD_RESIDUAL_LIMIT
        )


def _coefficient(value: int) -> str:
    """Integer prefactor as printed in the tables: 1 is omitted."""
    return "" if value == 1 else str(value)


def _linear(constant: int, slope: Fraction) -> str:
    """'c+kx' with k printed as an integer or as a fraction of x."""
    if slope.denominator == 1:
        term = f"{_coefficient(slope.numerator)}x"
    else:
        term = f"{_coefficient(slope.numerator)}x/{slope.denominator}"
    return f"{constant}+{term}"


def _ghz_marginal(n: int) -> str:
    # (2+(N-2)x)/(2N), reduced by 2 for even N
    if n % 2 == 0:
        return f"({_linear(1, Fraction(n - 2, 2))})/{n}"
    return f"({_linear(2, Fraction(n - 2))})/{2 * n}"


def symbolic_rows(family_kind: str, n: int) -> list[tuple[str, str, str]]:
    """(name, multiplicity label, expression) for one row of a table."""
    if family_kind == "w":
        fields = {
            "n": n,
            "np1": n + 1,
            "nm1": _coefficient(n - 1),
            "nm2": _coefficient(n - 2),
            "spread": _linear(1, Fraction(n - 2)),
        }
        degeneracy = {"lambda_1": f"{n - 2}-fold"}
        return [
            (name, degeneracy.get(name, "1-fold"), template.format(**fields))
            for name, template in W_EIGENVALUE_TEMPLATES.items()
        ]
    fields = {
        "n": n,
        "np1": n + 1,
        "nm1": _coefficient(n - 1),
        "marginal": _ghz_marginal(n),
        "half": _linear(1, Fraction(n - 2, 2)),
    }
    rows = []
    for name, template in GHZ_EIGENVALUE_TEMPLATES.items():
        if name == "mu_1" and n <= 3:
            rows.append((name, "0-fold", ABSENT))
            continue
        fold = {"mu_1": f"{n - 3}-fold", "mu_4": "2-fold"}.get(name, "1-fold")
        rows.append((name, fold, template.format(**fields)))
    return rows


def _compressed(family_kind: str, n: int):
    factory = noisy_w_family if family_kind == "w" else noisy_ghz_family
    return compress_symmetric(factory(n), 1)


def dense_sandwiched_eigs(family_kind: str, n: int, q: float, x: float) -> np.ndarray:
    """Top N+1 eigenvalues (descending) of the sandwiched matrix, computed densely."""
    rho = _compressed(family_kind, n).evaluate(x)
    cut = BipartiteCut(a_factors=(0,), b_factors=(1,))
    sigma = conditioning_operator(rho, cut)
    spectrum = sandwiched_spectrum(rho, sigma, (1.0 - q) / (2.0 * q))
    return np.asarray(spectrum.eigenvalues[: n + 1])


def expand_closed_form(family_kind: str, n: int, q: float, x: float) -> np.ndarray:
    rows = closed_form_w_eigs(n, q, x) if family_kind == "w" else closed_form_ghz_eigs(n, q, x)
    values = [value for _, value, fold in rows for _ in range(fold)]
    return np.sort(np.asarray(values))[::-1]


def closed_form_residual(family_kind: str, n: int, q: float, x: float) -> float:
    """max |closed form - dense| over the N+1 nonzero eigenvalues."""
    closed = expand_closed_form(family_kind, n, q, x)
    dense = dense_sandwiched_eigs(family_kind, n, q, x)
    return float(np.max(np.abs(closed - dense)))


def _numeric_threshold(family_kind: str, n: int, criterion: Criterion) -> float:
    result = threshold(
        _compressed(family_kind, n),
        BipartiteCut(a_factors=(0,), b_factors=(1,)),
        criterion,
        tol=1e-10,
    )
    return float("nan") if result.x_star is None else result.x_star


def build_tables_report(
    n_values: Iterable[int] = TABLE_N_VALUES,
    threshold_n_values: Optional[Iterable[int]] = THRESHOLD_N_VALUES,
) -> TablesReport:
    lines: list[str] = []
    max_eigen = 0.0
    table_n = list(n_values)
    for kind, label in (("w", "W"), ("ghz", "GHZ")):
        lines.append(TABLE_HEADER_TEMPLATE.format(family=label, rule="=" * 60))
        for n in table_n:
            lines.append(f"N={n}")
            for name, fold, expression in symbolic_rows(kind, n):
                lines.append(f"  {name:<9}{fold:<9}{expression}")
            for q, x in SPOT_CHECK_POINTS:
                residual = closed_form_residual(kind, n, q, x)
                max_eigen = max(max_eigen, residual)
                lines.append(f"  check q={q:g} x={x:g}  residual={residual:.3e}")
        lines.append("")

    max_threshold = 0.0
    if threshold_n_values is not None:
        lines.append("Separability thresholds, 1:N-1 cut, q -> inf")
        lines.append(THRESHOLD_HEADER)
        for n in threshold_n_values:
            cells = []
            for kind, rule, criterion in (
                ("w", "cstre", Criterion.CSTRE_QINF),
                ("w", "ar", Criterion.AR_QINF),
                ("ghz", "cstre", Criterion.CSTRE_QINF),
            ):
                closed = closed_form_thresholds(kind, n, rule)
                numeric = _numeric_threshold(kind, n, criterion)
                max_threshold = max(max_threshold, abs(closed - numeric))
                cells.extend((closed, numeric))
            lines.append(f"{n:>4}   " + "".join(f"{value:<21.12f}" for value in cells).rstrip())
        lines.append(f"max threshold residual {max_threshold:.3e}")
    lines.append(f"max eigenvalue residual {max_eigen:.3e}")
    return TablesReport(
        text="\n".join(lines) + "\n",
        max_eigen_residual=max_eigen,
        max_threshold_residual=max_threshold,
    )
