"""
Closed-form eigenvalues of the sandwiched matrix for the noisy W and GHZ
families on the 1:N-1 cut, and closed-form separability thresholds.
"""

import math

from cstre.schema import InvalidParameterError, UnsupportedCombinationError

__all__ = [
    "closed_form_w_eigs",
    "closed_form_ghz_eigs",
    "closed_form_thresholds",
    "asymptotic_threshold",
    "FAMILY_KINDS",
]

FAMILY_KINDS = ("w", "ghz", "wwbar")

Eigenvalues = list[tuple[str, float, int]]


def _check(n_qubits: int, q: float, x: float, minimum: int = 3) -> None:
    if n_qubits < minimum:
        raise InvalidParameterError(f"closed forms need N >= {minimum}, got N={n_qubits}")
    if not q > 0:
        raise InvalidParameterError(f"q must be positive, got {q}")
    if not 0.0 <= x <= 1.0:
        raise InvalidParameterError(f"x={x} outside [0, 1]")


def _pow(base: float, exponent: float) -> float:
    # 0^a with a < 0 only occurs multiplied by a zero prefactor.
    return base**exponent if base > 0 else 0.0


def closed_form_w_eigs(n_qubits: int, q: float, x: float) -> Eigenvalues:
    """
    (name, value, multiplicity) of the nonzero eigenvalues of
    (I_A (x) rho_B)^a rho_N^W(x) (I_A (x) rho_B)^a, a = (1-q)/(2q).
    Multiplicities sum to N+1.
    """
    _check(n_qubits, q, x)
    n = n_qubits
    a = (1.0 - q) / q
    noise = (1.0 - x) / (n + 1)
    spread = 1.0 + (n - 2) * x
    lam1 = noise * _pow((1.0 - x) / n, a)
    lam2 = noise * (1.0 / n) ** a
    lam3 = noise * (1.0 / n) ** (1.0 / q) * ((n - 2) * _pow(1.0 - x, a) + 2.0 * spread**a)
    lam4 = (1.0 + n * x) / (n + 1) * (1.0 / n) ** (1.0 / q) * (1.0 + (n - 1) * spread**a)
    return [("lambda_1", lam1, n - 2), ("lambda_2", lam2, 1), ("lambda_3", lam3, 1), ("lambda_4", lam4, 1)]


def closed_form_ghz_eigs(n_qubits: int, q: float, x: float) -> Eigenvalues:
    """
    Same for rho_N^GHZ(x). mu_1 is (N-3)-fold, so it is absent at N = 3;
    mu_4 is 2-fold.
    """
    _check(n_qubits, q, x)
    n = n_qubits
    a = (1.0 - q) / q
    noise = (1.0 - x) / (n + 1)
    marginal = (2.0 + (n - 2) * x) / (2.0 * n)
    rows: Eigenvalues = []
    if n > 3:
        rows.append(("mu_1", noise * _pow((1.0 - x) / n, a), n - 3))
    rows.append(("mu_2", noise * marginal**a, 1))
    rows.append(("mu_3", (1.0 + n * x) / (n + 1) * marginal**a, 1))
    mu4 = noise * (1.0 / n) ** (1.0 / q) * (
        (n - 1) * _pow(1.0 - x, a) + (1.0 + (n / 2.0 - 1.0) * x) ** a
    )
    rows.append(("mu_4", mu4, 2))
    return rows


def closed_form_thresholds(family_kind: str, n_qubits: int, criterion: str = "cstre") -> float:
    """
    Upper end of the 1:N-1 separability range in the q -> inf limit.

        W,   CSTRE   (-N + sqrt(2N(N-1))) / (N(N-2))
        W,   AR      1/(N+2)
        GHZ, either  2/(N^2+N+2)
        WW-bar (N >= 4), either   2/(N^2+N+2)

    Raises:
        UnsupportedCombinationError: no closed form for the request.
    """
    kind = family_kind.strip().lower()
    rule = criterion.strip().lower()
    if kind not in FAMILY_KINDS or rule not in ("cstre", "ar"):
        raise UnsupportedCombinationError(
            f"no closed form for family '{family_kind}' with criterion '{criterion}'"
        )
    if n_qubits < 3:
        raise UnsupportedCombinationError(f"closed forms start at N=3, got N={n_qubits}")
    n = n_qubits
    if kind == "w":
        if rule == "ar":
            return 1.0 / (n + 2)
        # N(N-2) > 0 for N >= 3
        return (-n + math.sqrt(2.0 * n * (n - 1))) / (n * (n - 2))
    if kind == "wwbar" and n < 4:
        raise UnsupportedCombinationError(
            "WW-bar thresholds have no closed form at N=3; compute them numerically"
        )
    return 2.0 / (n * n + n + 2)


def asymptotic_threshold(family_kind: str, n_qubits: int) -> float:
    """Large-N behaviour: (sqrt(2)-1)/N for W, 2/N^2 for GHZ."""
    kind = family_kind.strip().lower()
    if kind == "w":
        return (math.sqrt(2.0) - 1.0) / n_qubits
    if kind == "ghz":
        return 2.0 / n_qubits**2
    raise UnsupportedCombinationError(f"no asymptotic form for family '{family_kind}'")
