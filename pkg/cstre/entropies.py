"""
Entropy functionals.

    sandwiched Tsallis relative   (Q~_q(rho||sigma) - 1)/(q - 1)
    traditional Tsallis relative  (Tr rho^q sigma^(1-q) - 1)/(q - 1)
    CSTRE                         (Q~_q(rho_AB || I_A (x) rho_B) - 1)/(1 - q)
    sandwiched Renyi conditional  ln Q~_q(rho_AB || I_A (x) rho_B)/(1 - q)
    AR q-conditional              (Tr rho_AB^q / Tr rho_B^q - 1)/(1 - q)
    von Neumann conditional       S(rho_AB) - S(rho_B)

with Q~_q(rho||sigma) = Tr[(sigma^a rho sigma^a)^q], a = (1-q)/(2q), and
sigma^a the pseudo-power on supp(sigma). Powers are summed in the log domain
and differences from 1 go through expm1, so values stay accurate both near
q = 1 and for q up to env.Q_CAP. Logarithms are natural.
"""

import math

import numpy as np
from scipy.special import entr

from cstre import env
from cstre.linalg import (
    DensityMatrix,
    HermitianOperator,
    Spectrum,
    eig,
    embed_identity,
    frac_power_on_support,
    log_power_sum,
    partial_trace,
    support_projector,
)
from cstre.schema import (
    BipartiteCut,
    DimensionMismatchError,
    EntropyReport,
    InvalidParameterError,
    Method,
    NotPositiveError,
    SupportViolationError,
)

__all__ = [
    "conditioning_operator",
    "sandwiched_spectrum",
    "sandwiched_q_trace",
    "cstre",
    "sandwiched_renyi_conditional",
    "ar_conditional",
    "von_neumann_entropy",
    "von_neumann_conditional",
    "tsallis_relative",
    "sandwiched_tsallis_relative",
]


def _check_q(q: float) -> float:
    q = float(q)
    if not 0 < q <= env.Q_CAP:
        raise InvalidParameterError(
            f"q={q} outside (0, {env.Q_CAP:g}]; use the q -> inf limit beyond the cap",
            details=q,
        )
    return q


def _as_operator(op: "HermitianOperator | DensityMatrix") -> HermitianOperator:
    return op.op if isinstance(op, DensityMatrix) else op


def leaked_weight(rho: DensityMatrix, sigma: "HermitianOperator | DensityMatrix") -> float:
    """Tr[(I - P) rho (I - P)] with P the support projector of sigma."""
    projector = support_projector(sigma)
    inside = float(np.real(np.trace(projector @ rho.matrix)))
    return max(rho.op.trace() - inside, 0.0)


def _check_support(rho: DensityMatrix, sigma: "HermitianOperator | DensityMatrix") -> None:
    leaked = leaked_weight(rho, sigma)
    if leaked > env.SUPPORT_LEAK_TOL:
        raise SupportViolationError(
            f"rho has weight {leaked:.3e} outside the support of sigma", details=leaked
        )


def conditioning_operator(rho_ab: DensityMatrix, cut: BipartiteCut) -> HermitianOperator:
    """I_A (x) rho_B, with rho_B = Tr_A rho_AB and factors in their original slots."""
    cut.validate_for(rho_ab.n_factors)
    rho_b = partial_trace(rho_ab, cut.b_factors)
    return embed_identity(rho_b, rho_ab.dims, cut.b_factors)


def sandwiched_spectrum(
    rho: DensityMatrix, sigma: "HermitianOperator | DensityMatrix", exponent: float
) -> Spectrum:
    """
    Eigenvalues of sigma^exponent rho sigma^exponent, after the support check.

    With rho = W W^dagger on supp(rho), the nonzero eigenvalues are the squared
    singular values of sigma^exponent W, nonnegative however small.
    The rest of the spectrum is padded with zeros.
    """
    sigma_op = _as_operator(sigma)
    if sigma_op.order != rho.op.order:
        raise DimensionMismatchError(
            f"rho has order {rho.op.order} but sigma has order {sigma_op.order}"
        )
    _check_support(rho, sigma_op)
    power = frac_power_on_support(sigma_op, exponent).matrix
    rho_spectrum = eig(rho)
    assert rho_spectrum.eigenvectors is not None
    on_support = rho_spectrum.eigenvalues > env.SUPPORT_TOL
    factor = rho_spectrum.eigenvectors[:, on_support] * np.sqrt(rho_spectrum.eigenvalues[on_support])
    singular = np.linalg.svd(power @ factor, compute_uv=False)
    values = np.zeros(rho.op.order)
    values[: singular.size] = singular**2
    return Spectrum(values)


def _log_sandwiched_q_trace(
    rho: DensityMatrix, sigma: "HermitianOperator | DensityMatrix", q: float
) -> tuple[float, Spectrum]:
    spectrum = sandwiched_spectrum(rho, sigma, (1.0 - q) / (2.0 * q))
    # supp(rho) was applied above; every positive eigenvalue counts
    return log_power_sum(spectrum, q, floor=0.0), spectrum


def sandwiched_q_trace(
    rho: DensityMatrix, sigma: "HermitianOperator | DensityMatrix", q: float
) -> tuple[float, Spectrum]:
    """
    Q~_q(rho||sigma) and the spectrum of sigma^a rho sigma^a.

    Raises:
        InvalidParameterError: q outside (0, env.Q_CAP].
        SupportViolationError: rho leaks more than env.SUPPORT_LEAK_TOL
            outside supp(sigma); details carry the leaked weight.
    """
    q = _check_q(q)
    log_value, spectrum = _log_sandwiched_q_trace(rho, sigma, q)
    return math.exp(log_value) if log_value < 709.0 else math.inf, spectrum


def _ratio_minus_one_over(log_value: float, q: float) -> float:
    """(exp(log_value) - 1)/(1 - q), overflow-safe."""
    if log_value > 709.0:
        return -math.inf if q > 1 else math.inf
    return float(np.expm1(log_value)) / (1.0 - q)


def cstre(rho_ab: DensityMatrix, cut: BipartiteCut, q: float) -> EntropyReport:
    """
    Conditional sandwiched Tsallis relative entropy D~_q(rho_AB || rho_B).
    Negative values at q > 1 certify entanglement across the cut. q = 1
    returns the von Neumann conditional entropy.
    """
    q = _check_q(q)
    if q == 1.0:
        return von_neumann_conditional(rho_ab, cut)
    sigma = conditioning_operator(rho_ab, cut)
    log_value, spectrum = _log_sandwiched_q_trace(rho_ab, sigma, q)
    return EntropyReport(
        value=_ratio_minus_one_over(log_value, q),
        q=q,
        method=Method.CSTRE,
        sandwiched_spectrum=spectrum.eigenvalues.tolist(),
    )


def sandwiched_renyi_conditional(rho_ab: DensityMatrix, cut: BipartiteCut, q: float) -> EntropyReport:
    q = _check_q(q)
    if q == 1.0:
        return von_neumann_conditional(rho_ab, cut)
    sigma = conditioning_operator(rho_ab, cut)
    log_value, spectrum = _log_sandwiched_q_trace(rho_ab, sigma, q)
    if not math.isfinite(log_value):
        raise NotPositiveError("sandwiched q-trace vanished; Renyi entropy undefined", details=log_value)
    return EntropyReport(
        value=log_value / (1.0 - q),
        q=q,
        method=Method.SANDWICHED_RENYI,
        sandwiched_spectrum=spectrum.eigenvalues.tolist(),
    )


def ar_conditional(rho_ab: DensityMatrix, cut: BipartiteCut, q: float) -> EntropyReport:
    """Abe-Rajagopal q-conditional entropy, the commuting special case of CSTRE."""
    q = _check_q(q)
    if q == 1.0:
        return von_neumann_conditional(rho_ab, cut)
    cut.validate_for(rho_ab.n_factors)
    rho_b = partial_trace(rho_ab, cut.b_factors)
    log_ab = log_power_sum(eig(rho_ab, keep_vectors=False), q)
    log_b = log_power_sum(eig(rho_b, keep_vectors=False), q)
    return EntropyReport(value=_ratio_minus_one_over(log_ab - log_b, q), q=q, method=Method.AR)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum e ln e over the spectrum, with 0 ln 0 = 0."""
    values = np.clip(eig(rho, keep_vectors=False).eigenvalues, 0.0, None)
    return float(np.sum(entr(values)))


def von_neumann_conditional(rho_ab: DensityMatrix, cut: BipartiteCut) -> EntropyReport:
    cut.validate_for(rho_ab.n_factors)
    rho_b = partial_trace(rho_ab, cut.b_factors)
    value = von_neumann_entropy(rho_ab) - von_neumann_entropy(rho_b)
    return EntropyReport(value=value, q=1.0, method=Method.VON_NEUMANN)


def tsallis_relative(rho: DensityMatrix, sigma: "HermitianOperator | DensityMatrix", q: float) -> float:
    """(Tr rho^q sigma^(1-q) - 1)/(q - 1) with powers taken on the supports."""
    q = _check_q(q)
    if q == 1.0:
        raise InvalidParameterError("q = 1 is the Umegaki limit, not a Tsallis value")
    _check_support(rho, sigma)
    rho_power = frac_power_on_support(rho, q).matrix
    sigma_power = frac_power_on_support(_as_operator(sigma), 1.0 - q).matrix
    trace = float(np.real(np.trace(rho_power @ sigma_power)))
    return (trace - 1.0) / (q - 1.0)


def sandwiched_tsallis_relative(
    rho: DensityMatrix, sigma: "HermitianOperator | DensityMatrix", q: float
) -> float:
    q = _check_q(q)
    if q == 1.0:
        raise InvalidParameterError("q = 1 is the Umegaki limit, not a Tsallis value")
    log_value, _ = _log_sandwiched_q_trace(rho, sigma, q)
    return -_ratio_minus_one_over(log_value, q)
