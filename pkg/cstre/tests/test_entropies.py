"""Tests for the entropy functionals."""

import math

import numpy as np
import pytest

from cstre.checks import (
    ghz_single_qubit_conditioning_gap,
    lieb_thirring_violation,
    random_density_matrix,
    random_separable_state,
)
from cstre.entropies import (
    ar_conditional,
    conditioning_operator,
    cstre,
    sandwiched_q_trace,
    sandwiched_renyi_conditional,
    sandwiched_tsallis_relative,
    tsallis_relative,
    von_neumann_conditional,
)
from cstre.linalg import DensityMatrix, partial_trace
from cstre.schema import (
    BipartiteCut,
    DimensionMismatchError,
    InvalidParameterError,
    Method,
    SupportViolationError,
)
from cstre.state_factory import (
    compress_symmetric,
    noisy_ghz_family,
    noisy_w_family,
    noisy_wwbar_family,
    resolve_cut,
)

CUT = BipartiteCut(a_factors=(0,), b_factors=(1,))


@pytest.mark.parametrize("q", [1.5, 2.0, 5.0])
def test_bell_state_values_are_exact(bell_state, q):
    # sigma = I/2, so Q~ = 2^(q-1)
    expected = (2.0 ** (q - 1.0) - 1.0) / (1.0 - q)
    assert cstre(bell_state, CUT, q).value == pytest.approx(expected, rel=1e-12)
    assert ar_conditional(bell_state, CUT, q).value == pytest.approx(expected, rel=1e-12)


def test_bell_state_von_neumann(bell_state):
    assert von_neumann_conditional(bell_state, CUT).value == pytest.approx(-math.log(2.0))


def test_q_equal_one_routes_to_von_neumann(bell_state):
    report = cstre(bell_state, CUT, 1.0)
    assert report.method is Method.VON_NEUMANN
    assert report.value == pytest.approx(-math.log(2.0))


def test_cstre_report_carries_sandwiched_spectrum(bell_state):
    report = cstre(bell_state, CUT, 2.0)
    assert report.method is Method.CSTRE
    assert report.sandwiched_spectrum[0] == pytest.approx(math.sqrt(2.0))
    assert len(report.sandwiched_spectrum) == 4


def test_conditioning_operator_on_first_factor(rng):
    rho = DensityMatrix.from_matrix(random_density_matrix(rng, 6), (2, 3))
    cut = BipartiteCut(a_factors=(1,), b_factors=(0,))
    sigma = conditioning_operator(rho, cut)
    np.testing.assert_allclose(sigma.matrix, np.kron(partial_trace(rho, [0]).matrix, np.eye(3)), atol=1e-14)


@pytest.mark.parametrize("q", [0.5, 1.5, 3.0])
def test_cstre_equals_ar_for_maximally_mixed_marginal(rng, q):
    # Werner-like mixture: rho_B = I/2
    mix = 0.7 * np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2 + 0.3 * np.eye(4) / 4
    rho = DensityMatrix.from_matrix(mix, (2, 2))
    assert cstre(rho, CUT, q).value == pytest.approx(ar_conditional(rho, CUT, q).value, abs=1e-12)


@pytest.mark.parametrize("factory", [noisy_w_family, noisy_ghz_family, noisy_wwbar_family])
@pytest.mark.parametrize("n,q", [(4, 2.0), (6, 5.0)])
def test_cstre_is_non_increasing_in_x(factory, n, q):
    family, cut = resolve_cut(factory(n), "1:rest")
    values = np.array([cstre(family.evaluate(float(x)), cut, q).value for x in np.linspace(0.0, 1.0, 101)])
    steps = np.diff(values)
    assert np.all(steps <= 1e-10 * np.maximum(1.0, np.abs(values[1:])))


def test_ghz_conditioned_on_one_qubit_matches_ar():
    assert ghz_single_qubit_conditioning_gap(4) < 1e-9


def test_ghz_cstre_matches_ar_relatively_at_large_q():
    rho = compress_symmetric(noisy_ghz_family(4), 3).evaluate(0.9)
    value = cstre(rho, CUT, 50.0).value
    assert value < -1e10
    assert value == pytest.approx(ar_conditional(rho, CUT, 50.0).value, rel=1e-9)


def test_renyi_is_log_of_the_q_trace(rng):
    rho = DensityMatrix.from_matrix(random_density_matrix(rng, 4), (2, 2))
    q = 2.5
    tsallis = cstre(rho, CUT, q).value
    renyi = sandwiched_renyi_conditional(rho, CUT, q).value
    assert renyi == pytest.approx(math.log1p((1.0 - q) * tsallis) / (1.0 - q), rel=1e-10)


def test_values_approach_von_neumann_near_q_one(rng):
    rho = DensityMatrix.from_matrix(random_density_matrix(rng, 6), (2, 3))
    reference = von_neumann_conditional(rho, CUT).value
    for q in (1.0 - 1e-6, 1.0 + 1e-6):
        assert cstre(rho, CUT, q).value == pytest.approx(reference, abs=1e-4)
        assert ar_conditional(rho, CUT, q).value == pytest.approx(reference, abs=1e-4)


@pytest.mark.parametrize("q", [1.5, 2.0, 5.0, 50.0])
def test_separable_states_are_nonnegative(rng, q):
    for _ in range(20):
        rho = random_separable_state(rng, (2, 3))
        assert cstre(rho, CUT, q).value >= -1e-9


def test_lieb_thirring_on_random_triples():
    assert lieb_thirring_violation(samples=60) <= 1e-10


def test_commuting_states_give_traditional_trace():
    rho = DensityMatrix.from_matrix(np.diag([0.5, 0.3, 0.2]), (3,))
    sigma = DensityMatrix.from_matrix(np.diag([0.2, 0.3, 0.5]), (3,))
    q = 2.0
    value, _ = sandwiched_q_trace(rho, sigma, q)
    expected = sum(r**q * s ** (1 - q) for r, s in [(0.5, 0.2), (0.3, 0.3), (0.2, 0.5)])
    assert value == pytest.approx(expected, rel=1e-12)
    assert sandwiched_tsallis_relative(rho, sigma, q) == pytest.approx(tsallis_relative(rho, sigma, q), rel=1e-12)


@pytest.mark.parametrize("q", [0.05, 0.3])
def test_small_q_keeps_tiny_sandwiched_eigenvalues(q):
    # product state: Q~ = Tr rho_A^q exactly, though sigma^a rho sigma^a has eigenvalues near 1e-40
    rho = DensityMatrix.from_matrix(np.kron(np.eye(2) / 2, np.diag([0.99, 0.01])), (2, 2))
    sigma = conditioning_operator(rho, CUT)
    value, spectrum = sandwiched_q_trace(rho, sigma, q)
    assert value == pytest.approx(2 * 0.5**q, rel=1e-9)
    assert spectrum.eigenvalues.min() >= 0.0
    assert cstre(rho, CUT, q).value == pytest.approx((2 * 0.5**q - 1) / (1 - q), rel=1e-9)


def test_support_violation_is_reported(rng):
    rho = DensityMatrix.from_matrix(random_density_matrix(rng, 2), (2,))
    sigma = DensityMatrix.from_matrix(np.diag([1.0, 0.0]), (2,))
    with pytest.raises(SupportViolationError) as info:
        sandwiched_tsallis_relative(rho, sigma, 2.0)
    assert info.value.details > 1e-9


def test_sandwiched_trace_rejects_mismatched_orders():
    rho = DensityMatrix.maximally_mixed((2,))
    with pytest.raises(DimensionMismatchError):
        sandwiched_q_trace(rho, DensityMatrix.maximally_mixed((3,)), 2.0)


@pytest.mark.parametrize("q", [0.0, -1.0, 2e6])
def test_q_outside_range(bell_state, q):
    with pytest.raises(InvalidParameterError):
        cstre(bell_state, CUT, q)


def test_tsallis_relative_refuses_q_one():
    rho = DensityMatrix.maximally_mixed((2,))
    with pytest.raises(InvalidParameterError):
        tsallis_relative(rho, rho, 1.0)


def test_large_q_keeps_the_sign():
    family, cut = resolve_cut(noisy_w_family(3), "1:rest")
    rho = family.evaluate(0.5)
    assert math.isfinite(cstre(rho, cut, 200.0).value)
    assert cstre(rho, cut, 200.0).value < 0
    # May overflow to -inf; the sign survives.
    assert cstre(rho, cut, 1e5).value < 0
