"""Tests for verdicts, thresholds and convergence traces."""

import math

import numpy as np
import pytest

from cstre.closed_forms import closed_form_thresholds
from cstre.linalg import DensityMatrix, min_eigenvalue
from cstre.schema import BipartiteCut, Criterion, InvalidParameterError, Verdict
from cstre.separability import (
    ar_qinf_verdict,
    classify,
    convergence_trace,
    criterion_for,
    criterion_value,
    cstre_qinf_value,
    cstre_qinf_verdict,
    ppt_min_eigenvalue,
    ppt_threshold,
    reduction_operator,
    threshold,
)
from cstre.state_factory import (
    isotropic_qutrit_family,
    noisy_ghz_family,
    noisy_w_family,
    qubit_qutrit_x_family,
    resolve_cut,
)

CUT = BipartiteCut(a_factors=(0,), b_factors=(1,))


def _resolved(factory, n, spec="1:rest"):
    return resolve_cut(factory(n), spec)


def test_classify():
    assert classify(-1e-3) is Verdict.NEGATIVE
    assert classify(1e-3) is Verdict.NONNEGATIVE
    assert classify(1e-12) is Verdict.BOUNDARY


def test_bell_state_limit_value(bell_state):
    assert cstre_qinf_value(bell_state, CUT) == pytest.approx(-1.0)
    assert cstre_qinf_verdict(bell_state, CUT) is Verdict.NEGATIVE
    assert min_eigenvalue(reduction_operator(bell_state, CUT)) == pytest.approx(-0.5)


def test_ppt_min_eigenvalue_of_bell_state(bell_state):
    assert ppt_min_eigenvalue(bell_state, CUT) == pytest.approx(-0.5)
    mixed = DensityMatrix.from_matrix(np.eye(4) / 4, (2, 2))
    assert ppt_min_eigenvalue(mixed, CUT) == pytest.approx(0.25)


def test_product_state_limit_is_nonnegative():
    rho = DensityMatrix.maximally_mixed((2, 3))
    assert cstre_qinf_verdict(rho, CUT) is not Verdict.NEGATIVE


def test_ar_limit_tie_is_broken_by_multiplicity():
    # Top eigenvalue 1/2 appears once in rho_AB but twice in rho_B = I/2.
    rho = DensityMatrix.from_matrix(np.diag([0.5, 0.25, 0.0, 0.25]), (2, 2))
    assert ar_qinf_verdict(rho, CUT) is Verdict.NONNEGATIVE


def test_criterion_for_routes_q():
    assert criterion_for("cstre", math.inf) is Criterion.CSTRE_QINF
    assert criterion_for("cstre", 2.0) is Criterion.CSTRE_AT_Q
    assert criterion_for("renyi", math.inf) is Criterion.CSTRE_QINF
    assert criterion_for("ar", 3.0) is Criterion.AR_AT_Q
    assert criterion_for("ppt", None) is Criterion.PPT
    with pytest.raises(InvalidParameterError):
        criterion_for("cstre", None)
    with pytest.raises(InvalidParameterError):
        criterion_for("negativity", 2.0)


def test_criterion_value_needs_q():
    with pytest.raises(InvalidParameterError):
        criterion_value(DensityMatrix.maximally_mixed((2, 2)), CUT, Criterion.CSTRE_AT_Q)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
def test_w_cstre_thresholds_match_closed_form(n):
    family, cut = _resolved(noisy_w_family, n)
    result = threshold(family, cut, Criterion.CSTRE_QINF, tol=1e-10)
    assert result.crossing_found
    assert result.x_star == pytest.approx(closed_form_thresholds("w", n), abs=1e-7)


@pytest.mark.parametrize("n", [3, 5, 10])
def test_w_ar_thresholds(n):
    family, cut = _resolved(noisy_w_family, n)
    result = threshold(family, cut, Criterion.AR_QINF, tol=1e-10)
    assert result.x_star == pytest.approx(1.0 / (n + 2), abs=1e-7)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_ghz_cstre_and_ppt_agree(n):
    family, cut = _resolved(noisy_ghz_family, n)
    cstre_x = threshold(family, cut, Criterion.CSTRE_QINF, tol=1e-10).x_star
    ppt_x = ppt_threshold(family, cut, tol=1e-10).x_star
    assert cstre_x == pytest.approx(2.0 / (n * n + n + 2), abs=1e-7)
    assert ppt_x == pytest.approx(cstre_x, abs=1e-6)


def test_isotropic_threshold_is_one_third():
    family, cut = resolve_cut(isotropic_qutrit_family(), "1:1")
    assert threshold(family, cut, Criterion.CSTRE_QINF, tol=1e-10).x_star == pytest.approx(1 / 3, abs=1e-9)


def test_x_state_qubit_side_has_no_crossing():
    family, cut = resolve_cut(qubit_qutrit_x_family(), "a=1")
    result = threshold(family, cut, Criterion.CSTRE_QINF)
    assert not result.crossing_found
    assert result.x_star is None
    assert result.end_values[1] >= -1e-12


def test_threshold_at_infinite_q_uses_limit():
    family, cut = _resolved(noisy_w_family, 4)
    result = threshold(family, cut, Criterion.CSTRE_AT_Q, q=math.inf, tol=1e-10)
    assert result.criterion is Criterion.CSTRE_QINF
    assert result.x_star == pytest.approx(closed_form_thresholds("w", 4), abs=1e-7)


def test_renyi_crossing_equals_cstre_crossing():
    family, cut = _resolved(noisy_w_family, 4)
    tsallis = threshold(family, cut, Criterion.CSTRE_AT_Q, q=3.0, tol=1e-10).x_star
    renyi = threshold(family, cut, Criterion.RENYI_AT_Q, q=3.0, tol=1e-10).x_star
    assert renyi == pytest.approx(tsallis, abs=1e-8)


def test_threshold_validates_arguments():
    family, cut = _resolved(noisy_w_family, 3)
    with pytest.raises(InvalidParameterError):
        threshold(family, cut, Criterion.CSTRE_QINF, tol=1e-12)
    with pytest.raises(InvalidParameterError):
        threshold(family, cut, Criterion.CSTRE_QINF, bracket=(0.5, 0.5))


def test_threshold_is_deterministic():
    family, cut = _resolved(noisy_w_family, 6)
    first = threshold(family, cut, Criterion.CSTRE_AT_Q, q=3.0)
    second = threshold(family, cut, Criterion.CSTRE_AT_Q, q=3.0)
    assert first == second
    assert first.model_dump_json() == second.model_dump_json()


def test_convergence_trace_approaches_the_limit():
    family, cut = _resolved(noisy_w_family, 5)
    trace = convergence_trace(family, cut, Criterion.CSTRE_QINF, [2.0, 10.0, 100.0, math.inf], tol=1e-9)
    crossings = trace.crossings()
    assert all(x is not None for x in crossings)
    assert crossings[0] > crossings[-1]
    assert crossings[-1] == pytest.approx(closed_form_thresholds("w", 5), abs=1e-7)
    assert trace.criterion is Criterion.CSTRE_AT_Q


def test_ar_trace_at_large_q():
    family, cut = _resolved(noisy_w_family, 8)
    trace = convergence_trace(family, cut, Criterion.AR_AT_Q, [1e4], max_concurrency=1)
    assert trace.rows[0].x_crossing == pytest.approx(0.1, abs=5e-4)


@pytest.mark.parametrize("factory,n", [(noisy_w_family, 5), (noisy_ghz_family, 6)])
@pytest.mark.parametrize("criterion", [Criterion.CSTRE_AT_Q, Criterion.AR_AT_Q])
def test_trace_crossings_decrease_with_q(factory, n, criterion):
    family, cut = _resolved(factory, n)
    trace = convergence_trace(family, cut, criterion, [1.5, 2.0, 5.0, 10.0, 100.0, math.inf])
    assert all(x is not None for x in trace.crossings())
    assert trace.is_monotone()


def test_ghz_cstre_trace_converges_slower_than_ar():
    family, cut = _resolved(noisy_ghz_family, 6)
    grid = [1.5, 2.0, 5.0, 10.0, 100.0, math.inf]
    limit = closed_form_thresholds("ghz", 6)
    cstre_trace = convergence_trace(family, cut, Criterion.CSTRE_AT_Q, grid)
    ar_trace = convergence_trace(family, cut, Criterion.AR_AT_Q, grid)
    assert cstre_trace.rows[-1].x_crossing == pytest.approx(limit, abs=1e-7)
    assert ar_trace.rows[-1].x_crossing == pytest.approx(limit, abs=1e-7)

    def far_from_limit(trace):
        return sum(1 for x in trace.crossings() if x > limit + 1e-3)

    assert far_from_limit(cstre_trace) >= far_from_limit(ar_trace)
    assert cstre_trace.rows[3].x_crossing > ar_trace.rows[3].x_crossing + 0.01


def test_convergence_trace_rejects_q_at_most_one():
    family, cut = _resolved(noisy_w_family, 3)
    with pytest.raises(InvalidParameterError):
        convergence_trace(family, cut, Criterion.CSTRE_AT_Q, [0.5, 2.0])
    with pytest.raises(InvalidParameterError):
        convergence_trace(family, cut, Criterion.PPT, [2.0])
