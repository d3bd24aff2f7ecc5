"""Tests for closed-form eigenvalues and thresholds."""

import math

import pytest

from cstre.closed_forms import (
    asymptotic_threshold,
    closed_form_ghz_eigs,
    closed_form_thresholds,
    closed_form_w_eigs,
)
from cstre.schema import InvalidParameterError, UnsupportedCombinationError
from cstre.tables import closed_form_residual

LATTICE = [(q, x) for q in (0.5, 1.5, 2.0, 5.0, 20.0) for x in (0.0, 0.05, 0.3, 0.9)]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
@pytest.mark.parametrize("kind", ["w", "ghz"])
def test_closed_forms_match_dense_spectra(kind, n):
    worst = max(closed_form_residual(kind, n, q, x) for q, x in LATTICE)
    assert worst <= 1e-10


@pytest.mark.parametrize("n", [3, 4, 7])
@pytest.mark.parametrize("x", [0.0, 0.2, 0.7, 1.0])
def test_unit_trace_at_q_one(n, x):
    for rows in (closed_form_w_eigs(n, 1.0, x), closed_form_ghz_eigs(n, 1.0, x)):
        assert sum(value * fold for _, value, fold in rows) == pytest.approx(1.0, abs=1e-12)
        assert sum(fold for _, _, fold in rows) == n + 1


def test_ghz_has_no_mu_one_at_three_qubits():
    names = [name for name, _, _ in closed_form_ghz_eigs(3, 2.0, 0.4)]
    assert names == ["mu_2", "mu_3", "mu_4"]


def test_closed_forms_validate_inputs():
    with pytest.raises(InvalidParameterError):
        closed_form_w_eigs(2, 2.0, 0.1)
    with pytest.raises(InvalidParameterError):
        closed_form_w_eigs(4, 0.0, 0.1)
    with pytest.raises(InvalidParameterError):
        closed_form_ghz_eigs(4, 2.0, 1.5)


def test_threshold_values():
    assert closed_form_thresholds("w", 5) == pytest.approx(0.0883, abs=5e-4)
    assert closed_form_thresholds("w", 8) == pytest.approx(0.0538, abs=5e-4)
    assert closed_form_thresholds("w", 5, "ar") == pytest.approx(1.0 / 7.0)
    assert closed_form_thresholds("ghz", 6) == pytest.approx(0.04545, abs=5e-5)
    assert closed_form_thresholds("wwbar", 4) == pytest.approx(2.0 / 22.0)


def test_unsupported_thresholds():
    with pytest.raises(UnsupportedCombinationError):
        closed_form_thresholds("wwbar", 3)
    with pytest.raises(UnsupportedCombinationError):
        closed_form_thresholds("cluster", 4)
    with pytest.raises(UnsupportedCombinationError):
        closed_form_thresholds("w", 4, "ppt")
    with pytest.raises(UnsupportedCombinationError):
        closed_form_thresholds("ghz", 2)


def test_asymptotic_forms():
    assert asymptotic_threshold("w", 64) == pytest.approx((math.sqrt(2) - 1) / 64)
    assert closed_form_thresholds("w", 64) / asymptotic_threshold("w", 64) == pytest.approx(1.0, abs=0.02)
    assert closed_form_thresholds("ghz", 64) / asymptotic_threshold("ghz", 64) == pytest.approx(1.0, abs=0.05)
    with pytest.raises(UnsupportedCombinationError):
        asymptotic_threshold("wwbar", 10)
