"""Tests for the named regression checks and the acceptance gate."""

import pytest

from cstre.checks import (
    acceptance_checks,
    compressed_full_gap,
    format_report,
    q_to_one_deviation,
    separable_cstre_minimum,
    special_case_checks,
    x_state_qubit_side_values,
)
from cstre.schema import CheckResult, Verdict

SPECIAL_NAMES = {
    "wwbar_n3_cstre_ppt",
    "wwbar_n3_ar",
    "wwbar_n4_to_8_closed_form",
    "w_n4_2to2_cstre",
    "ghz_n4_2to2_cstre",
    "isotropic_qutrit",
    "x_state_qutrit_side",
    "x_state_qubit_side_nonnegative",
    "nonsymmetric_w3_cstre",
    "nonsymmetric_w3_ar",
}


def test_all_special_cases_pass():
    results = special_case_checks()
    assert {r.name for r in results} == SPECIAL_NAMES
    failed = [r for r in results if not r.passed]
    assert not failed, format_report(failed)


def test_isotropic_check_survives_tight_tolerance():
    results = {r.name: r for r in special_case_checks(tolerance=1e-9)}
    assert results["isotropic_qutrit"].passed


def test_qubit_side_of_x_state_is_never_negative():
    rows = x_state_qubit_side_values(points=21)
    assert len(rows) == 21
    assert all(0 < x < 0.25 for x, _, _ in rows)
    assert all(verdict is not Verdict.NEGATIVE and lowest >= -1e-9 for _, verdict, lowest in rows)


def test_property_helpers():
    assert separable_cstre_minimum(samples=40) >= -1e-9
    assert q_to_one_deviation() <= 5e-4
    assert compressed_full_gap(max_qubits=5) <= 1e-10


def test_acceptance_gate_passes():
    results = acceptance_checks()
    assert len(results) == 9
    failed = [r for r in results if not r.passed]
    assert not failed, format_report(failed)


def test_format_report_counts_passes():
    results = [
        CheckResult(name="a", expected="1", computed="1", tolerance=1e-3, passed=True),
        CheckResult(name="b", expected="1", computed="2", tolerance=1e-3, passed=False, detail="off"),
    ]
    text = format_report(results)
    assert "1/2 checks passed" in text
    assert "FAIL" in text and "(off)" in text
