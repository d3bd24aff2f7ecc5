"""Tests for the state families and the family/cut factory."""

import math

import numpy as np
import pytest

from cstre.dicke import dicke_basis, dicke_state
from cstre.families import CompressedSymmetricFamily, SymmetricNoisyFamily
from cstre.linalg import eig, min_eigenvalue, partial_trace
from cstre.schema import BipartiteCut, FamilyDomainError, FamilyName, InvalidCutError, InvalidParameterError
from cstre.state_factory import (
    build_family,
    compress_symmetric,
    isotropic_qutrit_family,
    noisy_ghz_family,
    noisy_w_family,
    noisy_wwbar_family,
    nonsymmetric_noisy_family,
    parse_cut,
    qubit_qutrit_x_family,
    qudit_noisy_family,
    resolve_cut,
    symmetric_noisy_family,
)


def test_noisy_w_at_zero_is_symmetric_white_noise():
    rho = noisy_w_family(3).evaluate(0.0)
    np.testing.assert_allclose(rho.matrix, dicke_basis(3).projector() / 4, atol=1e-14)


def test_family_label_names_parameters():
    assert noisy_w_family(8).label == "NoisyW(N=8)"
    assert isotropic_qutrit_family().label == "IsotropicQutrit"


@pytest.mark.parametrize("x", [-0.01, 1.01])
def test_family_rejects_x_outside_domain(x):
    with pytest.raises(FamilyDomainError):
        noisy_ghz_family(3).evaluate(x)


def test_x_state_domain_ends_at_a_quarter():
    family = qubit_qutrit_x_family()
    assert min_eigenvalue(family.evaluate(0.25)) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(FamilyDomainError):
        family.evaluate(0.3)


@pytest.mark.parametrize("x", [0.0, 1.0 / 9.0, 0.5, 1.0])
def test_isotropic_family_is_a_state(x):
    rho = isotropic_qutrit_family().evaluate(x)
    assert min_eigenvalue(rho) > -1e-12


def test_symmetric_family_accepts_full_vector():
    family = symmetric_noisy_family(3, dicke_state(3, 2))
    assert isinstance(family, SymmetricNoisyFamily)
    np.testing.assert_allclose(family.coefficients, [0, 0, 1, 0], atol=1e-14)


def test_symmetric_family_rejects_non_symmetric_vector():
    psi = np.zeros(8)
    psi[1] = 1.0
    with pytest.raises(FamilyDomainError):
        SymmetricNoisyFamily.from_vector(psi)


def test_only_symmetric_families_compress():
    family = nonsymmetric_noisy_family(3, dicke_state(3, 1))
    with pytest.raises(FamilyDomainError):
        compress_symmetric(family, 1)


@pytest.mark.parametrize("n,m", [(3, 1), (4, 2), (6, 1)])
def test_compressed_spectrum_matches_full_space(n, m):
    family = noisy_w_family(n)
    compressed = compress_symmetric(family, m)
    assert compressed.dims == (m + 1, n - m + 1)
    full = eig(family.evaluate(0.4), keep_vectors=False).eigenvalues[: n + 1]
    small = eig(compressed.evaluate(0.4), keep_vectors=False).eigenvalues[: n + 1]
    np.testing.assert_allclose(small, full, atol=1e-12)


def test_large_symmetric_family_needs_compression():
    family = noisy_w_family(64)
    with pytest.raises(InvalidParameterError):
        family.evaluate(0.1)
    compressed = compress_symmetric(family, 1)
    assert compressed.evaluate(0.1).dims == (2, 64)


def _single_qubit_marginal(family, n, x):
    """Marginal of the last qubit, read off the m = N-1 compressed form."""
    return partial_trace(compress_symmetric(family, n - 1).evaluate(x), [1]).matrix


@pytest.mark.parametrize("n", range(3, 11))
def test_w_single_qubit_marginal(n):
    for x in np.linspace(0.0, 1.0, 11):
        expected = np.diag([n + (n - 2) * x, n - (n - 2) * x]) / (2 * n)
        np.testing.assert_allclose(_single_qubit_marginal(noisy_w_family(n), n, x), expected, atol=1e-12)


def test_w_single_qubit_marginal_in_full_space():
    rho = noisy_w_family(4).evaluate(0.3)
    expected = np.diag([4 + 2 * 0.3, 4 - 2 * 0.3]) / 8
    for qubit in range(4):
        np.testing.assert_allclose(partial_trace(rho, [qubit]).matrix, expected, atol=1e-12)


@pytest.mark.parametrize("factory", [noisy_ghz_family, noisy_wwbar_family])
@pytest.mark.parametrize("n", [4, 5, 8])
def test_ghz_and_wwbar_marginals_are_maximally_mixed(factory, n):
    for x in np.linspace(0.0, 1.0, 11):
        np.testing.assert_allclose(_single_qubit_marginal(factory(n), n, x), np.eye(2) / 2, atol=1e-12)
    rho = factory(4).evaluate(0.7)
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, np.eye(2) / 2, atol=1e-12)


@pytest.mark.parametrize("x", [0.0, 0.1, 0.125, 0.25])
def test_x_state_marginals(x):
    rho = qubit_qutrit_x_family().evaluate(x)
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, np.eye(2) / 2, atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, [1]).matrix, np.diag([3.0, 2.0, 3.0]) / 8, atol=1e-14)


@pytest.mark.parametrize("x", [0.0, 1.0 / 3.0, 0.8])
def test_isotropic_marginals(x):
    rho = isotropic_qutrit_family().evaluate(x)
    for keep in (0, 1):
        np.testing.assert_allclose(partial_trace(rho, [keep]).matrix, np.eye(3) / 3, atol=1e-14)


@pytest.mark.parametrize(
    "family",
    [
        noisy_w_family(4),
        noisy_ghz_family(4),
        noisy_wwbar_family(4),
        compress_symmetric(noisy_w_family(6), 2),
        nonsymmetric_noisy_family(3, dicke_state(3, 1)),
        qudit_noisy_family(2, 3),
        isotropic_qutrit_family(),
        qubit_qutrit_x_family(),
    ],
    ids=lambda family: family.label,
)
def test_every_family_is_a_state_across_its_domain(family):
    lo, hi = family.domain
    for x in np.linspace(lo, hi, 101):
        rho = family.evaluate(float(x))
        assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-10)
        assert min_eigenvalue(rho) >= -1e-10


def test_qudit_family_defaults_to_ghz():
    family = qudit_noisy_family(2, 3)
    rho = family.evaluate(1.0)
    assert rho.matrix[0, 8] == pytest.approx(1.0 / 3.0)
    assert family.name is FamilyName.NOISY_QUDIT


@pytest.mark.parametrize(
    "name,kwargs,expected",
    [
        ("W", {"n": 4}, FamilyName.NOISY_W),
        ("ghz", {"n": 3}, FamilyName.NOISY_GHZ),
        ("wwbar", {"n": 5}, FamilyName.NOISY_WWBAR),
        ("nonsymmetric", {"n": 3, "psi": "w"}, FamilyName.NOISY_NON_SYMMETRIC),
        ("qudit", {"n": 2, "d": 3}, FamilyName.NOISY_QUDIT),
        ("isotropic", {}, FamilyName.ISOTROPIC_QUTRIT),
        ("xstate", {}, FamilyName.QUBIT_QUTRIT_X),
    ],
)
def test_build_family_selects_by_name(name, kwargs, expected):
    assert build_family(name, **kwargs).name is expected


def test_build_family_errors():
    with pytest.raises(InvalidParameterError):
        build_family("cluster", n=3)
    with pytest.raises(InvalidParameterError):
        build_family("w")
    with pytest.raises(InvalidParameterError):
        build_family("symmetric", n=3)


def test_build_family_reads_dicke_coefficient_file(tmp_path):
    path = tmp_path / "phi.json"
    amp = 1 / math.sqrt(2)
    path.write_text(f'{{"dicke_coefficients": [[0, 0], [{amp}, 0], [{amp}, 0], [0, 0]]}}')
    family = build_family("symmetric", custom_state=path)
    assert isinstance(family, SymmetricNoisyFamily) and family.n_qubits == 3


@pytest.mark.parametrize(
    "spec,a,b",
    [
        ("1:rest", (0,), (1, 2, 3)),
        ("2:2", (0, 1), (2, 3)),
        ("1:N-1", (0,), (1, 2, 3)),
        ("a=0,2", (0, 2), (1, 3)),
        ("a=3", (3,), (0, 1, 2)),
    ],
)
def test_parse_cut(spec, a, b):
    cut = parse_cut(spec, 4)
    assert cut.a_factors == a and cut.b_factors == b


@pytest.mark.parametrize("spec", ["1:2", "0:rest", "4:rest", "a=5", "half", "x:rest", "a=0,1,2,3"])
def test_parse_cut_rejects(spec):
    with pytest.raises(InvalidCutError):
        parse_cut(spec, 4)


def test_bipartite_cut_rejects_overlap():
    with pytest.raises(InvalidCutError):
        BipartiteCut(a_factors=(0,), b_factors=(0, 1))


def test_resolve_cut_compresses_symmetric_families():
    family, cut = resolve_cut(noisy_ghz_family(6), "2:rest")
    assert isinstance(family, CompressedSymmetricFamily)
    assert family.dims == (3, 5)
    assert cut.a_factors == (0,) and cut.b_factors == (1,)


def test_resolve_cut_keeps_general_families():
    family = nonsymmetric_noisy_family(3, dicke_state(3, 1))
    resolved, cut = resolve_cut(family, "a=1")
    assert resolved is family
    assert cut.a_factors == (1,) and cut.b_factors == (0, 2)
