"""
Factories for every state family, the family selector used by the CLI, and
cut resolution.
"""

import re
from pathlib import Path
from typing import Optional

import numpy as np

from cstre import utils
from cstre.dicke import (
    dicke_state,
    ghz_coefficients,
    ghz_state,
    qudit_ghz_state,
    qudit_w_state,
    w_coefficients,
    wwbar_coefficients,
    wwbar_state,
)
from cstre.families import (
    CompressedSymmetricFamily,
    IsotropicQutritFamily,
    QubitQutritXFamily,
    StateFamily,
    SymmetricNoisyFamily,
    WhiteNoiseFamily,
)
from cstre.schema import (
    BipartiteCut,
    FamilyDomainError,
    FamilyName,
    InvalidCutError,
    InvalidParameterError,
)
from cstre.state_io import load_pure_state

__all__ = [
    "symmetric_noisy_family",
    "noisy_w_family",
    "noisy_ghz_family",
    "noisy_wwbar_family",
    "nonsymmetric_noisy_family",
    "qudit_noisy_family",
    "isotropic_qutrit_family",
    "qubit_qutrit_x_family",
    "compress_symmetric",
    "build_family",
    "parse_cut",
    "resolve_cut",
    "FAMILY_CHOICES",
    "PURE_STATE_CHOICES",
]

FAMILY_CHOICES = ("w", "ghz", "wwbar", "symmetric", "nonsymmetric", "qudit", "isotropic", "xstate")
PURE_STATE_CHOICES = ("w", "ghz", "wwbar")


def symmetric_noisy_family(
    n_qubits: int,
    phi: np.ndarray,
    name: FamilyName = FamilyName.NOISY_SYMMETRIC_CUSTOM,
) -> SymmetricNoisyFamily:
    """
    phi is either N+1 Dicke coefficients or a 2^N computational-basis vector;
    the latter is projected onto the symmetric subspace and rejected if the
    residual reaches 1e-10.
    """
    vector = np.asarray(phi).reshape(-1)
    if vector.size == n_qubits + 1:
        return SymmetricNoisyFamily(n_qubits, vector, name=name)
    if vector.size != 2**n_qubits:
        raise InvalidParameterError(
            f"phi of length {vector.size} is neither N+1={n_qubits + 1} Dicke "
            f"coefficients nor a 2^N={2**n_qubits} vector"
        )
    return SymmetricNoisyFamily.from_vector(vector, name=name)


def noisy_w_family(n_qubits: int) -> SymmetricNoisyFamily:
    return SymmetricNoisyFamily(n_qubits, w_coefficients(n_qubits), name=FamilyName.NOISY_W)


def noisy_ghz_family(n_qubits: int) -> SymmetricNoisyFamily:
    return SymmetricNoisyFamily(n_qubits, ghz_coefficients(n_qubits), name=FamilyName.NOISY_GHZ)


def noisy_wwbar_family(n_qubits: int) -> SymmetricNoisyFamily:
    return SymmetricNoisyFamily(
        n_qubits, wwbar_coefficients(n_qubits), name=FamilyName.NOISY_WWBAR
    )


def nonsymmetric_noisy_family(n_qubits: int, psi: np.ndarray) -> WhiteNoiseFamily:
    """((1-x)/2^N) I + x |psi><psi| for any N-qubit unit vector psi."""
    return WhiteNoiseFamily(
        FamilyName.NOISY_NON_SYMMETRIC, (2,) * n_qubits, psi, parameters={"N": n_qubits}
    )


def qudit_noisy_family(n_sites: int, d: int, psi: Optional[np.ndarray] = None) -> WhiteNoiseFamily:
    """((1-x)/d^N) I + x |psi><psi|; psi defaults to the d-level GHZ state."""
    if psi is None:
        psi = qudit_ghz_state(n_sites, d)
    return WhiteNoiseFamily(
        FamilyName.NOISY_QUDIT, (d,) * n_sites, psi, parameters={"N": n_sites, "d": d}
    )


def isotropic_qutrit_family() -> IsotropicQutritFamily:
    return IsotropicQutritFamily()


def qubit_qutrit_x_family() -> QubitQutritXFamily:
    return QubitQutritXFamily()


def compress_symmetric(rho_family: StateFamily, m_split: int) -> CompressedSymmetricFamily:
    """
    Raises:
        FamilyDomainError: for families not supported on the symmetric subspace.
    """
    return CompressedSymmetricFamily(rho_family, m_split)


def _named_qubit_state(psi: str, n_qubits: int) -> np.ndarray:
    if psi == "w":
        return dicke_state(n_qubits, 1)
    if psi == "ghz":
        return ghz_state(n_qubits)
    if psi == "wwbar":
        return wwbar_state(n_qubits)
    raise InvalidParameterError(f"unknown pure state '{psi}', expected one of {PURE_STATE_CHOICES}")


def _require(value: Optional[int], flag: str, family: str) -> int:
    if value is None:
        raise InvalidParameterError(f"family '{family}' needs {flag}")
    return value


def build_family(
    name: str,
    n: Optional[int] = None,
    d: Optional[int] = None,
    psi: Optional[str] = None,
    custom_state: Optional[str | Path] = None,
) -> StateFamily:
    """
    Select a family by its CLI name.

    Args:
        name: One of FAMILY_CHOICES (case-insensitive).
        n: Number of qubits/qudits where the family needs one.
        d: Local dimension for the qudit family.
        psi: Named pure part ("w", "ghz", "wwbar") for the white-noise families.
        custom_state: Pure-state file for the symmetric, nonsymmetric and
            qudit families; overrides psi.
    """
    key = (name or "").strip().lower()
    document = load_pure_state(custom_state) if custom_state is not None else None

    if key in ("w", "ghz", "wwbar"):
        n_qubits = _require(n, "--n", key)
        factory = {"w": noisy_w_family, "ghz": noisy_ghz_family, "wwbar": noisy_wwbar_family}[key]
        family: StateFamily = factory(n_qubits)
    elif key == "symmetric":
        if document is None:
            raise InvalidParameterError("family 'symmetric' needs --custom-state")
        vector = document.vector()
        if document.dicke_coefficients is not None:
            n_qubits = len(document.dicke_coefficients) - 1
            if n is not None and n != n_qubits:
                raise InvalidParameterError(f"--n {n} disagrees with {n_qubits + 1} Dicke coefficients")
            family = symmetric_noisy_family(n_qubits, vector)
        else:
            family = SymmetricNoisyFamily.from_vector(vector)
    elif key == "nonsymmetric":
        if document is not None:
            if document.amplitudes is None or document.dims is None:
                raise InvalidParameterError("family 'nonsymmetric' needs amplitudes with dims")
            if any(dim != 2 for dim in document.dims):
                raise InvalidParameterError(f"nonsymmetric family is for qubits, got dims {document.dims}")
            family = nonsymmetric_noisy_family(len(document.dims), document.vector())
        else:
            n_qubits = _require(n, "--n", key)
            family = nonsymmetric_noisy_family(n_qubits, _named_qubit_state(psi or "w", n_qubits))
    elif key == "qudit":
        if document is not None:
            if document.amplitudes is None or document.dims is None:
                raise InvalidParameterError("family 'qudit' needs amplitudes with dims")
            dims = document.dims
            if len(set(dims)) != 1:
                raise InvalidParameterError(f"qudit family needs equal local dims, got {dims}")
            family = qudit_noisy_family(len(dims), dims[0], document.vector())
        else:
            n_sites = _require(n, "--n", key)
            local = _require(d, "--d", key)
            if psi in (None, "ghz"):
                family = qudit_noisy_family(n_sites, local)
            elif psi == "w":
                family = qudit_noisy_family(n_sites, local, qudit_w_state(n_sites, local))
            else:
                raise InvalidParameterError(f"qudit family supports psi 'ghz' or 'w', got '{psi}'")
    elif key == "isotropic":
        family = isotropic_qutrit_family()
    elif key in ("xstate", "x"):
        family = qubit_qutrit_x_family()
    else:
        raise InvalidParameterError(f"unknown family '{name}', expected one of {FAMILY_CHOICES}")

    utils.logger.info("state_factory.build_family(): using %s", family.label)
    return family


_RIGHT_SIDE = re.compile(r"^N\s*-\s*(\d+)$")


def parse_cut(spec: str, n_factors: int) -> BipartiteCut:
    """
    Cut syntax:
        "m:rest"      first m factors in A, the remainder in B
        "m:k"         same, with k checked to equal n_factors - m
        "m:N-k"       same, with N standing for the number of factors
        "a=0,2"       explicit A factor list, B is the complement

    Raises:
        InvalidCutError: on malformed input or indices invalid for n_factors.
    """
    text = (spec or "").strip()
    if text.lower().startswith("a="):
        try:
            indices = [int(part) for part in text[2:].split(",") if part.strip()]
        except ValueError as e:
            raise InvalidCutError(f"bad factor list in cut '{spec}'") from e
        return BipartiteCut.from_a(indices, n_factors)

    left, sep, right = text.partition(":")
    if not sep:
        raise InvalidCutError(f"cut '{spec}' is neither 'm:rest' nor 'a=i,j,...'")
    try:
        m = int(left)
    except ValueError as e:
        raise InvalidCutError(f"bad A size in cut '{spec}'") from e
    right = right.strip()
    if right.lower() != "rest":
        match = _RIGHT_SIDE.match(right)
        try:
            b_size = n_factors - int(match.group(1)) if match else int(right)
        except ValueError as e:
            raise InvalidCutError(f"bad B size in cut '{spec}'") from e
        if b_size != n_factors - m:
            raise InvalidCutError(
                f"cut '{spec}' does not split {n_factors} factors ({m} + {b_size})"
            )
    return BipartiteCut.contiguous(m, n_factors)


def resolve_cut(family: StateFamily, spec: str) -> tuple[StateFamily, BipartiteCut]:
    """
    Parse the cut against the family's factors. Symmetric families are
    swapped for their compressed form on the cut |A| : N-|A|, since every
    A of the same size is equivalent for a permutation-symmetric state.
    """
    cut = parse_cut(spec, family.n_factors)
    if isinstance(family, SymmetricNoisyFamily):
        compressed = compress_symmetric(family, len(cut.a_factors))
        utils.logger.info(
            "state_factory.resolve_cut(): %s cut %s evaluated in Dicke coordinates",
            family.label,
            cut.label,
        )
        return compressed, BipartiteCut(a_factors=(0,), b_factors=(1,))
    if isinstance(family, CompressedSymmetricFamily):
        raise FamilyDomainError("family is already compressed; pass the symmetric parent")
    return family, cut
