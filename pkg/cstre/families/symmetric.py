import math
from typing import Any, Optional

import numpy as np

from cstre import env, utils
from cstre.dicke import (
    FULL_SPACE_MAX_QUBITS,
    PROJECTION_TOL,
    SymmetricCutRepresentation,
    branching_isometry,
    dicke_basis,
)
from cstre.families.base import StateFamily
from cstre.linalg import DensityMatrix
from cstre.schema import FamilyDomainError, FamilyName, InvalidParameterError, NormalizationError


class SymmetricNoisyFamily(StateFamily):
    """
    x -> ((1-x)/(N+1)) P_N + x |phi><phi| with phi in the symmetric subspace.

    phi is held as N+1 Dicke coefficients, so any N is representable; the
    full 2^N matrix is only built up to FULL_SPACE_MAX_QUBITS qubits. Use
    `compress(m)` for cut-based computations.
    """

    symmetric = True

    def __init__(
        self,
        n_qubits: int,
        coefficients: np.ndarray,
        name: FamilyName = FamilyName.NOISY_SYMMETRIC_CUSTOM,
    ):
        if n_qubits < 2:
            raise InvalidParameterError(f"symmetric families need N >= 2, got N={n_qubits}")
        phi = np.asarray(coefficients, dtype=np.complex128).reshape(-1)
        if phi.size != n_qubits + 1:
            raise InvalidParameterError(
                f"expected {n_qubits + 1} Dicke coefficients for N={n_qubits}, got {phi.size}"
            )
        norm = float(np.linalg.norm(phi))
        if abs(norm - 1.0) > env.TRACE_TOL:
            raise NormalizationError(f"pure state has norm {norm!r}, expected 1", details=norm)
        self.name = name
        self.n_qubits = n_qubits
        self.dims = (2,) * n_qubits
        self.coefficients = phi
        self.coefficients.setflags(write=False)

    @classmethod
    def from_vector(
        cls,
        vector: np.ndarray,
        name: FamilyName = FamilyName.NOISY_SYMMETRIC_CUSTOM,
    ) -> "SymmetricNoisyFamily":
        """
        Accepts a 2^N computational-basis vector; rejects it unless it lies in
        the symmetric subspace.

        Raises:
            FamilyDomainError: if the projection residual reaches 1e-10.
        """
        psi = np.asarray(vector).reshape(-1)
        n_qubits = int(round(math.log2(psi.size))) if psi.size > 1 else 0
        if n_qubits < 2 or 2**n_qubits != psi.size:
            raise InvalidParameterError(f"vector of length {psi.size} is not an N >= 2 qubit state")
        coefficients, residual = dicke_basis(n_qubits).project(psi)
        if residual >= PROJECTION_TOL:
            raise FamilyDomainError(
                f"pure state is not symmetric: projection residual {residual:.3e}",
                details=residual,
            )
        return cls(n_qubits, coefficients, name=name)

    def parameters(self) -> dict[str, Any]:
        return {"N": self.n_qubits}

    def dicke_matrix(self, x: float) -> np.ndarray:
        """The state in Dicke coordinates, an (N+1) x (N+1) matrix."""
        size = self.n_qubits + 1
        phi = self.coefficients
        return (1.0 - x) / size * np.eye(size) + x * np.outer(phi, phi.conj())

    def _matrix(self, x: float) -> np.ndarray:
        if self.n_qubits > FULL_SPACE_MAX_QUBITS:
            raise InvalidParameterError(
                f"N={self.n_qubits} is too large for the full 2^N space; use compress()"
            )
        vectors = dicke_basis(self.n_qubits).vectors
        return vectors @ self.dicke_matrix(x) @ vectors.T

    def compress(self, m_split: int) -> "CompressedSymmetricFamily":
        return CompressedSymmetricFamily(self, m_split)


class CompressedSymmetricFamily(StateFamily):
    """
    A SymmetricNoisyFamily across the cut m : N-m, on factor dims (m+1, N-m+1).

    Factor 0 is the Dicke space of the first m qubits, factor 1 that of the
    remaining N-m. Spectra, partial traces and partial transposes agree with
    the full-space state because the Dicke basis is real and I_A (x) rho_B is
    block diagonal on Sym_A and its complement.
    """

    symmetric = True

    def __init__(self, parent: StateFamily, m_split: int):
        if not isinstance(parent, SymmetricNoisyFamily):
            raise FamilyDomainError(
                f"{parent.label} is not supported on the symmetric subspace; "
                "only symmetric families can be compressed"
            )
        n_qubits = parent.n_qubits
        if not 1 <= m_split <= n_qubits - 1:
            raise InvalidParameterError(f"m_split={m_split} must lie in [1, {n_qubits - 1}]")
        self.parent = parent
        self.name = parent.name
        self.n_qubits = n_qubits
        self.m_split = m_split
        self.dims = (m_split + 1, n_qubits - m_split + 1)
        self._isometry = branching_isometry(n_qubits, m_split)
        utils.logger.debug(
            "CompressedSymmetricFamily(): %s on cut %d:%d, order %d",
            parent.label,
            m_split,
            n_qubits - m_split,
            self._isometry.shape[0],
        )

    def parameters(self) -> dict[str, Any]:
        return {"N": self.n_qubits, "m": self.m_split}

    def _matrix(self, x: float) -> np.ndarray:
        return self._isometry @ self.parent.dicke_matrix(x) @ self._isometry.T

    def representation(self, x: Optional[float] = None, state: Optional[DensityMatrix] = None) -> SymmetricCutRepresentation:
        if state is None:
            if x is None:
                raise InvalidParameterError("representation() needs x or a state")
            state = self.evaluate(x)
        return SymmetricCutRepresentation(self.n_qubits, self.m_split, state)
