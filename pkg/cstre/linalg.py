"""
Dense Hermitian linear algebra with tensor-factor awareness.

Every operator carries the list of its factor dimensions; factor 0 is the
leftmost tensor slot, so a computational-basis index is
sum_i digit_i * prod(dims[i+1:]).
"""

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from cstre import env
from cstre.schema import (
    BipartiteCut,
    DimensionMismatchError,
    InvalidCutError,
    InvalidParameterError,
    NormalizationError,
    NotHermitianError,
    NotPositiveError,
)

__all__ = [
    "HermitianOperator",
    "DensityMatrix",
    "Spectrum",
    "eig",
    "min_eigenvalue",
    "frac_power_on_support",
    "support_projector",
    "partial_trace",
    "partial_transpose",
    "kron",
    "tensor_product",
    "embed_identity",
    "power_sum",
    "log_power_sum",
]


def _as_dims(dims: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise DimensionMismatchError(f"factor dims must be positive integers, got {list(out)}")
    return out


def _hermitize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


def max_asymmetry(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix - matrix.conj().T)))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """
    Dense complex Hermitian matrix tagged with its factor dimensions.

    The stored matrix is a read-only complex128 copy, symmetrized after the
    Hermiticity check so downstream spectra are exactly real.

    Raises:
        DimensionMismatchError: when prod(dims) differs from the matrix order.
        NotHermitianError: when max |A - A^dagger| exceeds env.HERMITIAN_TOL.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        dims = _as_dims(self.dims)
        matrix = np.array(self.matrix, dtype=np.complex128)
        order = math.prod(dims)
        if matrix.shape != (order, order):
            raise DimensionMismatchError(
                f"matrix of shape {matrix.shape} does not match dims {list(dims)} "
                f"(order {order})",
                details={"shape": matrix.shape, "dims": list(dims)},
            )
        if not np.all(np.isfinite(matrix)):
            raise NotHermitianError("operator has non-finite entries", details=float("nan"))
        asymmetry = max_asymmetry(matrix)
        if asymmetry > env.HERMITIAN_TOL:
            raise NotHermitianError(
                f"operator is not Hermitian: max |A - A^dagger| = {asymmetry:.3e}",
                details=asymmetry,
            )
        matrix = _hermitize(matrix)
        matrix.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "HermitianOperator":
        dims = _as_dims(dims)
        return cls(dims, np.eye(math.prod(dims)))

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    A HermitianOperator with unit trace (within env.TRACE_TOL) and no
    eigenvalue below -env.PSD_FLOOR.
    """

    op: HermitianOperator

    def __post_init__(self) -> None:
        trace = self.op.trace()
        if abs(trace - 1.0) > env.TRACE_TOL:
            raise NormalizationError(f"density matrix has trace {trace!r}, expected 1", details=trace)
        lowest = min_eigenvalue(self.op)
        if lowest < -env.PSD_FLOOR:
            raise NotPositiveError(
                f"density matrix is not positive semidefinite: min eigenvalue {lowest:.3e}",
                details=lowest,
            )

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, dims: Sequence[int]) -> "DensityMatrix":
        return cls(HermitianOperator(tuple(dims), matrix))

    @classmethod
    def from_pure(cls, vector: np.ndarray, dims: Sequence[int]) -> "DensityMatrix":
        psi = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > env.TRACE_TOL:
            raise NormalizationError(f"pure state has norm {norm!r}, expected 1", details=norm)
        return cls.from_matrix(np.outer(psi, psi.conj()), dims)

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> "DensityMatrix":
        order = math.prod(_as_dims(dims))
        return cls.from_matrix(np.eye(order) / order, dims)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.op.dims

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def n_factors(self) -> int:
        return self.op.n_factors


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted descending, with matching eigenvector columns if kept."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        values = np.asarray(self.eigenvalues, dtype=np.float64).reshape(-1)
        order = np.argsort(values, kind="stable")[::-1]
        values = values[order].copy()
        values.setflags(write=False)
        object.__setattr__(self, "eigenvalues", values)
        if self.eigenvectors is not None:
            vectors = np.asarray(self.eigenvectors, dtype=np.complex128)[:, order].copy()
            vectors.setflags(write=False)
            object.__setattr__(self, "eigenvectors", vectors)

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "Spectrum":
        return cls(np.fromiter(values, dtype=np.float64))

    def reconstruct(self) -> np.ndarray:
        if self.eigenvectors is None:
            raise ValueError("spectrum was computed without eigenvectors")
        vectors = self.eigenvectors
        return (vectors * self.eigenvalues) @ vectors.conj().T

    def nonzero(self, tol: Optional[float] = None) -> np.ndarray:
        """Eigenvalues with |e| above tol (default env.SUPPORT_TOL), still descending."""
        tol = env.SUPPORT_TOL if tol is None else tol
        return self.eigenvalues[np.abs(self.eigenvalues) > tol]

    def __len__(self) -> int:
        return int(self.eigenvalues.size)


def _coerce(op: "HermitianOperator | DensityMatrix | np.ndarray") -> HermitianOperator:
    if isinstance(op, DensityMatrix):
        return op.op
    if isinstance(op, HermitianOperator):
        return op
    matrix = np.asarray(op)
    return HermitianOperator((matrix.shape[0],), matrix)


def eig(
    op: "HermitianOperator | DensityMatrix | np.ndarray", keep_vectors: bool = True
) -> Spectrum:
    """
    Full real spectrum of a Hermitian operator, sorted descending.

    Raw arrays are accepted and validated first, so a non-Hermitian input
    raises NotHermitianError with the max asymmetry in details.
    """
    operator = _coerce(op)
    if keep_vectors:
        values, vectors = np.linalg.eigh(operator.matrix)
        return Spectrum(values, vectors)
    return Spectrum(np.linalg.eigvalsh(operator.matrix))


def min_eigenvalue(op: "HermitianOperator | DensityMatrix | np.ndarray") -> float:
    operator = _coerce(op)
    return float(np.linalg.eigvalsh(operator.matrix)[0])


def _support_split(
    op: HermitianOperator, support_tol: Optional[float]
) -> tuple[Spectrum, np.ndarray]:
    tol = env.SUPPORT_TOL if support_tol is None else support_tol
    spectrum = eig(op)
    lowest = float(spectrum.eigenvalues[-1])
    # Eigenvalues inside the PSD floor are numerical zeros.
    if lowest < -max(tol, env.PSD_FLOOR):
        raise NotPositiveError(
            f"operator is not positive semidefinite: min eigenvalue {lowest:.3e}",
            details=lowest,
        )
    return spectrum, spectrum.eigenvalues > tol


def frac_power_on_support(
    op: "HermitianOperator | DensityMatrix",
    alpha: float,
    support_tol: Optional[float] = None,
) -> HermitianOperator:
    """
    Pseudo-power of a PSD operator: eigenvalues above support_tol are raised to
    alpha, the rest map to 0. The eigenbasis is preserved.

    Args:
        op: PSD operator.
        alpha: Real exponent, negative exponents act as pseudo-inverses.
        support_tol: Support cutoff, default env.SUPPORT_TOL.

    Raises:
        NotPositiveError: if an eigenvalue lies below the negative cutoff.
    """
    operator = _coerce(op)
    spectrum, on_support = _support_split(operator, support_tol)
    powered = np.zeros_like(spectrum.eigenvalues)
    powered[on_support] = spectrum.eigenvalues[on_support] ** alpha
    vectors = spectrum.eigenvectors
    assert vectors is not None
    matrix = (vectors * powered) @ vectors.conj().T
    return HermitianOperator(operator.dims, _hermitize(matrix))


def support_projector(
    op: "HermitianOperator | DensityMatrix", support_tol: Optional[float] = None
) -> np.ndarray:
    operator = _coerce(op)
    spectrum, on_support = _support_split(operator, support_tol)
    vectors = spectrum.eigenvectors
    assert vectors is not None
    basis = vectors[:, on_support]
    return _hermitize(basis @ basis.conj().T)


def _partial_trace_matrix(
    matrix: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]
) -> np.ndarray:
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    if not traced:
        return matrix.copy()
    kept_order = math.prod(dims[i] for i in keep)
    traced_order = math.prod(dims[i] for i in traced)
    tensor = matrix.reshape(dims + dims)
    axes = list(keep) + traced + [n + i for i in keep] + [n + i for i in traced]
    tensor = tensor.transpose(axes).reshape(kept_order, traced_order, kept_order, traced_order)
    return np.einsum("ajbj->ab", tensor)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """
    Trace out every factor not in keep. Kept factors stay in their original
    relative order.

    Raises:
        InvalidCutError: for an empty keep set or out-of-range indices.
    """
    kept = tuple(sorted(set(int(i) for i in keep)))
    if not kept:
        raise InvalidCutError("partial trace needs at least one kept factor")
    out_of_range = [i for i in kept if not 0 <= i < rho.n_factors]
    if out_of_range:
        raise InvalidCutError(
            f"factor indices {out_of_range} out of range for {rho.n_factors} factors"
        )
    matrix = _partial_trace_matrix(rho.matrix, rho.dims, kept)
    return DensityMatrix.from_matrix(matrix, [rho.dims[i] for i in kept])


def partial_transpose(
    rho: "DensityMatrix | HermitianOperator", cut: BipartiteCut
) -> HermitianOperator:
    """Transpose the A-side indices only. The result may be indefinite."""
    operator = _coerce(rho)
    cut.validate_for(operator.n_factors)
    n = operator.n_factors
    axes = list(range(2 * n))
    for a in cut.a_factors:
        axes[a], axes[n + a] = axes[n + a], axes[a]
    tensor = operator.matrix.reshape(operator.dims + operator.dims).transpose(axes)
    return HermitianOperator(operator.dims, tensor.reshape(operator.order, operator.order))


def kron(*ops: "HermitianOperator | DensityMatrix") -> HermitianOperator:
    if not ops:
        raise DimensionMismatchError("kron needs at least one operator")
    operators = [_coerce(op) for op in ops]
    matrix = reduce(np.kron, (op.matrix for op in operators))
    dims = tuple(d for op in operators for d in op.dims)
    return HermitianOperator(dims, matrix)


def tensor_product(*states: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(kron(*states))


def embed_identity(
    rho_b: "HermitianOperator | DensityMatrix",
    dims: Sequence[int],
    b_factors: Sequence[int],
) -> HermitianOperator:
    """
    I_A (x) rho_B with every factor back in its original tensor position.

    Args:
        rho_b: Operator on the B factors, in increasing factor order.
        dims: Factor dims of the full space.
        b_factors: Positions of B inside dims; A is the complement.
    """
    operator = _coerce(rho_b)
    full_dims = _as_dims(dims)
    n = len(full_dims)
    b = sorted(int(i) for i in b_factors)
    a = [i for i in range(n) if i not in b]
    if tuple(full_dims[i] for i in b) != operator.dims:
        raise DimensionMismatchError(
            f"operator dims {list(operator.dims)} do not match B factors "
            f"{[full_dims[i] for i in b]}"
        )
    a_order = math.prod(full_dims[i] for i in a)
    block = np.kron(np.eye(a_order), operator.matrix)
    order = a + b
    tensor = block.reshape([full_dims[i] for i in order] * 2)
    inverse = [int(p) for p in np.argsort(order)]
    tensor = tensor.transpose(inverse + [n + p for p in inverse])
    size = math.prod(full_dims)
    return HermitianOperator(full_dims, tensor.reshape(size, size))


def log_power_sum(spectrum: Spectrum, q: float, floor: Optional[float] = None) -> float:
    """
    ln(sum_i e_i^q) over the eigenvalues above floor, evaluated with
    max-factoring. Returns -inf when nothing survives.

    Args:
        spectrum: PSD spectrum; entries in [-env.PSD_FLOOR, 0] count as zero.
        q: Positive power.
        floor: Cutoff, default env.SUPPORT_TOL (the zero level of a density
            matrix spectrum). Pass 0.0 for spectra whose small entries are
            exact, as with sandwiched spectra at q < 1.

    Raises:
        InvalidParameterError: for q <= 0.
        NotPositiveError: for an eigenvalue below -env.PSD_FLOOR.
    """
    if not q > 0:
        raise InvalidParameterError(f"q must be positive, got {q}")
    values = np.asarray(spectrum.eigenvalues, dtype=np.float64)
    if values.size and float(values.min()) < -env.PSD_FLOOR:
        raise NotPositiveError(
            f"power sum of a spectrum with negative eigenvalue {float(values.min()):.3e}",
            details=float(values.min()),
        )
    positive = values[values > (env.SUPPORT_TOL if floor is None else floor)]
    if positive.size == 0:
        return -math.inf
    return float(logsumexp(q * np.log(positive)))


def power_sum(spectrum: Spectrum, q: float) -> float:
    """sum_i e_i^q; inf when the true value overflows a double."""
    return float(np.exp(log_power_sum(spectrum, q)))
