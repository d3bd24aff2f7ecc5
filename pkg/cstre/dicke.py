"""
Dicke states, the symmetric subspace, and the compressed representation of
symmetric states across an m : N-m cut.

The branching rule

    |D_k^N> = sum_j c(k, j) |D_j^m> |D_{k-j}^{N-m}>,
    c(k, j) = sqrt(C(m, j) C(N-m, k-j) / C(N, k))

maps the (N+1)-dimensional symmetric subspace isometrically into the
(m+1)(N-m+1)-dimensional product of the two smaller symmetric subspaces, so a
1:N-1 cut of a 64-qubit symmetric state is handled as a 2 x 64 problem.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from cstre import env
from cstre.linalg import DensityMatrix
from cstre.schema import FamilyDomainError, InvalidParameterError

__all__ = [
    "dicke_state",
    "ghz_state",
    "wwbar_state",
    "qudit_ghz_state",
    "qudit_w_state",
    "w_coefficients",
    "ghz_coefficients",
    "wwbar_coefficients",
    "DickeBasis",
    "dicke_basis",
    "branching_coefficient",
    "branching_isometry",
    "cut_embedding",
    "SymmetricCutRepresentation",
]

# Largest N for which 2^N-dimensional vectors and matrices are built.
FULL_SPACE_MAX_QUBITS = 12

PROJECTION_TOL = 1e-10


def _check_qubits(n_qubits: int, minimum: int = 1) -> None:
    if n_qubits < minimum:
        raise InvalidParameterError(f"need at least {minimum} qubits, got N={n_qubits}")


def _check_full_space(n_qubits: int) -> None:
    if n_qubits > FULL_SPACE_MAX_QUBITS:
        raise InvalidParameterError(
            f"N={n_qubits} is too large for the full 2^N space "
            f"(max {FULL_SPACE_MAX_QUBITS}); use the compressed representation"
        )


@lru_cache(maxsize=None)
def _hamming_weights(n_qubits: int) -> np.ndarray:
    weights = np.fromiter(
        (i.bit_count() for i in range(2**n_qubits)), dtype=np.int64, count=2**n_qubits
    )
    weights.setflags(write=False)
    return weights


def dicke_state(n_qubits: int, k: int) -> np.ndarray:
    """Real unit vector with amplitude 1/sqrt(C(N, k)) on every weight-k bitstring."""
    _check_qubits(n_qubits)
    if not 0 <= k <= n_qubits:
        raise InvalidParameterError(f"excitation number k={k} outside [0, {n_qubits}]")
    _check_full_space(n_qubits)
    mask = _hamming_weights(n_qubits) == k
    return mask.astype(np.float64) / math.sqrt(math.comb(n_qubits, k))


def ghz_state(n_qubits: int) -> np.ndarray:
    _check_qubits(n_qubits, minimum=2)
    _check_full_space(n_qubits)
    psi = np.zeros(2**n_qubits)
    psi[0] = psi[-1] = 1.0 / math.sqrt(2.0)
    return psi


def wwbar_state(n_qubits: int) -> np.ndarray:
    """(|W_N> + |W-bar_N>)/sqrt(2) with |W-bar_N> = |D_{N-1}^N>."""
    _check_qubits(n_qubits, minimum=3)
    w = dicke_state(n_qubits, 1)
    w_bar = dicke_state(n_qubits, n_qubits - 1)
    overlap = float(w @ w_bar)
    if abs(overlap) > env.HERMITIAN_TOL:
        raise FamilyDomainError(f"W and W-bar overlap {overlap:.3e} for N={n_qubits}")
    return (w + w_bar) / math.sqrt(2.0)


def qudit_ghz_state(n_sites: int, d: int) -> np.ndarray:
    """sum_j |j j ... j> / sqrt(d) on N qudits."""
    _check_qubits(n_sites, minimum=2)
    if d < 2:
        raise InvalidParameterError(f"local dimension must be at least 2, got d={d}")
    size = d**n_sites
    stride = (size - 1) // (d - 1)
    psi = np.zeros(size)
    psi[np.arange(d) * stride] = 1.0 / math.sqrt(d)
    return psi


def qudit_w_state(n_sites: int, d: int) -> np.ndarray:
    """
    Equal superposition of every single-site excitation |0..l..0>, l = 1..d-1.
    For d = 2 this is the W state.
    """
    _check_qubits(n_sites, minimum=2)
    if d < 2:
        raise InvalidParameterError(f"local dimension must be at least 2, got d={d}")
    psi = np.zeros(d**n_sites)
    for site in range(n_sites):
        place = d ** (n_sites - 1 - site)
        for level in range(1, d):
            psi[level * place] = 1.0
    return psi / math.sqrt(n_sites * (d - 1))


def w_coefficients(n_qubits: int) -> np.ndarray:
    """W_N in Dicke coordinates (index k = number of excitations)."""
    _check_qubits(n_qubits, minimum=2)
    coefficients = np.zeros(n_qubits + 1)
    coefficients[1] = 1.0
    return coefficients


def ghz_coefficients(n_qubits: int) -> np.ndarray:
    _check_qubits(n_qubits, minimum=2)
    coefficients = np.zeros(n_qubits + 1)
    coefficients[0] = coefficients[n_qubits] = 1.0 / math.sqrt(2.0)
    return coefficients


def wwbar_coefficients(n_qubits: int) -> np.ndarray:
    _check_qubits(n_qubits, minimum=3)
    coefficients = np.zeros(n_qubits + 1)
    coefficients[1] = coefficients[n_qubits - 1] = 1.0 / math.sqrt(2.0)
    return coefficients


@dataclass(frozen=True, eq=False)
class DickeBasis:
    """Columns k = 0..N of `vectors` are |D_k^N> in the 2^N computational basis."""

    n_qubits: int
    vectors: np.ndarray

    def __post_init__(self) -> None:
        if np.iscomplexobj(self.vectors) or np.any(self.vectors < 0):
            raise FamilyDomainError("Dicke basis vectors must be real and nonnegative")

    def projector(self) -> np.ndarray:
        """P_N, the projector onto the symmetric subspace."""
        return self.vectors @ self.vectors.T

    def expand(self, coefficients: np.ndarray) -> np.ndarray:
        return self.vectors @ np.asarray(coefficients, dtype=np.complex128)

    def project(self, vector: np.ndarray) -> tuple[np.ndarray, float]:
        """Dicke coefficients of vector and the norm of what lies outside Sym."""
        psi = np.asarray(vector, dtype=np.complex128).reshape(-1)
        if psi.size != self.vectors.shape[0]:
            raise InvalidParameterError(
                f"vector of length {psi.size} is not an N={self.n_qubits} qubit state"
            )
        coefficients = self.vectors.T @ psi
        residual = float(np.linalg.norm(psi - self.vectors @ coefficients))
        return coefficients, residual


@lru_cache(maxsize=16)
def dicke_basis(n_qubits: int) -> DickeBasis:
    _check_qubits(n_qubits)
    vectors = np.column_stack([dicke_state(n_qubits, k) for k in range(n_qubits + 1)])
    vectors.setflags(write=False)
    return DickeBasis(n_qubits, vectors)


def branching_coefficient(n_qubits: int, m_split: int, k: int, j: int) -> float:
    """c(k, j); zero when j or k - j is out of range for its side."""
    if not (0 <= j <= m_split and 0 <= k - j <= n_qubits - m_split):
        return 0.0
    numerator = math.comb(m_split, j) * math.comb(n_qubits - m_split, k - j)
    return math.sqrt(numerator / math.comb(n_qubits, k))


def _check_split(n_qubits: int, m_split: int) -> None:
    _check_qubits(n_qubits, minimum=2)
    if not 1 <= m_split <= n_qubits - 1:
        raise InvalidParameterError(f"m_split={m_split} must lie in [1, {n_qubits - 1}]")


@lru_cache(maxsize=64)
def branching_isometry(n_qubits: int, m_split: int) -> np.ndarray:
    """
    V with V[j*(N-m+1) + (k-j), k] = c(k, j): maps Dicke coordinates of N
    qubits to Dicke(m) (x) Dicke(N-m) coordinates. V^T V = I_{N+1}.
    """
    _check_split(n_qubits, m_split)
    b_size = n_qubits - m_split + 1
    isometry = np.zeros(((m_split + 1) * b_size, n_qubits + 1))
    for k in range(n_qubits + 1):
        for j in range(max(0, k - (n_qubits - m_split)), min(m_split, k) + 1):
            isometry[j * b_size + (k - j), k] = branching_coefficient(n_qubits, m_split, k, j)
    isometry.setflags(write=False)
    return isometry


def cut_embedding(n_qubits: int, m_split: int) -> np.ndarray:
    """Columns kron(|D_j^m>, |D_l^{N-m}>) in the 2^N computational basis."""
    _check_split(n_qubits, m_split)
    _check_full_space(n_qubits)
    left = dicke_basis(m_split).vectors
    right = dicke_basis(n_qubits - m_split).vectors
    return np.kron(left, right)


@dataclass(frozen=True, eq=False)
class SymmetricCutRepresentation:
    """
    A symmetric N-qubit state seen across the cut m_split : N - m_split,
    stored on factor dims (m+1, N-m+1) in Dicke (x) Dicke coordinates.
    """

    n_qubits: int
    m_split: int
    state: DensityMatrix

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix

    @property
    def coefficients(self) -> np.ndarray:
        """Table c[k, j] of branching coefficients."""
        return np.array(
            [
                [branching_coefficient(self.n_qubits, self.m_split, k, j) for j in range(self.m_split + 1)]
                for k in range(self.n_qubits + 1)
            ]
        )

    def embed(self) -> DensityMatrix:
        """The same state in the full 2^N space (first m qubits on side A)."""
        embedding = cut_embedding(self.n_qubits, self.m_split)
        full = embedding @ self.matrix @ embedding.T
        return DensityMatrix.from_matrix(full, (2,) * self.n_qubits)
