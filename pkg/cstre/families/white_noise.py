import math
from typing import Any, Sequence

import numpy as np

from cstre import env
from cstre.families.base import StateFamily
from cstre.schema import FamilyName, NormalizationError


class WhiteNoiseFamily(StateFamily):
    """
    x -> ((1-x)/D) I_D + x |psi><psi| on the full D = prod(dims) space.

    Covers the non-symmetric qubit family and the N-qudit family.
    """

    def __init__(
        self,
        name: FamilyName,
        dims: Sequence[int],
        psi: np.ndarray,
        parameters: dict[str, Any] | None = None,
    ):
        self.name = name
        self.dims = tuple(int(d) for d in dims)
        vector = np.asarray(psi, dtype=np.complex128).reshape(-1)
        if vector.size != math.prod(self.dims):
            raise NormalizationError(
                f"pure state of length {vector.size} does not fit dims {list(self.dims)}"
            )
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > env.TRACE_TOL:
            raise NormalizationError(f"pure state has norm {norm!r}, expected 1", details=norm)
        self.psi = vector
        self._pure = np.outer(vector, vector.conj())
        self._parameters = dict(parameters or {})

    def parameters(self) -> dict[str, Any]:
        return dict(self._parameters)

    def _matrix(self, x: float) -> np.ndarray:
        size = self._pure.shape[0]
        return (1.0 - x) / size * np.eye(size) + x * self._pure
