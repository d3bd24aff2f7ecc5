from abc import ABC, abstractmethod
from typing import Any

import numpy as np

from cstre.linalg import DensityMatrix
from cstre.schema import FamilyDomainError, FamilyName

# Slack on the domain ends so grids built by repeated addition are accepted.
DOMAIN_SLACK = 1e-12


class StateFamily(ABC):
    """
    A named one-parameter family x -> density matrix.

    Subclasses provide `_matrix(x)`; `evaluate` checks the domain and wraps the
    result in a validated DensityMatrix, so every member is trace 1 and PSD.
    Evaluators are pure and safe to call from several threads.
    """

    name: FamilyName
    dims: tuple[int, ...]
    domain: tuple[float, float] = (0.0, 1.0)
    # Supported on the symmetric subspace of its qubits.
    symmetric: bool = False

    @abstractmethod
    def _matrix(self, x: float) -> np.ndarray: ...

    def parameters(self) -> dict[str, Any]:
        return {}

    @property
    def label(self) -> str:
        params = ",".join(f"{key}={value}" for key, value in self.parameters().items())
        return f"{self.name.value}({params})" if params else self.name.value

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def check_domain(self, x: float) -> float:
        lo, hi = self.domain
        if not lo - DOMAIN_SLACK <= x <= hi + DOMAIN_SLACK:
            raise FamilyDomainError(
                f"x={x} outside the domain [{lo}, {hi}] of {self.label}",
                details={"x": x, "domain": self.domain},
            )
        return min(max(float(x), lo), hi)

    def evaluate(self, x: float) -> DensityMatrix:
        x = self.check_domain(x)
        return DensityMatrix.from_matrix(self._matrix(x), self.dims)

    def __call__(self, x: float) -> DensityMatrix:
        return self.evaluate(x)
