import numpy as np

from cstre.families.base import StateFamily
from cstre.schema import FamilyName


class IsotropicQutritFamily(StateFamily):
    """((1-x)/8) I_9 + ((9x-1)/8) |Phi><Phi|, |Phi> = (|00> + |11> + |22>)/sqrt(3)."""

    name = FamilyName.ISOTROPIC_QUTRIT
    dims = (3, 3)

    def __init__(self) -> None:
        phi = np.zeros(9)
        phi[[0, 4, 8]] = 1.0 / np.sqrt(3.0)
        self._projector = np.outer(phi, phi)

    def _matrix(self, x: float) -> np.ndarray:
        return (1.0 - x) / 8.0 * np.eye(9) + (9.0 * x - 1.0) / 8.0 * self._projector


class QubitQutritXFamily(StateFamily):
    """
    Qubit (x) qutrit X state: diag(2, 1, 1, 1, 1, 2)/8 plus x on the (0, 5)
    anti-diagonal corners. PSD exactly for x <= 1/4.
    """

    name = FamilyName.QUBIT_QUTRIT_X
    dims = (2, 3)
    domain = (0.0, 0.25)

    def _matrix(self, x: float) -> np.ndarray:
        matrix = np.diag([2.0, 1.0, 1.0, 1.0, 1.0, 2.0]) / 8.0
        matrix[0, 5] = matrix[5, 0] = x
        return matrix
