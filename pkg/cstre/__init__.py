"""
Entanglement detection via the conditional sandwiched Tsallis relative entropy.

"""

__version__ = "0.1.0"

from cstre.entropies import ar_conditional, cstre, sandwiched_renyi_conditional, von_neumann_conditional
from cstre.linalg import DensityMatrix, HermitianOperator, Spectrum
from cstre.schema import BipartiteCut, Criterion, CstreError, Verdict
from cstre.separability import convergence_trace, threshold

__all__ = [
    "DensityMatrix",
    "HermitianOperator",
    "Spectrum",
    "BipartiteCut",
    "Criterion",
    "Verdict",
    "CstreError",
    "cstre",
    "ar_conditional",
    "sandwiched_renyi_conditional",
    "von_neumann_conditional",
    "threshold",
    "convergence_trace",
]
