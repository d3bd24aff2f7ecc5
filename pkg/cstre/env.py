"""
env vars.
"""

import os
from dotenv import load_dotenv

load_dotenv()

LOGGER_LEVEL: str = os.environ.get("LOG_LEVEL", "INFO")

# Numerical floors. Hermiticity is checked entrywise (absolute), trace and
# eigenvalue floors apply to every DensityMatrix.
HERMITIAN_TOL: float = float(os.environ.get("HERMITIAN_TOL", "1e-12"))
TRACE_TOL: float = float(os.environ.get("TRACE_TOL", "1e-10"))
PSD_FLOOR: float = float(os.environ.get("PSD_FLOOR", "1e-10"))

# Eigenvalues at or below SUPPORT_TOL are outside the support of sigma.
SUPPORT_TOL: float = float(os.environ.get("SUPPORT_TOL", "1e-12"))
# Max weight of rho allowed outside supp(sigma).
SUPPORT_LEAK_TOL: float = float(os.environ.get("SUPPORT_LEAK_TOL", "1e-9"))

# |value| below this is reported as BOUNDARY.
BOUNDARY_TOL: float = float(os.environ.get("BOUNDARY_TOL", "1e-9"))
# A criterion value counts as negative in bisection only below -CROSSING_TOL,
# so eigenvalue plateaus at exactly zero do not register as crossings.
CROSSING_TOL: float = float(os.environ.get("CROSSING_TOL", "1e-12"))

# Threshold search
BISECTION_TOL: float = float(os.environ.get("BISECTION_TOL", "1e-8"))
BISECTION_MAX_ITERATIONS: int = int(os.environ.get("BISECTION_MAX_ITERATIONS", "200"))

# Largest q evaluated directly; beyond it use the q -> inf limit.
Q_CAP: float = float(os.environ.get("Q_CAP", "1e6"))

# CLI
SCAN_MAX_CONCURRENCY: int = int(os.environ.get("SCAN_MAX_CONCURRENCY", "4"))
CHECK_TOLERANCE: float = float(os.environ.get("CHECK_TOLERANCE", "5e-4"))
