import math
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, Field, field_validator, model_validator


class CstreError(Exception):
    """Base error for every rejection raised by the package."""

    def __init__(self, message: str, details: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.details = details


class NotHermitianError(CstreError):
    """details: largest entrywise |A - A^dagger|."""


class NotPositiveError(CstreError):
    """details: most negative eigenvalue."""


class NormalizationError(CstreError):
    """details: the offending trace."""


class DimensionMismatchError(CstreError):
    pass


class SupportViolationError(CstreError):
    """details: weight of rho outside supp(sigma)."""


class InvalidCutError(CstreError):
    pass


class InvalidParameterError(CstreError):
    pass


class FamilyDomainError(CstreError):
    pass


class UnsupportedCombinationError(CstreError):
    pass


class StateFileError(CstreError):
    """Malformed state file (syntax or schema)."""


class Method(str, Enum):
    CSTRE = "CSTRE"
    AR = "AR"
    SANDWICHED_RENYI = "SandwichedRenyi"
    VON_NEUMANN = "VonNeumann"
    TSALLIS_RELATIVE = "TsallisRelative"
    SANDWICHED_TSALLIS_RELATIVE = "SandwichedTsallisRelative"


class Criterion(str, Enum):
    CSTRE_QINF = "CSTRE_qinf"
    CSTRE_AT_Q = "CSTRE_at_q"
    AR_QINF = "AR_qinf"
    AR_AT_Q = "AR_at_q"
    RENYI_AT_Q = "Renyi_at_q"
    VON_NEUMANN = "VonNeumann"
    PPT = "PPT"
    REDUCTION = "Reduction"

    @property
    def needs_q(self) -> bool:
        return self in (Criterion.CSTRE_AT_Q, Criterion.AR_AT_Q, Criterion.RENYI_AT_Q)


class Verdict(str, Enum):
    NEGATIVE = "NEGATIVE"
    NONNEGATIVE = "NONNEGATIVE"
    BOUNDARY = "BOUNDARY"


class FamilyName(str, Enum):
    NOISY_W = "NoisyW"
    NOISY_GHZ = "NoisyGHZ"
    NOISY_WWBAR = "NoisyWWbar"
    NOISY_SYMMETRIC_CUSTOM = "NoisySymmetricCustom"
    NOISY_NON_SYMMETRIC = "NoisyNonSymmetric"
    NOISY_QUDIT = "NoisyQudit"
    ISOTROPIC_QUTRIT = "IsotropicQutrit"
    QUBIT_QUTRIT_X = "QubitQutritX"


class BipartiteCut(BaseModel):
    """
    Partition of tensor factors into A (the side carrying the identity in
    I_A (x) rho_B) and B (the conditioning side).
    """

    a_factors: tuple[int, ...]
    b_factors: tuple[int, ...]

    model_config = {"frozen": True}

    @field_validator("a_factors", "b_factors")
    @classmethod
    def _sorted(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sorted(value))

    @model_validator(mode="after")
    def _check_partition(self) -> "BipartiteCut":
        if not self.a_factors or not self.b_factors:
            raise InvalidCutError("both sides of a cut must be nonempty")
        if set(self.a_factors) & set(self.b_factors):
            raise InvalidCutError(
                f"cut sides overlap: {sorted(set(self.a_factors) & set(self.b_factors))}"
            )
        if len(set(self.a_factors)) != len(self.a_factors) or len(
            set(self.b_factors)
        ) != len(self.b_factors):
            raise InvalidCutError("cut sides contain repeated factor indices")
        if min(self.a_factors + self.b_factors) < 0:
            raise InvalidCutError("factor indices must be nonnegative")
        return self

    @classmethod
    def from_a(cls, a_factors: tuple[int, ...] | list[int], n_factors: int) -> "BipartiteCut":
        """A as given, B as the complement within range(n_factors)."""
        a = tuple(a_factors)
        out_of_range = [i for i in a if not 0 <= i < n_factors]
        if out_of_range:
            raise InvalidCutError(
                f"factor indices {out_of_range} out of range for {n_factors} factors"
            )
        b = tuple(i for i in range(n_factors) if i not in a)
        return cls(a_factors=a, b_factors=b)

    @classmethod
    def contiguous(cls, m: int, n_factors: int) -> "BipartiteCut":
        """First m factors in A, the remaining n_factors - m in B."""
        if not 1 <= m <= n_factors - 1:
            raise InvalidCutError(f"m={m} must lie in [1, {n_factors - 1}]")
        return cls.from_a(tuple(range(m)), n_factors)

    @property
    def n_factors(self) -> int:
        return len(self.a_factors) + len(self.b_factors)

    @property
    def label(self) -> str:
        return f"{len(self.a_factors)}:{len(self.b_factors)}"

    def validate_for(self, n_factors: int) -> None:
        """Raise InvalidCutError unless the cut covers exactly range(n_factors)."""
        if set(self.a_factors) | set(self.b_factors) != set(range(n_factors)):
            raise InvalidCutError(
                f"cut {list(self.a_factors)}|{list(self.b_factors)} does not cover "
                f"the {n_factors} factors of the state"
            )


class EntropyReport(BaseModel):
    value: float
    q: float
    method: Method
    # Descending; present for the sandwiched functionals only.
    sandwiched_spectrum: Optional[list[float]] = None


class ThresholdResult(BaseModel):
    criterion: Criterion
    q: Optional[float] = None
    crossing_found: bool
    x_star: Optional[float] = None
    bracket: tuple[float, float]
    tol: float
    iterations: int
    # Criterion values at the ends of the requested bracket.
    end_values: tuple[float, float]
    # Criterion value at x_star; zero up to the width of the final bracket.
    value_at_root: Optional[float] = None


class TraceRow(BaseModel):
    q: float
    x_crossing: Optional[float] = None
    iterations: int = 0


class ConvergenceTrace(BaseModel):
    criterion: Criterion
    family: str
    cut: str
    rows: list[TraceRow] = Field(default_factory=list)

    def crossings(self) -> list[Optional[float]]:
        return [row.x_crossing for row in self.rows]

    def is_monotone(self, slack: float = 1e-9) -> bool:
        """True when found crossings never increase with q (rows sorted by q)."""
        found = [
            row.x_crossing
            for row in sorted(self.rows, key=lambda r: r.q)
            if row.x_crossing is not None
        ]
        return all(b <= a + slack for a, b in zip(found, found[1:]))


class ScanSpec(BaseModel):
    """A fully parsed scan request."""

    family: Optional[str] = None
    n: Optional[int] = None
    d: Optional[int] = None
    psi: Optional[str] = None
    custom_state: Optional[str] = None
    state_file: Optional[str] = None
    cut: str = "1:rest"
    criteria: list[str] = Field(default_factory=lambda: ["cstre"])
    q_values: list[float] = Field(default_factory=lambda: [math.inf])
    x_grid: tuple[float, float, float] = (0.0, 1.0, 0.01)
    out: Optional[str] = None

    @model_validator(mode="after")
    def _check(self) -> "ScanSpec":
        if (self.family is None) == (self.state_file is None):
            raise InvalidParameterError("give exactly one of --family or --state-file")
        start, stop, step = self.x_grid
        if not step > 0:
            raise InvalidParameterError(f"x grid step must be positive, got {step}")
        if stop < start:
            raise InvalidParameterError(f"x grid stop {stop} is below start {start}")
        if not self.criteria:
            raise InvalidParameterError("at least one criterion is required")
        if not self.q_values:
            raise InvalidParameterError("at least one q value is required")
        for q in self.q_values:
            if not (math.isinf(q) and q > 0) and not 0 < q <= 1e6:
                raise InvalidParameterError(f"q={q} outside (0, 1e6] and not inf")
        return self

    def x_values(self) -> list[float]:
        start, stop, step = self.x_grid
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]


class ScanRow(BaseModel):
    x: Optional[float] = None
    # None for criteria that do not depend on q.
    q: Optional[float] = None
    criterion: Criterion
    value: Optional[float] = None
    verdict: Optional[Verdict] = None
    error: str = ""


class CheckResult(BaseModel):
    name: str
    expected: str
    computed: str
    tolerance: float
    passed: bool
    detail: str = ""
