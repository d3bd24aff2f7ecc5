"""
State files.

A density matrix is stored as one JSON document

    {"dims": [d1, d2, ...], "matrix": [[[re, im], ...], ...]}

with row-major entries written in shortest round-trip form, so save followed by
load is exact. Pure states used to seed custom families are stored as
{"dims": [...], "amplitudes": [[re, im], ...]} or, for symmetric states,
{"dicke_coefficients": [[re, im], ...]}.
"""

import math
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveInt, ValidationError, model_validator

from cstre import utils
from cstre.linalg import DensityMatrix
from cstre.schema import DimensionMismatchError, StateFileError

__all__ = [
    "StateDocument",
    "PureStateDocument",
    "load_state",
    "save_state",
    "dumps_state",
    "load_pure_state",
]

Pair = tuple[float, float]


class StateDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    dims: list[PositiveInt]
    matrix: list[list[Pair]]


class PureStateDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    dims: Optional[list[PositiveInt]] = None
    amplitudes: Optional[list[Pair]] = None
    dicke_coefficients: Optional[list[Pair]] = None

    @model_validator(mode="after")
    def _one_representation(self) -> "PureStateDocument":
        if (self.amplitudes is None) == (self.dicke_coefficients is None):
            raise ValueError("give exactly one of 'amplitudes' or 'dicke_coefficients'")
        if self.amplitudes is not None and self.dims is None:
            raise ValueError("'amplitudes' needs 'dims'")
        return self

    def vector(self) -> np.ndarray:
        pairs = self.amplitudes if self.amplitudes is not None else self.dicke_coefficients
        assert pairs is not None
        return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise StateFileError(f"cannot read state file {path}: {e.strerror or e}") from e


def _validation_message(error: ValidationError) -> str:
    first = error.errors()[0]
    where = ".".join(str(part) for part in first.get("loc", ())) or "document"
    return f"{where}: {first.get('msg', 'invalid value')}"


def load_state(path: str | Path) -> DensityMatrix:
    """
    Read a density matrix and enforce every DensityMatrix invariant.

    Raises:
        StateFileError: unreadable file, bad JSON or wrong document shape.
        DimensionMismatchError: matrix not square or not prod(dims) in order.
        NotHermitianError, NormalizationError, NotPositiveError: invariant
            violations, each naming the offending quantity.
    """
    text = _read(path)
    try:
        document = StateDocument.model_validate_json(text)
    except ValidationError as e:
        raise StateFileError(
            f"malformed state file {path}: {_validation_message(e)}", details=e.errors()
        ) from e
    rows = document.matrix
    order = len(rows)
    if any(len(row) != order for row in rows):
        raise DimensionMismatchError(f"state file {path}: matrix is not square")
    if order != math.prod(document.dims):
        raise DimensionMismatchError(
            f"state file {path}: matrix order {order} does not match dims {document.dims}"
        )
    matrix = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=np.complex128)
    state = DensityMatrix.from_matrix(matrix.reshape(order, order), document.dims)
    utils.logger.info("state_io.load_state(): loaded %s with dims %s", path, document.dims)
    return state


def dumps_state(rho: DensityMatrix) -> str:
    document = StateDocument(
        dims=list(rho.dims),
        matrix=[[(float(value.real), float(value.imag)) for value in row] for row in rho.matrix],
    )
    return document.model_dump_json(indent=2) + "\n"


def save_state(rho: DensityMatrix, path: str | Path) -> None:
    utils.atomic_write_text(path, dumps_state(rho))
    utils.logger.info("state_io.save_state(): wrote %s", path)


def load_pure_state(path: str | Path) -> PureStateDocument:
    text = _read(path)
    try:
        return PureStateDocument.model_validate_json(text)
    except ValidationError as e:
        raise StateFileError(
            f"malformed pure-state file {path}: {_validation_message(e)}", details=e.errors()
        ) from e
