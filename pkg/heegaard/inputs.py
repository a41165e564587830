"""
Input files.

Three YAML shapes are accepted: a splitting (genus + 2g x 2g matrix), a
linked group (rank, torsion, linking as "num/den" strings) and a bare
integer matrix for the Smith normal form command.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import List, Optional, Union

import yaml
from pydantic import BaseModel, ValidationError, field_validator

from heegaard.errors import InputParseError
from heegaard.linked_group import LinkedGroup
from heegaard.matrices import IntegerMatrix
from heegaard.rationals import format_rational, parse_rational
from heegaard.symplectic import SymplecticMatrix

logger = logging.getLogger(__name__)


class MatrixInput(BaseModel):
    name: Optional[str] = None
    matrix: List[List[int]]

    @field_validator("matrix")
    @classmethod
    def rectangular(cls, rows: List[List[int]]) -> List[List[int]]:
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise ValueError("matrix rows have different lengths")
        return rows

    def to_matrix(self) -> IntegerMatrix:
        return IntegerMatrix.from_rows(self.matrix)

    @classmethod
    def from_dict(cls, data: dict):
        return cls(name=data.get("name"), matrix=data.get("matrix", []))


class SplittingInput(MatrixInput):
    genus: int

    @field_validator("genus")
    @classmethod
    def nonnegative(cls, genus: int) -> int:
        if genus < 0:
            raise ValueError("genus must be >= 0")
        return genus

    def to_symplectic(self) -> SymplecticMatrix:
        """
        Raises:
            DimensionError: if the matrix is not 2g x 2g
            NotSymplecticError: if a block identity fails
        """
        return SymplecticMatrix(self.genus, IntegerMatrix.from_rows(self.matrix, cols=2 * self.genus))

    @classmethod
    def from_dict(cls, data: dict):
        return cls(name=data.get("name"), genus=data.get("genus"), matrix=data.get("matrix", []))

    @classmethod
    def from_symplectic(cls, H: SymplecticMatrix, name: Optional[str] = None):
        return cls(name=name, genus=H.genus, matrix=H.matrix.tolist())

    def to_yaml(self) -> str:
        data = {"genus": self.genus, "matrix": self.matrix}
        if self.name:
            data = {"name": self.name, **data}
        return yaml.safe_dump(data, default_flow_style=None, sort_keys=False)


class LinkedGroupInput(BaseModel):
    name: Optional[str] = None
    rank: int = 0
    torsion: List[int] = []
    linking: List[List[str]] = []

    @field_validator("linking", mode="before")
    @classmethod
    def canonical_rationals(cls, rows) -> List[List[str]]:
        try:
            return [[format_rational(parse_rational(x)) for x in row] for row in rows or []]
        except InputParseError as e:
            raise ValueError(str(e))

    def to_linked_group(self) -> LinkedGroup:
        """
        Raises:
            InvalidLinkingError: if torsion or linking violate the linked-group invariants
        """
        return LinkedGroup.create(self.rank, self.torsion, self.linking)

    @classmethod
    def from_dict(cls, data: dict):
        return cls(
            name=data.get("name"),
            rank=data.get("rank", 0),
            torsion=data.get("torsion", []),
            linking=data.get("linking", []),
        )


InputFile = Union[SplittingInput, LinkedGroupInput, MatrixInput]


def parse_input(data) -> InputFile:
    """Pick the input model by the keys present."""
    if not isinstance(data, dict):
        raise InputParseError("input must be a mapping")
    try:
        if "genus" in data:
            return SplittingInput.from_dict(data)
        if "torsion" in data or "linking" in data:
            return LinkedGroupInput.from_dict(data)
        if "matrix" in data:
            return MatrixInput.from_dict(data)
    except ValidationError as e:
        raise InputParseError(f"invalid input: {e.errors()[0]['msg']}")
    raise InputParseError("input needs 'genus' and 'matrix', 'torsion' and 'linking', or 'matrix'")


def load_input(path: Union[str, Path]) -> InputFile:
    """
    Read and validate an input file.

    Raises:
        InputParseError: if the file is unreadable, not YAML, or has the wrong fields
    """
    try:
        with open(path, "r") as file:
            data = yaml.safe_load(file)
    except OSError as e:
        raise InputParseError(f"cannot read {path}: {e.strerror}")
    except yaml.YAMLError as e:
        raise InputParseError(f"{path} is not valid YAML: {e}")
    model = parse_input(data)
    logger.debug("loaded %s from %s", type(model).__name__, path)
    return model


def input_digest(model: BaseModel) -> str:
    """SHA-256 of the canonical JSON dump of a validated input."""
    canonical = json.dumps(model.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
