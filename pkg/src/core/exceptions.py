from typing import Optional, Sequence, Tuple


class DichotomyLabError(Exception):
    """Base class for every error raised by dichotomy-lab."""


class MatrixValidationError(DichotomyLabError):
    """
    Structured rejection of a raw matrix.

    Attributes:
        kind: one of 'dimension', 'duplicate_label', 'empty_labels', 'bound',
            'unparseable', 'non_finite'
        cell: (row label, column label) of the offending entry, if any
        detail: human readable description
    """

    def __init__(self, kind: str, detail: str, cell: Optional[Tuple[str, str]] = None):
        self.kind = kind
        self.cell = cell
        self.detail = detail
        where = f" at cell {cell}" if cell is not None else ""
        super().__init__(f"{kind}{where}: {detail}")


class MatrixParseError(DichotomyLabError):
    """CSV ingestion failure with a 1-based line/column position."""

    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        self.detail = detail
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{detail}{where}")


class ParameterError(DichotomyLabError, ValueError):
    """An argument is outside its admissible range."""


class WitnessIndexError(DichotomyLabError, IndexError):
    """A witness refers to a row or column the matrix does not have."""


class WitnessShapeError(DichotomyLabError, ValueError):
    """A witness is structurally malformed (lengths, duplicates, missing subsets)."""


class InvalidWitnessError(DichotomyLabError, ValueError):
    """A witness that must be valid fails its checker."""


class CertificateError(DichotomyLabError, AssertionError):
    """An internally produced certificate did not verify."""


class ReportIntegrityError(DichotomyLabError):
    """A report about to be written does not re-verify against its matrix."""


class LPError(DichotomyLabError):
    """Base class for linear programming failures."""


class LPInfeasibleError(LPError):
    """
    The constraint system has no solution.

    `farkas` holds one multiplier per constraint proving infeasibility.
    """

    def __init__(self, message: str, farkas: Sequence):
        self.farkas = list(farkas)
        super().__init__(message)


class LPUnboundedError(LPError):
    """
    The objective is unbounded on the feasible set.

    `point` is a feasible solution and `ray` a direction along which the
    objective improves without bound.
    """

    def __init__(self, message: str, point: Sequence, ray: Sequence):
        self.point = list(point)
        self.ray = list(ray)
        super().__init__(message)


class PivotLimitError(LPError):
    """The simplex exceeded its configured pivot guard."""
