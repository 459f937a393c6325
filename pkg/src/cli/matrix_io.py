import io
import logging
import re
from typing import Optional, TextIO, Union

import pandas as pd

from src.core.eval_matrix import EvalMatrix, RationalLike, format_rational, to_rational, validate_matrix
from src.core.exceptions import MatrixParseError, MatrixValidationError

logger = logging.getLogger(__name__)

_FIELD_COUNT = re.compile(r"Expected (\d+) fields in line (\d+), saw (\d+)")


def read_matrix_csv(source: Union[str, TextIO], bound: Optional[RationalLike] = None) -> EvalMatrix:
    """
    Read the CSV matrix layout: a header row with an empty corner cell and
    the column labels, then one row per function with its label first.

    Raises:
        MatrixParseError: malformed CSV or an unreadable entry, with 1-based line/column
        MatrixValidationError: duplicate labels or a bound violation
    """
    try:
        frame = pd.read_csv(source, header=None, dtype=str, keep_default_na=False, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise MatrixParseError("matrix file is empty", line=1, column=1)
    except pd.errors.ParserError as e:
        # pandas reports "Expected N fields in line L, saw M"
        match = _FIELD_COUNT.search(str(e))
        if match is None:
            raise MatrixParseError(f"malformed CSV: {str(e).strip()}")
        expected, line, seen = (int(g) for g in match.groups())
        raise MatrixParseError(f"expected {expected} fields, saw {seen}", line=line, column=expected + 1)
    frame = frame.fillna("")

    if frame.shape[0] < 2 or frame.shape[1] < 2:
        raise MatrixParseError("a matrix needs a header row, one data row and one data column", line=1, column=1)

    col_labels = [str(v).strip() for v in frame.iloc[0, 1:]]
    row_labels = []
    entries = []
    for r in range(1, frame.shape[0]):
        row_labels.append(str(frame.iat[r, 0]).strip())
        values = []
        for c in range(1, frame.shape[1]):
            raw = frame.iat[r, c]
            try:
                values.append(to_rational(raw))
            except MatrixValidationError as e:
                raise MatrixParseError(e.detail, line=r + 1, column=c + 1)
        entries.append(values)

    matrix = validate_matrix(row_labels, col_labels, entries, bound)
    logger.debug(f"read {matrix.n_rows}x{matrix.n_cols} matrix")
    return matrix


def matrix_to_frame(M: EvalMatrix) -> pd.DataFrame:
    return pd.DataFrame(
        [[format_rational(v) for v in M.row(i)] for i in range(M.n_rows)],
        index=list(M.row_labels),
        columns=list(M.col_labels),
    )


def matrix_to_csv_text(M: EvalMatrix) -> str:
    """Canonical CSV text: entries as "n" or "p/q", LF line endings."""
    buffer = io.StringIO()
    matrix_to_frame(M).to_csv(buffer, index_label="", lineterminator="\n")
    return buffer.getvalue()


def write_matrix_csv(M: EvalMatrix, path: str) -> None:
    with open(path, "w", newline="") as f:
        f.write(matrix_to_csv_text(M))
