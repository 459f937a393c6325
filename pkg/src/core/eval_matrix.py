from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
import logging
import numbers
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import MatrixValidationError, ParameterError

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction, str, Decimal, float]

_NON_FINITE = {"inf", "+inf", "-inf", "infinity", "+infinity", "-infinity", "nan", "+nan", "-nan"}


def to_rational(value: RationalLike) -> Fraction:
    """
    Parse a value into an exact rational.

    Accepts integers, Fractions, Decimals, finite floats (taken at their exact
    binary value) and strings of the forms "n", "p/q" and decimal notation
    ("0.25", "-1.5e-2"). Decimal strings are read exactly, so "0.1" is 1/10.

    Raises:
        MatrixValidationError: kind 'non_finite' or 'unparseable'
    """
    if isinstance(value, bool):
        raise MatrixValidationError("unparseable", f"boolean {value!r} is not a number")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise MatrixValidationError("non_finite", f"{value!r} is not finite")
        return Fraction(value)
    if isinstance(value, numbers.Real):
        as_float = float(value)
        if as_float != as_float or as_float in (float("inf"), float("-inf")):
            raise MatrixValidationError("non_finite", f"{value!r} is not finite")
        return Fraction(as_float)
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in _NON_FINITE:
            raise MatrixValidationError("non_finite", f"{value!r} is not finite")
        if not text:
            raise MatrixValidationError("unparseable", "empty entry")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise MatrixValidationError("unparseable", f"cannot read {value!r} as a rational: {str(e)}")
    raise MatrixValidationError("unparseable", f"unsupported entry type {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Canonical text form: "n" for integers, "p/q" otherwise."""
    return str(Fraction(value))


def _frozen_array(rows: Sequence[Sequence[Fraction]], n_cols: int) -> np.ndarray:
    array = np.empty((len(rows), n_cols), dtype=object)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            array[i, j] = value
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class ThresholdPair:
    """A pair s < r; 'low' means value <= s and 'high' means value >= r."""

    s: Fraction
    r: Fraction

    def __post_init__(self):
        s = to_rational(self.s)
        r = to_rational(self.r)
        if not s < r:
            raise ParameterError(f"threshold pair needs s < r, got s={s}, r={r}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "r", r)

    @classmethod
    def parse(cls, text: str) -> "ThresholdPair":
        """Read "s,r" as used on the command line."""
        parts = [p for p in text.split(",")]
        if len(parts) != 2:
            raise ParameterError(f"thresholds must look like 's,r', got {text!r}")
        return cls(to_rational(parts[0]), to_rational(parts[1]))

    @property
    def gap(self) -> Fraction:
        return self.r - self.s

    @property
    def midpoint(self) -> Fraction:
        return (self.r + self.s) / 2

    def is_low(self, value: Fraction) -> bool:
        return value <= self.s

    def is_high(self, value: Fraction) -> bool:
        return value >= self.r

    def negated(self) -> "ThresholdPair":
        """Thresholds seen by -M: (s, r) becomes (-r, -s)."""
        return ThresholdPair(-self.r, -self.s)

    def relaxes_to(self, other: "ThresholdPair") -> bool:
        """True when every witness at self is also a witness at other."""
        return other.s >= self.s and other.r <= self.r

    def to_dict(self) -> Dict[str, str]:
        return {"s": format_rational(self.s), "r": format_rational(self.r)}


@dataclass(frozen=True, eq=False)
class EvalMatrix:
    """
    Finite matrix of formula values: rows are functions, columns are points.

    Entries are exact rationals in a read-only numpy object array. Build
    instances through validate_matrix; the derived constructors below keep
    every invariant by construction.
    """

    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]
    entries: np.ndarray
    bound: Fraction
    _mask_cache: Dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_rows(self) -> int:
        return len(self.row_labels)

    @property
    def n_cols(self) -> int:
        return len(self.col_labels)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i, j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return tuple(self.entries[i, :])

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self.entries[:, j])

    def rows(self) -> List[Tuple[Fraction, ...]]:
        return [self.row(i) for i in range(self.n_rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, EvalMatrix):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.bound == other.bound
            and self.entries.shape == other.entries.shape
            and bool(np.all(self.entries == other.entries))
        )

    def __hash__(self) -> int:
        return hash((self.row_labels, self.col_labels, self.bound, tuple(self.entries.flatten())))

    def _derive(self, row_labels: Sequence[str], col_labels: Sequence[str],
                rows: Sequence[Sequence[Fraction]], bound: Optional[Fraction] = None) -> "EvalMatrix":
        return EvalMatrix(
            row_labels=tuple(row_labels),
            col_labels=tuple(col_labels),
            entries=_frozen_array(rows, len(col_labels)),
            bound=self.bound if bound is None else bound,
        )

    def transpose(self) -> "EvalMatrix":
        return self._derive(self.col_labels, self.row_labels, [self.column(j) for j in range(self.n_cols)])

    def negate(self) -> "EvalMatrix":
        return self._derive(self.row_labels, self.col_labels, [[-v for v in row] for row in self.rows()])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "EvalMatrix":
        if not rows or not cols:
            raise ParameterError("a submatrix needs at least one row and one column")
        return self._derive(
            [self.row_labels[i] for i in rows],
            [self.col_labels[j] for j in cols],
            [[self.entries[i, j] for j in cols] for i in rows],
        )

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "EvalMatrix":
        """Relabel simultaneously: new row p is old row row_perm[p], likewise for columns."""
        if sorted(row_perm) != list(range(self.n_rows)) or sorted(col_perm) != list(range(self.n_cols)):
            raise ParameterError("permutations must cover every row and column exactly once")
        return self.submatrix(list(row_perm), list(col_perm))

    def append_rows(self, labels: Sequence[str], rows: Sequence[Sequence[Fraction]]) -> "EvalMatrix":
        """Return a matrix with extra rows; the bound grows if the new rows need it."""
        new_labels = list(self.row_labels) + list(labels)
        if len(set(new_labels)) != len(new_labels):
            raise MatrixValidationError("duplicate_label", "appended row labels collide with existing ones")
        extra = [[to_rational(v) for v in row] for row in rows]
        for row in extra:
            if len(row) != self.n_cols:
                raise MatrixValidationError("dimension", f"appended row has {len(row)} entries, expected {self.n_cols}")
        bound = max([self.bound] + [abs(v) for row in extra for v in row])
        return self._derive(new_labels, self.col_labels, self.rows() + extra, bound=bound)

    def distinct_values(self) -> List[Fraction]:
        return sorted(set(self.entries.flatten().tolist()))

    def value_range(self) -> Fraction:
        values = self.distinct_values()
        return values[-1] - values[0]

    def threshold_candidates(self, gap_min: Optional[Fraction] = None) -> List[ThresholdPair]:
        """All pairs s < r of distinct entry values, optionally with r - s >= gap_min."""
        values = self.distinct_values()
        pairs = []
        for a, s in enumerate(values):
            for r in values[a + 1:]:
                if gap_min is None or r - s >= gap_min:
                    pairs.append(ThresholdPair(s, r))
        return pairs

    def row_masks(self, t: ThresholdPair) -> Tuple[List[int], List[int]]:
        """
        Per row, bitmasks over columns: (high[i], low[i]) with bit j set when
        entry(i, j) >= r, respectively entry(i, j) <= s.
        """
        key = ("rows", t.s, t.r)
        if key not in self._mask_cache:
            high, low = [], []
            for i in range(self.n_rows):
                h = lo = 0
                for j in range(self.n_cols):
                    value = self.entries[i, j]
                    if value >= t.r:
                        h |= 1 << j
                    elif value <= t.s:
                        lo |= 1 << j
                high.append(h)
                low.append(lo)
            self._mask_cache[key] = (high, low)
        return self._mask_cache[key]

    def col_masks(self, t: ThresholdPair) -> Tuple[List[int], List[int]]:
        """Per column, bitmasks over rows: (high[j], low[j])."""
        key = ("cols", t.s, t.r)
        if key not in self._mask_cache:
            row_high, row_low = self.row_masks(t)
            high, low = [], []
            for j in range(self.n_cols):
                bit = 1 << j
                high.append(sum(1 << i for i in range(self.n_rows) if row_high[i] & bit))
                low.append(sum(1 << i for i in range(self.n_rows) if row_low[i] & bit))
            self._mask_cache[key] = (high, low)
        return self._mask_cache[key]

    def to_dict(self) -> Dict:
        return {
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "n_rows": self.n_rows,
            "n_cols": self.n_cols,
            "bound": format_rational(self.bound),
        }


def validate_matrix(raw_rows: Iterable, raw_cols: Iterable, raw_entries: Iterable,
                    bound: Optional[RationalLike] = None) -> EvalMatrix:
    """
    Check raw labels and entries and build an EvalMatrix.

    Args:
        raw_rows: row labels
        raw_cols: column labels
        raw_entries: one sequence of entries per row
        bound: declared sup bound C; defaults to the largest |entry| (1 for
            the all-zero matrix)

    Returns:
        A validated EvalMatrix

    Raises:
        MatrixValidationError: the first problem found, with the offending cell
    """
    row_labels = [str(label) for label in raw_rows]
    col_labels = [str(label) for label in raw_cols]
    if not row_labels or not col_labels:
        raise MatrixValidationError("empty_labels", "a matrix needs at least one row and one column label")
    for labels, axis in ((row_labels, "row"), (col_labels, "column")):
        seen = set()
        for label in labels:
            if label in seen:
                raise MatrixValidationError("duplicate_label", f"duplicate {axis} label {label!r}")
            seen.add(label)

    raw_entries = [list(row) for row in raw_entries]
    if len(raw_entries) != len(row_labels):
        raise MatrixValidationError(
            "dimension", f"{len(raw_entries)} entry rows for {len(row_labels)} row labels"
        )
    rows: List[List[Fraction]] = []
    for i, raw_row in enumerate(raw_entries):
        if len(raw_row) != len(col_labels):
            raise MatrixValidationError(
                "dimension",
                f"row {row_labels[i]!r} has {len(raw_row)} entries for {len(col_labels)} column labels",
            )
        parsed = []
        for j, raw in enumerate(raw_row):
            try:
                parsed.append(to_rational(raw))
            except MatrixValidationError as e:
                raise MatrixValidationError(e.kind, e.detail, cell=(row_labels[i], col_labels[j]))
        rows.append(parsed)

    if bound is None:
        declared = max(abs(v) for row in rows for v in row)
        if declared == 0:
            declared = Fraction(1)
    else:
        try:
            declared = to_rational(bound)
        except MatrixValidationError as e:
            raise MatrixValidationError("bound", f"invalid bound: {e.detail}")
        if declared <= 0:
            raise MatrixValidationError("bound", f"bound must be positive, got {declared}")
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                if abs(value) > declared:
                    raise MatrixValidationError(
                        "bound",
                        f"|{value}| exceeds the declared bound {declared}",
                        cell=(row_labels[i], col_labels[j]),
                    )

    logger.debug(f"validated {len(row_labels)}x{len(col_labels)} matrix with bound {declared}")
    return EvalMatrix(
        row_labels=tuple(row_labels),
        col_labels=tuple(col_labels),
        entries=_frozen_array(rows, len(col_labels)),
        bound=declared,
    )


def matrix_from_values(values: Sequence[Sequence[RationalLike]], bound: Optional[RationalLike] = None,
                       row_prefix: str = "r", col_prefix: str = "c") -> EvalMatrix:
    """Convenience builder with generated labels r1..rn, c1..cm."""
    values = [list(row) for row in values]
    if not values or not values[0]:
        raise MatrixValidationError("empty_labels", "a matrix needs at least one row and one column")
    rows = [f"{row_prefix}{i + 1}" for i in range(len(values))]
    cols = [f"{col_prefix}{j + 1}" for j in range(len(values[0]))]
    return validate_matrix(rows, cols, values, bound)
