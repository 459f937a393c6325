from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from .eval_matrix import EvalMatrix, ThresholdPair, to_rational
from .exceptions import WitnessIndexError, WitnessShapeError


class Orientation(str, Enum):
    ROW_DOMINANT = "row-dominant"
    COL_DOMINANT = "col-dominant"

    def flipped(self) -> "Orientation":
        if self is Orientation.ROW_DOMINANT:
            return Orientation.COL_DOMINANT
        return Orientation.ROW_DOMINANT


@dataclass(frozen=True)
class WitnessCheck:
    """
    Outcome of a witness check; truthy iff the witness is valid.

    For staircases `cell` is the (row, col) matrix index of the first
    violation in row-major order of positions and `position` the (p, q)
    pair of 0-based witness positions. For shatter witnesses `subset` and
    `row` name the first failing pattern and row.
    """

    valid: bool
    cell: Optional[Tuple[int, int]] = None
    position: Optional[Tuple[int, int]] = None
    subset: Optional[FrozenSet[int]] = None
    row: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class StaircaseWitness:
    """Row and column index sequences certifying a staircase of length k."""

    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    thresholds: ThresholdPair
    orientation: Orientation = Orientation.ROW_DOMINANT

    def __post_init__(self):
        rows = tuple(int(i) for i in self.rows)
        cols = tuple(int(j) for j in self.cols)
        if len(rows) < 1:
            raise WitnessShapeError("a staircase needs k >= 1")
        if len(rows) != len(cols):
            raise WitnessShapeError(f"{len(rows)} rows but {len(cols)} columns")
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise WitnessShapeError("staircase indices must be distinct")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "orientation", Orientation(self.orientation))

    @property
    def length(self) -> int:
        return len(self.rows)

    def expects_high(self, p: int, q: int) -> bool:
        if self.orientation is Orientation.ROW_DOMINANT:
            return p >= q
        return p <= q

    def prefix(self, k: int) -> "StaircaseWitness":
        return StaircaseWitness(self.rows[:k], self.cols[:k], self.thresholds, self.orientation)

    def transposed(self) -> "StaircaseWitness":
        """The same pattern read on the transpose of the matrix."""
        return StaircaseWitness(self.cols, self.rows, self.thresholds, self.orientation.flipped())

    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (self.rows, self.cols)

    def to_dict(self) -> Dict:
        return {
            "kind": "staircase",
            "rows": list(self.rows),
            "cols": list(self.cols),
            "thresholds": self.thresholds.to_dict(),
            "orientation": self.orientation.value,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "StaircaseWitness":
        t = data["thresholds"]
        return cls(
            tuple(data["rows"]),
            tuple(data["cols"]),
            ThresholdPair(to_rational(t["s"]), to_rational(t["r"])),
            Orientation(data["orientation"]),
        )


def _subset_order(rows: Sequence[int]) -> Iterator[FrozenSet[int]]:
    """Subsets of rows in bitmask order over witness positions."""
    for mask in range(1 << len(rows)):
        yield frozenset(rows[b] for b in range(len(rows)) if mask >> b & 1)


@dataclass(frozen=True)
class ShatterWitness:
    """
    Subset-to-column map certifying that a row set is shattered.

    A chain-only witness carries just the k + 1 chain subsets
    {rows[:t] : t = 0..k}; it is accepted by ip_to_op but not by check_shatter.
    """

    rows: Tuple[int, ...]
    witness: Mapping[FrozenSet[int], int]
    thresholds: ThresholdPair
    chain_only: bool = field(default=False)

    def __post_init__(self):
        rows = tuple(int(i) for i in self.rows)
        if len(rows) < 1:
            raise WitnessShapeError("a shatter witness needs at least one row")
        if len(set(rows)) != len(rows):
            raise WitnessShapeError("shatter witness rows must be distinct")
        row_set = set(rows)
        cleaned = {}
        for subset, column in dict(self.witness).items():
            subset = frozenset(int(i) for i in subset)
            if not subset <= row_set:
                raise WitnessShapeError(f"subset {sorted(subset)} is not inside the witness rows")
            cleaned[subset] = int(column)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "witness", MappingProxyType(cleaned))

    @classmethod
    def chain(cls, rows: Sequence[int], columns: Sequence[int], thresholds: ThresholdPair) -> "ShatterWitness":
        """Relaxed form: columns[t] witnesses the chain subset rows[:t]."""
        if len(columns) != len(rows) + 1:
            raise WitnessShapeError(f"a chain witness over {len(rows)} rows needs {len(rows) + 1} columns")
        mapping = {frozenset(rows[:t]): columns[t] for t in range(len(rows) + 1)}
        return cls(tuple(rows), mapping, thresholds, chain_only=True)

    @property
    def size(self) -> int:
        return len(self.rows)

    def is_total(self) -> bool:
        return len(self.witness) == 1 << len(self.rows)

    def chain_subsets(self) -> List[FrozenSet[int]]:
        return [frozenset(self.rows[:t]) for t in range(len(self.rows) + 1)]

    def column_for(self, subset) -> int:
        key = frozenset(subset)
        if key not in self.witness:
            raise WitnessShapeError(f"witness map has no column for subset {sorted(key)}")
        return self.witness[key]

    def restrict(self, rows: Sequence[int]) -> "ShatterWitness":
        """Witness for a sub-row-set, reusing the parent columns."""
        if not set(rows) <= set(self.rows):
            raise WitnessShapeError("restriction rows must be witness rows")
        if not self.is_total():
            raise WitnessShapeError("only a total witness can be restricted")
        mapping = {subset: self.witness[subset] for subset in _subset_order(tuple(rows))}
        return ShatterWitness(tuple(rows), mapping, self.thresholds)

    def to_dict(self) -> Dict:
        subsets = self.chain_subsets() if self.chain_only else list(_subset_order(self.rows))
        return {
            "kind": "shatter",
            "rows": list(self.rows),
            "thresholds": self.thresholds.to_dict(),
            "chain_only": self.chain_only,
            "witness": [
                {"subset": [i for i in self.rows if i in subset], "column": self.witness[subset]}
                for subset in subsets
                if subset in self.witness
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ShatterWitness":
        t = data["thresholds"]
        mapping = {frozenset(item["subset"]): item["column"] for item in data["witness"]}
        return cls(
            tuple(data["rows"]),
            mapping,
            ThresholdPair(to_rational(t["s"]), to_rational(t["r"])),
            chain_only=bool(data.get("chain_only", False)),
        )


def _check_indices(M: EvalMatrix, rows: Sequence[int], cols: Sequence[int]) -> None:
    for i in rows:
        if not 0 <= i < M.n_rows:
            raise WitnessIndexError(f"row index {i} out of range for {M.n_rows} rows")
    for j in cols:
        if not 0 <= j < M.n_cols:
            raise WitnessIndexError(f"column index {j} out of range for {M.n_cols} columns")


def check_staircase(M: EvalMatrix, w: StaircaseWitness) -> WitnessCheck:
    """
    Check the orientation condition at every (p, q) position pair.

    Returns the first violation in row-major position order.

    Raises:
        WitnessIndexError: an index is outside the matrix
    """
    _check_indices(M, w.rows, w.cols)
    t = w.thresholds
    for p, i in enumerate(w.rows):
        for q, j in enumerate(w.cols):
            value = M.entries[i, j]
            if w.expects_high(p, q):
                if not t.is_high(value):
                    return WitnessCheck(False, cell=(i, j), position=(p, q),
                                        reason=f"entry {value} should be >= {t.r}")
            elif not t.is_low(value):
                return WitnessCheck(False, cell=(i, j), position=(p, q),
                                    reason=f"entry {value} should be <= {t.s}")
    return WitnessCheck(True)


def _check_pattern(M: EvalMatrix, rows: Sequence[int], subset: FrozenSet[int], column: int,
                   t: ThresholdPair) -> Optional[WitnessCheck]:
    for i in rows:
        value = M.entries[i, column]
        if i in subset and not t.is_low(value):
            return WitnessCheck(False, subset=subset, row=i, cell=(i, column),
                                reason=f"row {i} should be low at column {column}, got {value}")
        if i not in subset and not t.is_high(value):
            return WitnessCheck(False, subset=subset, row=i, cell=(i, column),
                                reason=f"row {i} should be high at column {column}, got {value}")
    return None


def check_shatter(M: EvalMatrix, w: ShatterWitness) -> WitnessCheck:
    """
    Check every subset pattern of a total shatter witness.

    Raises:
        WitnessShapeError: the witness map misses a subset
        WitnessIndexError: an index is outside the matrix
    """
    _check_indices(M, w.rows, list(w.witness.values()))
    for subset in _subset_order(w.rows):
        column = w.column_for(subset)
        failure = _check_pattern(M, w.rows, subset, column, w.thresholds)
        if failure is not None:
            return failure
    return WitnessCheck(True)


def check_chain(M: EvalMatrix, w: ShatterWitness) -> WitnessCheck:
    """Check only the chain subsets rows[:t]; accepts relaxed and total witnesses."""
    _check_indices(M, w.rows, list(w.witness.values()))
    for subset in w.chain_subsets():
        failure = _check_pattern(M, w.rows, subset, w.column_for(subset), w.thresholds)
        if failure is not None:
            return failure
    return WitnessCheck(True)


@dataclass(frozen=True)
class CoefVector:
    """Coefficients over a duplicate-free row support; `convex` adds the simplex constraint."""

    support: Tuple[int, ...]
    coefficients: Tuple[Fraction, ...]
    convex: bool = False

    def __post_init__(self):
        support = tuple(int(i) for i in self.support)
        coefficients = tuple(to_rational(c) for c in self.coefficients)
        if len(support) != len(coefficients):
            raise WitnessShapeError("support and coefficients must align")
        if len(set(support)) != len(support):
            raise WitnessShapeError("coefficient support must be duplicate-free")
        if self.convex:
            if any(c < 0 for c in coefficients):
                raise WitnessShapeError("convex coefficients must be non-negative")
            if sum(coefficients, Fraction(0)) != 1:
                raise WitnessShapeError("convex coefficients must sum to exactly 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "coefficients", coefficients)

    def l1_norm(self) -> Fraction:
        return sum((abs(c) for c in self.coefficients), Fraction(0))

    def combine(self, M: EvalMatrix) -> List[Fraction]:
        """The vector sum c_i * row_i over the support."""
        total = [Fraction(0)] * M.n_cols
        for i, c in zip(self.support, self.coefficients):
            for j in range(M.n_cols):
                total[j] += c * M.entries[i, j]
        return total

    def to_dict(self) -> Dict:
        return {
            "support": list(self.support),
            "coefficients": [str(c) for c in self.coefficients],
            "convex": self.convex,
        }
