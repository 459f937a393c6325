from dataclasses import dataclass
from fractions import Fraction
import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np

from src.core.eval_matrix import EvalMatrix, format_rational, to_rational
from src.core.exceptions import ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CauchyBranch:
    """Rows whose pairwise sup-distance is at most epsilon."""

    indices: Tuple[int, ...]
    epsilon: Fraction

    @property
    def length(self) -> int:
        return len(self.indices)

    def verify(self, M: EvalMatrix) -> bool:
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            return False
        for x, a in enumerate(self.indices):
            for b in self.indices[x + 1:]:
                if max(abs(M.entries[a, j] - M.entries[b, j]) for j in range(M.n_cols)) > self.epsilon:
                    return False
        return True

    def to_dict(self) -> Dict:
        return {"branch": "cauchy", "indices": list(self.indices), "epsilon": format_rational(self.epsilon)}


def grid_cells_per_axis(bound: Fraction, epsilon: Fraction) -> int:
    """Number of width-epsilon cells covering [-C, C]; the last one is closed."""
    return max(1, math.ceil(2 * bound / epsilon))


def largest_grid_cell(M: EvalMatrix, epsilon) -> CauchyBranch:
    """
    Bucket rows by the grid of half-open cells [-C + k*eps, -C + (k+1)*eps)
    applied to every coordinate, the top cell closed at C. Returns the
    largest bucket, ties going to the bucket whose first row comes first.
    """
    epsilon = to_rational(epsilon)
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    top = grid_cells_per_axis(M.bound, epsilon) - 1
    cells = np.minimum((M.entries + M.bound) // epsilon, top)

    buckets: Dict[Tuple[int, ...], list] = {}
    for i in range(M.n_rows):
        buckets.setdefault(tuple(int(k) for k in cells[i]), []).append(i)
    largest = max(buckets.values(), key=lambda rows: (len(rows), -rows[0]))
    logger.debug(f"{len(buckets)} occupied grid cells; largest holds {len(largest)} rows")
    return CauchyBranch(tuple(largest), epsilon)


def cauchy_subsequence(M: EvalMatrix, epsilon, want: int) -> Optional[CauchyBranch]:
    """The largest grid bucket if it holds at least `want` rows, else None."""
    if want < 1:
        raise ParameterError(f"target length must be positive, got {want}")
    branch = largest_grid_cell(M, epsilon)
    if branch.length < want:
        return None
    return branch


def pigeonhole_guarantee(M: EvalMatrix, epsilon) -> Fraction:
    """Lower bound #rows / ceil(2C/eps)^#cols on the largest bucket."""
    epsilon = to_rational(epsilon)
    return Fraction(M.n_rows, grid_cells_per_axis(M.bound, epsilon) ** M.n_cols)
