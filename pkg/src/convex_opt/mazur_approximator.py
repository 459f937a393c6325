from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Sequence

from src.core.eval_matrix import EvalMatrix, format_rational, to_rational
from src.core.exceptions import CertificateError, ParameterError
from src.core.metrics import SearchMetrics
from src.core.witnesses import CoefVector
from .lp_solver import Constraint, ExactSimplexSolver, LinearProgram


@dataclass(frozen=True)
class MazurResult:
    coefficients: CoefVector
    distance: Fraction

    def to_dict(self) -> Dict:
        return {"coefficients": self.coefficients.to_dict(), "distance": format_rational(self.distance)}


def sup_distance(vector: Sequence[Fraction], target: Sequence[Fraction]) -> Fraction:
    return max(abs(a - b) for a, b in zip(vector, target))


class MazurApproximator:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.solver = ExactSimplexSolver(self.config, metrics)

    def _tail(self, M: EvalMatrix, seq: Sequence[int], target: Sequence, tail: int):
        if len(target) != M.n_cols:
            raise ParameterError(f"target has {len(target)} entries for {M.n_cols} columns")
        if not 0 <= tail < len(seq):
            raise ParameterError(f"tail start {tail} leaves no rows of a length-{len(seq)} sequence")
        rows = list(seq[tail:])
        for i in rows:
            if not 0 <= i < M.n_rows:
                raise ParameterError(f"row index {i} out of range")
        return rows, [to_rational(v) for v in target]

    def mazur_approx(self, M: EvalMatrix, seq: Sequence[int], target: Sequence, tail: int) -> MazurResult:
        """
        Best sup-norm approximation of target by a convex combination of
        rows seq[tail:], solved as a Chebyshev LP.

        Variables are one weight per tail position plus the distance delta;
        weights of repeated rows are merged in the returned vector.
        """
        try:
            rows, target = self._tail(M, seq, target, tail)
            p = len(rows)
            constraints: List[Constraint] = []
            for j in range(M.n_cols):
                values = [M.entries[i, j] for i in rows]
                constraints.append(Constraint(tuple(values + [Fraction(-1)]), "<=", target[j]))
                constraints.append(Constraint(tuple(values + [Fraction(1)]), ">=", target[j]))
            constraints.append(Constraint(tuple([Fraction(1)] * p + [Fraction(0)]), "==", Fraction(1)))
            objective = tuple([Fraction(0)] * p + [Fraction(1)])
            solution = self.solver.solve(LinearProgram(objective, tuple(constraints)))

            merged: Dict[int, Fraction] = {}
            for i, weight in zip(rows, solution.x[:p]):
                if weight != 0:
                    merged[i] = merged.get(i, Fraction(0)) + weight
            coefficients = CoefVector(tuple(merged), tuple(merged.values()), convex=True)
            distance = solution.objective
            if sup_distance(coefficients.combine(M), target) != distance:
                raise CertificateError("convex combination does not reproduce the Chebyshev distance")
            self.logger.debug(f"Chebyshev distance {distance} over {p} tail rows")
            return MazurResult(coefficients, distance)
        except Exception as e:
            self.logger.error(f"Error computing Chebyshev average: {str(e)}")
            raise

    def cesaro_distance(self, M: EvalMatrix, seq: Sequence[int], target: Sequence, tail: int) -> Fraction:
        """Sup-distance of the plain average of rows seq[tail:] to target."""
        rows, target = self._tail(M, seq, target, tail)
        average = [sum((M.entries[i, j] for i in rows), Fraction(0)) / len(rows) for j in range(M.n_cols)]
        return sup_distance(average, target)


def mazur_approx(M: EvalMatrix, seq: Sequence[int], target: Sequence, tail: int) -> MazurResult:
    return MazurApproximator({}).mazur_approx(M, seq, target, tail)


def cesaro_distance(M: EvalMatrix, seq: Sequence[int], target: Sequence, tail: int) -> Fraction:
    return MazurApproximator({}).cesaro_distance(M, seq, target, tail)
