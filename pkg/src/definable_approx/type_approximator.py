from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict, Optional, Sequence, Tuple, Union

from src.core.eval_matrix import EvalMatrix, format_rational, to_rational
from src.core.exceptions import CertificateError
from src.core.metrics import SearchMetrics
from .feature_selector import FeatureFailure, FeatureSelector
from .monotone_table import MonotoneTable, build_monotone_table, feature_vectors


@dataclass(frozen=True)
class ApproxResult:
    features: Tuple[int, ...]
    table: MonotoneTable
    approximant: Tuple[Fraction, ...]
    err: Fraction
    iterations: int
    epsilon: Fraction

    @property
    def within_three_epsilon(self) -> bool:
        return self.err <= 3 * self.epsilon

    def to_dict(self) -> Dict:
        return {
            "features": list(self.features),
            "table": self.table.to_dict(),
            "approximant": [format_rational(v) for v in self.approximant],
            "err": format_rational(self.err),
            "within_three_epsilon": self.within_three_epsilon,
            "iterations": self.iterations,
        }


class TypeApproximator:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.selector = FeatureSelector(self.config, metrics)

    def approximate(self, M: EvalMatrix, A_rows: Optional[Sequence[int]], target: Sequence, epsilon,
                    cap: Optional[int] = None) -> Union[ApproxResult, FeatureFailure]:
        """
        Select features, build h and evaluate it at every column.

        `err` is the exact sup-distance to the target and is reported whether
        or not it stays within 3*eps.
        """
        try:
            epsilon = to_rational(epsilon)
            target = [to_rational(v) for v in target]
            rows = list(range(M.n_rows)) if A_rows is None else list(A_rows)
            selected = self.selector.select_features(M, rows, target, epsilon, cap)
            if isinstance(selected, FeatureFailure):
                return selected

            table = build_monotone_table(M, selected, target, epsilon)
            if not table.is_monotone() or not table.sandwich_holds():
                raise CertificateError("monotone table breaks monotonicity or the sandwich bound")
            approximant = tuple(table.h(u) for u in feature_vectors(M, selected))
            err = max(abs(a - b) for a, b in zip(approximant, target))
            result = ApproxResult(tuple(selected), table, approximant, err, len(selected), epsilon)
            if not result.within_three_epsilon:
                self.logger.info(f"approximation error {err} exceeds 3*{epsilon}")
            return result
        except Exception as e:
            self.logger.error(f"Error approximating target: {str(e)}")
            raise


def approximate(M: EvalMatrix, A_rows: Optional[Sequence[int]], target: Sequence, epsilon,
                cap: Optional[int] = None) -> Union[ApproxResult, FeatureFailure]:
    return TypeApproximator({}).approximate(M, A_rows, target, epsilon, cap)
