from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.core.eval_matrix import EvalMatrix, format_rational, to_rational
from src.core.exceptions import ParameterError
from src.core.metrics import SearchMetrics
from src.convex_opt.mazur_approximator import MazurApproximator

Pair = Tuple[int, int]


@dataclass(frozen=True)
class FeatureFailure:
    """
    Transcript of an adversarial run that could not finish.

    `separation[i][n]` is |f_i(x_n) - f_i(y_n)| for feature i and recorded
    pair n; `pattern_length` is the longest prefix on which features chosen
    before a pair fail to separate it while later ones do.
    """

    reason: str
    pairs: Tuple[Pair, ...]
    features: Tuple[int, ...]
    separation: Tuple[Tuple[Fraction, ...], ...]
    pattern_length: int

    def to_dict(self) -> Dict:
        return {
            "failure": self.reason,
            "pairs": [list(p) for p in self.pairs],
            "features": list(self.features),
            "separation": [[format_rational(v) for v in row] for row in self.separation],
            "pattern_length": self.pattern_length,
        }


class FeatureSelector:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        """
        Args:
            config: `definable_approx` section:
                - cap: iteration limit; defaults to the number of ordered column pairs
        """
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.default_cap = self.config.get('cap')
        self.mazur = MazurApproximator(self.config, metrics)

    def select_features(self, M: EvalMatrix, A_rows: Sequence[int], target: Sequence, epsilon,
                        cap: Optional[int] = None) -> Union[List[int], FeatureFailure]:
        """
        Adversarial feature selection.

        While some column pair is within eps on every chosen feature yet more
        than 3*eps apart on the target, record the least such pair and add a
        row. Preferred is the least row within eps of the target on every
        recorded point; failing that, when the target on those points is
        within eps of conv(A_rows), the least row separating the new pair by
        more than eps.
        """
        try:
            epsilon = to_rational(epsilon)
            target = [to_rational(v) for v in target]
            self._check(M, A_rows, target, epsilon)
            if cap is None:
                cap = self.default_cap if self.default_cap is not None else M.n_cols * (M.n_cols - 1)
            rows = sorted(set(A_rows))

            features: List[int] = []
            pairs: List[Pair] = []
            while True:
                pair = self._violating_pair(M, features, target, epsilon)
                if pair is None:
                    self.logger.debug(f"selected features {features} after {len(pairs)} rounds")
                    return features
                pairs.append(pair)
                if len(pairs) > cap:
                    return self._failure("cap_reached", M, pairs, features, epsilon)
                row = self._admissible_row(M, rows, pairs, target, epsilon)
                if row is None:
                    return self._failure("no_admissible_row", M, pairs, features, epsilon)
                features.append(row)
        except Exception as e:
            self.logger.error(f"Error selecting features: {str(e)}")
            raise

    def _check(self, M: EvalMatrix, A_rows: Sequence[int], target: Sequence[Fraction], epsilon: Fraction) -> None:
        if epsilon <= 0:
            raise ParameterError(f"epsilon must be positive, got {epsilon}")
        if len(target) != M.n_cols:
            raise ParameterError(f"target has {len(target)} entries for {M.n_cols} columns")
        if not A_rows:
            raise ParameterError("the candidate row set is empty")
        for i in A_rows:
            if not 0 <= i < M.n_rows:
                raise ParameterError(f"row index {i} out of range")

    def _violating_pair(self, M: EvalMatrix, features: List[int], target: List[Fraction],
                        epsilon: Fraction) -> Optional[Pair]:
        for x in range(M.n_cols):
            for y in range(x + 1, M.n_cols):
                if abs(target[x] - target[y]) <= 3 * epsilon:
                    continue
                if all(abs(M.entries[i, x] - M.entries[i, y]) <= epsilon for i in features):
                    return (x, y)
        return None

    def _admissible_row(self, M: EvalMatrix, rows: List[int], pairs: List[Pair], target: List[Fraction],
                        epsilon: Fraction) -> Optional[int]:
        points = sorted({z for pair in pairs for z in pair})
        for i in rows:
            if all(abs(M.entries[i, z] - target[z]) <= epsilon for z in points):
                return i

        restricted = M.submatrix(rows, points)
        best = self.mazur.mazur_approx(restricted, list(range(len(rows))), [target[z] for z in points], 0)
        if best.distance > epsilon:
            self.logger.info(
                f"target sits {best.distance} away from the hull on recorded points, above {epsilon}"
            )
            return None
        x, y = pairs[-1]
        for i in rows:
            if abs(M.entries[i, x] - M.entries[i, y]) > epsilon:
                return i
        return None

    def _failure(self, reason: str, M: EvalMatrix, pairs: List[Pair], features: List[int],
                 epsilon: Fraction) -> FeatureFailure:
        separation = tuple(
            tuple(abs(M.entries[i, x] - M.entries[i, y]) for x, y in pairs)
            for i in features
        )
        length = 0
        for L in range(1, len(features) + 1):
            if all(
                (separation[i][n] > epsilon) == (i >= n)
                for i in range(L) for n in range(L)
            ):
                length = L
        self.logger.warning(f"feature selection failed ({reason}) after {len(pairs)} recorded pairs")
        return FeatureFailure(reason, tuple(pairs), tuple(features), separation, length)


def select_features(M: EvalMatrix, A_rows: Sequence[int], target: Sequence, epsilon,
                    cap: Optional[int] = None) -> Union[List[int], FeatureFailure]:
    return FeatureSelector({}).select_features(M, A_rows, target, epsilon, cap)
