from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Tuple

from src.core.eval_matrix import EvalMatrix, ThresholdPair, format_rational
from src.core.exceptions import ParameterError
from src.core.metrics import SearchMetrics
from src.core.witnesses import StaircaseWitness
from .staircase_search import StaircaseSearch


@dataclass(frozen=True)
class DefectEntry:
    """Largest gap r - s admitting a length-k staircase; gap None means no such pair."""

    k: int
    gap: Optional[Fraction]
    thresholds: Optional[ThresholdPair]
    witness: Optional[StaircaseWitness]

    def to_dict(self) -> Dict:
        return {
            "k": self.k,
            "gap": format_rational(self.gap) if self.gap is not None else None,
            "thresholds": self.thresholds.to_dict() if self.thresholds else None,
            "witness": self.witness.to_dict() if self.witness else None,
        }


@dataclass(frozen=True)
class DefectProfile:
    entries: Tuple[DefectEntry, ...]
    exhausted: bool

    def gap(self, k: int) -> Optional[Fraction]:
        return self.entries[k - 1].gap

    def to_dict(self) -> Dict:
        return {"exhausted": self.exhausted, "entries": [e.to_dict() for e in self.entries]}


class DefectProfiler:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.search = StaircaseSearch(self.config, metrics)

    def defect_profile(self, M: EvalMatrix, k_max: int) -> DefectProfile:
        """
        Per length k <= k_max, the maximum gap over threshold pairs of distinct
        entry values that admit a length-k staircase in either orientation.

        Ties between pairs of equal gap go to the smallest (s, r).
        """
        try:
            if not 1 <= k_max <= min(M.n_rows, M.n_cols):
                raise ParameterError(f"k_max must lie in 1..{min(M.n_rows, M.n_cols)}, got {k_max}")

            best: List[Optional[Tuple[Fraction, ThresholdPair, StaircaseWitness]]] = [None] * k_max
            exhausted = True
            for t in M.threshold_candidates():
                result = self.search.order_rank(M, t, k_max)
                exhausted = exhausted and result.exhausted
                for k in range(1, result.rank + 1):
                    current = best[k - 1]
                    if current is None or t.gap > current[0]:
                        best[k - 1] = (t.gap, t, result.witness.prefix(k))

            entries = tuple(
                DefectEntry(k, None, None, None) if best[k - 1] is None
                else DefectEntry(k, best[k - 1][0], best[k - 1][1], best[k - 1][2])
                for k in range(1, k_max + 1)
            )
            self.logger.info(
                f"defect profile over {M.n_rows}x{M.n_cols}: "
                + ", ".join(f"k={e.k}:{e.gap}" for e in entries)
            )
            return DefectProfile(entries=entries, exhausted=exhausted)
        except Exception as e:
            self.logger.error(f"Error computing defect profile: {str(e)}")
            raise


def defect_profile(M: EvalMatrix, k_max: int, node_budget: Optional[int] = None) -> DefectProfile:
    config = {} if node_budget is None else {'node_budget': node_budget}
    return DefectProfiler(config).defect_profile(M, k_max)
