from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.eval_matrix import EvalMatrix, ThresholdPair, format_rational
from src.core.exceptions import CertificateError, ParameterError
from src.core.metrics import SearchMetrics
from src.core.witnesses import check_staircase
from src.order_analysis.staircase_search import OrderRankResult, StaircaseSearch

DEFAULT_DENOMINATOR = 12


@dataclass(frozen=True)
class ProbeReport:
    base: OrderRankResult
    extended: OrderRankResult
    extended_matrix: EvalMatrix
    sample_weights: Dict[str, Tuple[Fraction, ...]]

    @property
    def extension_found(self) -> bool:
        return self.extended.rank > self.base.rank

    @property
    def sampled_rows_in_witness(self) -> List[str]:
        if not self.extension_found:
            return []
        labels = [self.extended_matrix.row_labels[i] for i in self.extended.witness.rows]
        return [label for label in labels if label in self.sample_weights]

    def to_dict(self) -> Dict:
        return {
            "base_rank": self.base.rank,
            "extended_rank": self.extended.rank,
            "extension_found": self.extension_found,
            "exhausted": self.base.exhausted and self.extended.exhausted,
            "witness": self.extended.witness.to_dict() if self.extension_found else None,
            "sampled_rows_in_witness": self.sampled_rows_in_witness,
            "samples": {
                label: [format_rational(w) for w in weights]
                for label, weights in self.sample_weights.items()
            },
        }


class StabilityProbe:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        """
        Args:
            config: `convex_opt` section:
                - probe_denominator: weights are drawn as integers 0..d before normalizing
                - node_budget: forwarded to the staircase search
        """
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.denominator = int(self.config.get('probe_denominator', DEFAULT_DENOMINATOR))
        self.search = StaircaseSearch(self.config, metrics)

    def conv_stability_probe(self, M: EvalMatrix, t: ThresholdPair, k: int, samples: int,
                             seed: int) -> ProbeReport:
        """
        Append `samples` seeded random convex combinations of rows and compare
        the longest staircase before and after. This is evidence, not a
        decision: no extension among the samples proves nothing about conv(A).
        """
        try:
            if samples < 1:
                raise ParameterError(f"samples must be at least 1, got {samples}")
            if k < 1:
                raise ParameterError(f"length cap must be at least 1, got {k}")

            rng = np.random.default_rng(seed)
            labels, rows, weights_by_label = [], [], {}
            taken = set(M.row_labels)
            for n in range(1, samples + 1):
                draws = rng.integers(0, self.denominator + 1, size=M.n_rows)
                if not draws.any():
                    draws[rng.integers(0, M.n_rows)] = 1
                total = int(draws.sum())
                weights = tuple(Fraction(int(d), total) for d in draws)
                label = f"conv#{n}"
                while label in taken:
                    label = f"{label}'"
                taken.add(label)
                labels.append(label)
                rows.append([
                    sum((w * M.entries[i, j] for i, w in enumerate(weights) if w), Fraction(0))
                    for j in range(M.n_cols)
                ])
                weights_by_label[label] = weights

            extended_matrix = M.append_rows(labels, rows)
            base = self.search.order_rank(M, t, min(k, M.n_rows, M.n_cols))
            extended = self.search.order_rank(extended_matrix, t, min(k, extended_matrix.n_rows, M.n_cols))
            report = ProbeReport(base, extended, extended_matrix, weights_by_label)
            if report.extension_found:
                if not check_staircase(extended_matrix, extended.witness):
                    raise CertificateError("probe extension witness does not re-verify")
                self.logger.warning(
                    f"sampled convex combinations extend the staircase from {base.rank} to {extended.rank} "
                    f"(rows {report.sampled_rows_in_witness})"
                )
            else:
                self.logger.info(f"no extension beyond rank {base.rank} among {samples} samples")
            return report
        except Exception as e:
            self.logger.error(f"Error running stability probe: {str(e)}")
            raise


def conv_stability_probe(M: EvalMatrix, t: ThresholdPair, k: int, samples: int, seed: int) -> ProbeReport:
    return StabilityProbe({}).conv_stability_probe(M, t, k, samples, seed)
