from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from src.core.eval_matrix import EvalMatrix, ThresholdPair, format_rational, to_rational
from src.core.exceptions import ParameterError
from src.core.metrics import SearchMetrics
from src.independence_analysis.shatter_search import IndependenceRankResult, ShatterSearch, SignedIndependenceResult
from src.order_analysis.staircase_search import OrderRankResult, StaircaseSearch


@dataclass(frozen=True)
class ClassificationParams:
    """
    Finite-scale cutoffs. `thresholds` None means: scan every pair of
    distinct entry values with gap at least gap_min.
    """

    thresholds: Optional[Tuple[ThresholdPair, ...]] = None
    k_stable: int = 4
    d_nip: int = 4
    gap_min: Optional[Fraction] = None
    k_max: Optional[int] = None
    d_max: Optional[int] = None
    signed_ranks: bool = True

    def __post_init__(self):
        if self.k_stable < 1 or self.d_nip < 1:
            raise ParameterError("cutoffs must be at least 1")
        if self.d_nip < self.k_stable:
            raise ParameterError(
                f"d_nip ({self.d_nip}) below k_stable ({self.k_stable}) would let a stable verdict "
                "coexist with a failed NIP verdict"
            )
        if self.k_max is not None and self.k_max < self.k_stable:
            raise ParameterError(
                f"k_max ({self.k_max}) below k_stable ({self.k_stable}) cannot reach the stability cutoff"
            )
        if self.d_max is not None and self.d_max < self.d_nip:
            raise ParameterError(f"d_max ({self.d_max}) below d_nip ({self.d_nip}) cannot reach the NIP cutoff")
        if self.gap_min is not None:
            gap = to_rational(self.gap_min)
            if gap <= 0:
                raise ParameterError(f"gap_min must be positive, got {gap}")
            object.__setattr__(self, "gap_min", gap)
        if self.thresholds is not None:
            object.__setattr__(self, "thresholds", tuple(self.thresholds))

    @classmethod
    def from_config(cls, config: Dict, **overrides) -> "ClassificationParams":
        values = {
            'k_stable': int(config.get('k_stable', 4)),
            'd_nip': int(config.get('d_nip', 4)),
            'gap_min': config.get('gap_min'),
            'signed_ranks': bool(config.get('signed_ranks', True)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def resolved_gap_min(self, M: EvalMatrix) -> Fraction:
        if self.gap_min is not None:
            return self.gap_min
        spread = M.value_range()
        return spread / 4 if spread > 0 else M.bound / 4

    def to_dict(self, M: EvalMatrix) -> Dict:
        return {
            "thresholds": [t.to_dict() for t in self.thresholds] if self.thresholds is not None else None,
            "k_stable": self.k_stable,
            "d_nip": self.d_nip,
            "gap_min": format_rational(self.resolved_gap_min(M)),
            "k_max": self.k_max,
            "d_max": self.d_max,
        }


@dataclass(frozen=True)
class ThresholdScan:
    thresholds: ThresholdPair
    order: OrderRankResult
    independence: IndependenceRankResult
    signed: Optional[SignedIndependenceResult] = None

    def to_dict(self) -> Dict:
        entry = {
            "thresholds": self.thresholds.to_dict(),
            "order_rank": self.order.rank,
            "order_exhausted": self.order.exhausted,
            "orientation": self.order.orientation.value if self.order.orientation else None,
            "independence_rank": self.independence.rank,
            "independence_exhausted": self.independence.exhausted,
        }
        if self.signed is not None:
            entry["signed_independence"] = self.signed.to_dict()
        return entry


@dataclass(frozen=True)
class Report:
    matrix: EvalMatrix
    params: ClassificationParams
    scans: Tuple[ThresholdScan, ...]
    stable_at_scale: bool
    nip_at_scale: bool
    budget_flags: Tuple[Dict, ...] = field(default_factory=tuple)

    @property
    def reflexive_like(self) -> bool:
        return self.stable_at_scale

    @property
    def rosenthal_like(self) -> bool:
        return self.nip_at_scale

    @property
    def wsc_like(self) -> bool:
        return self.stable_at_scale or not self.nip_at_scale

    @property
    def profile(self) -> str:
        if self.stable_at_scale:
            return "stable"
        if self.nip_at_scale:
            return "nip-unstable"
        return "ip"

    @property
    def inconclusive(self) -> bool:
        return bool(self.budget_flags)

    def max_order_rank(self) -> int:
        return max((s.order.rank for s in self.scans), default=0)

    def max_independence_rank(self) -> int:
        return max((s.independence.rank for s in self.scans), default=0)


class DichotomyClassifier:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        """
        Initialize the classifier.

        Args:
            config: full configuration; reads the `classifier`,
                `order_analysis` and `independence_analysis` sections
        """
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.workers = int(self.config.get('classifier', {}).get('workers', 1))
        self.order_search = StaircaseSearch(self.config.get('order_analysis', {}), metrics)
        self.shatter_search = ShatterSearch(self.config.get('independence_analysis', {}), metrics)

    def classify(self, M: EvalMatrix, p: ClassificationParams) -> Report:
        """
        Scan threshold pairs and derive the verdicts and Banach-side labels.

        A pair counts against stability when its staircase reaches k_stable
        or its search tripped; likewise for NIP with d_nip. An exhausted
        staircase search below d_nip also settles NIP at that pair, since a
        shattered set of size d yields a staircase of length d. That shortcut
        needs the true order rank, so a staircase cut off at k_max does not
        qualify.
        """
        try:
            pairs = list(p.thresholds) if p.thresholds is not None else M.threshold_candidates(p.resolved_gap_min(M))
            longest = min(M.n_rows, M.n_cols)
            k_max = min(p.k_max or longest, longest)
            d_max = min(p.d_max or M.n_rows, M.n_rows)

            def scan(t: ThresholdPair) -> ThresholdScan:
                order = self.order_search.order_rank(M, t, k_max)
                if p.signed_ranks:
                    signed = self.shatter_search.signed_independence_rank(M, t, d_max)
                    return ThresholdScan(t, order, signed.positive, signed)
                return ThresholdScan(t, order, self.shatter_search.independence_rank(M, t, d_max))

            if self.workers > 1 and len(pairs) > 1:
                with ThreadPoolExecutor(max_workers=self.workers) as executor:
                    scans = tuple(executor.map(scan, pairs))
            else:
                scans = tuple(scan(t) for t in pairs)

            stable = True
            nip = True
            flags: List[Dict] = []
            for s in scans:
                if s.order.rank >= p.k_stable:
                    stable = False
                elif not s.order.exhausted:
                    stable = False
                    flags.append({"thresholds": s.thresholds.to_dict(), "search": "order"})
                if s.independence.rank >= p.d_nip:
                    nip = False
                elif not s.independence.exhausted:
                    true_order = s.order.exhausted and (s.order.rank < k_max or k_max == longest)
                    if not (true_order and s.order.rank < p.d_nip):
                        nip = False
                        flags.append({"thresholds": s.thresholds.to_dict(), "search": "independence"})

            report = Report(M, p, scans, stable, nip, tuple(flags))
            self.logger.info(
                f"classified {M.n_rows}x{M.n_cols} over {len(scans)} threshold pairs: "
                f"profile {report.profile}, inconclusive {report.inconclusive}"
            )
            return report
        except Exception as e:
            self.logger.error(f"Error classifying {M.n_rows}x{M.n_cols} matrix: {str(e)}")
            raise


def classify(M: EvalMatrix, p: ClassificationParams, config: Optional[Dict] = None) -> Report:
    return DichotomyClassifier(config or {}).classify(M, p)
