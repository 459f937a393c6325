from dataclasses import dataclass
import logging
from typing import Dict, List, Optional, Tuple

from src.core.eval_matrix import EvalMatrix, ThresholdPair
from src.core.exceptions import CertificateError, ParameterError
from src.core.metrics import SearchMetrics
from src.core.witnesses import ShatterWitness, check_shatter

DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class IndependenceRankResult:
    rank: int
    witness: Optional[ShatterWitness]
    exhausted: bool
    nodes: int = 0

    def to_dict(self) -> Dict:
        return {
            "rank": self.rank,
            "exhausted": self.exhausted,
            "witness": self.witness.to_dict() if self.witness else None,
            "nodes": self.nodes,
        }


@dataclass(frozen=True)
class SignedIndependenceResult:
    """Independence ranks of A, of -A and of A and -A taken together."""

    positive: IndependenceRankResult
    negative: IndependenceRankResult
    joint: IndependenceRankResult
    joint_matrix: EvalMatrix

    @property
    def max_rank(self) -> int:
        return max(self.positive.rank, self.negative.rank, self.joint.rank)

    @property
    def realized_by(self) -> str:
        for name in ("positive", "negative", "joint"):
            if getattr(self, name).rank == self.max_rank:
                return name
        return "positive"

    @property
    def joint_exceeds_signs(self) -> bool:
        return self.joint.rank > max(self.positive.rank, self.negative.rank)

    def to_dict(self) -> Dict:
        return {
            "positive": self.positive.rank,
            "negative": self.negative.rank,
            "joint": self.joint.rank,
            "max": self.max_rank,
            "realized_by": self.realized_by,
            "joint_exceeds_signs": self.joint_exceeds_signs,
            "exhausted": self.positive.exhausted and self.negative.exhausted and self.joint.exhausted,
        }


class _BudgetTripped(Exception):
    pass


class _PatternCounter:
    """Column-pattern checks over one threshold pair; one instance per search call."""

    def __init__(self, high: List[int], low: List[int], budget: int):
        self.high = high
        self.low = low
        self.budget = budget
        self.nodes = 0

    def patterns(self, rows: int, count: bool = True) -> Optional[Dict[int, int]]:
        """Least column per low-pattern over `rows`, or None when some pattern is missing."""
        high, low = self.high, self.low
        needed = 1 << bin(rows).count("1")
        covering = [j for j in range(len(high)) if (high[j] | low[j]) & rows == rows]
        if count:
            self.nodes += len(covering) + 1
            if self.nodes > self.budget:
                raise _BudgetTripped()
        if len(covering) < needed:
            return None
        patterns: Dict[int, int] = {}
        for j in covering:
            patterns.setdefault(low[j] & rows, j)
        if len(patterns) < needed:
            return None
        return patterns


class ShatterSearch:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        """
        Initialize the shattering (independence) search.

        Args:
            config: `independence_analysis` section:
                - node_budget: int, column pattern checks before giving up
        """
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.node_budget = int(self.config.get('node_budget', DEFAULT_NODE_BUDGET))
        self.metrics = metrics

    def independence_rank(self, M: EvalMatrix, t: ThresholdPair, k_max: int) -> IndependenceRankResult:
        """
        Largest k <= k_max such that some k rows are shattered at t.

        Row sets are grown level by level: a (k+1)-set is a candidate only if
        all of its k-subsets are shattered, and it is dropped early when fewer
        than 2^(k+1) columns place every one of its rows strictly low or high.
        """
        try:
            if not 1 <= k_max <= M.n_rows:
                raise ParameterError(f"k_max must lie in 1..{M.n_rows}, got {k_max}")
            if 1 << k_max > self.node_budget:
                self.logger.warning(f"2^{k_max} patterns exceed the node budget {self.node_budget}")

            high, low = M.col_masks(t)
            counter = _PatternCounter(high, low, self.node_budget)

            best: Optional[Tuple[int, Dict[int, int]]] = None
            exhausted = True
            level: List[int] = []
            try:
                # level 1
                for i in range(M.n_rows):
                    patterns = counter.patterns(1 << i)
                    if patterns is not None:
                        level.append(1 << i)
                        if best is None:
                            best = (1 << i, patterns)
                size = 1
                while level and size < k_max:
                    shattered = set(level)
                    next_level = []
                    for base in level:
                        top = base.bit_length()
                        for i in range(top, M.n_rows):
                            candidate = base | 1 << i
                            if not all(candidate & ~(1 << b) in shattered
                                       for b in range(top) if candidate >> b & 1):
                                continue
                            patterns = counter.patterns(candidate)
                            if patterns is not None:
                                next_level.append(candidate)
                    if not next_level:
                        break
                    next_level.sort(key=lambda mask: [b for b in range(M.n_rows) if mask >> b & 1])
                    level = next_level
                    size += 1
                    best = (level[0], counter.patterns(level[0], count=False))
            except _BudgetTripped:
                exhausted = False

            nodes = counter.nodes
            if best is None:
                rank, witness = 0, None
            else:
                row_mask, patterns = best
                rows = tuple(b for b in range(M.n_rows) if row_mask >> b & 1)
                mapping = {
                    frozenset(b for b in rows if pattern >> b & 1): column
                    for pattern, column in patterns.items()
                }
                witness = ShatterWitness(rows, mapping, t)
                rank = len(rows)
                if not check_shatter(M, witness):
                    raise CertificateError(f"shatter search produced an invalid witness over rows {rows}")
            if rank >= k_max:
                exhausted = True

            if not exhausted:
                self.logger.warning(
                    f"shatter search at ({t.s}, {t.r}) hit its node budget; rank {rank} is a lower bound"
                )
            self.logger.debug(f"independence rank at ({t.s}, {t.r}) = {rank} after {nodes} checks")
            if self.metrics is not None:
                self.metrics.record_search('independence', nodes, exhausted)
            return IndependenceRankResult(rank=rank, witness=witness, exhausted=exhausted, nodes=nodes)
        except Exception as e:
            self.logger.error(f"Error computing independence rank at ({t.s}, {t.r}): {str(e)}")
            raise

    def signed_independence_rank(self, M: EvalMatrix, t: ThresholdPair, k_max: int) -> SignedIndependenceResult:
        """Ranks over A, over -A, and over the joint family A together with -A."""
        try:
            negated = M.negate()
            joint = M.append_rows(_negated_labels(M), negated.rows())
            positive = self.independence_rank(M, t, k_max)
            negative = self.independence_rank(negated, t, k_max)
            joint_result = self.independence_rank(joint, t, min(joint.n_rows, 2 * k_max))
            result = SignedIndependenceResult(positive, negative, joint_result, joint)
            if result.joint_exceeds_signs:
                self.logger.info(
                    f"joint sign family reaches rank {joint_result.rank} at ({t.s}, {t.r}), "
                    f"above the per-sign ranks {positive.rank}/{negative.rank}"
                )
            return result
        except Exception as e:
            self.logger.error(f"Error computing signed independence rank at ({t.s}, {t.r}): {str(e)}")
            raise


def _negated_labels(M: EvalMatrix) -> List[str]:
    taken = set(M.row_labels)
    labels = []
    for label in M.row_labels:
        candidate = f"-{label}"
        while candidate in taken:
            candidate = f"{candidate}'"
        taken.add(candidate)
        labels.append(candidate)
    return labels


def independence_rank(M: EvalMatrix, t: ThresholdPair, k_max: int,
                      node_budget: Optional[int] = None) -> IndependenceRankResult:
    config = {} if node_budget is None else {'node_budget': node_budget}
    return ShatterSearch(config).independence_rank(M, t, k_max)
