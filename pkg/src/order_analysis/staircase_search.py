from dataclasses import dataclass
import logging
from typing import Dict, List, Optional, Tuple

from src.core.eval_matrix import EvalMatrix, ThresholdPair
from src.core.exceptions import CertificateError, ParameterError
from src.core.metrics import SearchMetrics
from src.core.witnesses import Orientation, StaircaseWitness, check_staircase

DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class OrderRankResult:
    rank: int
    witness: Optional[StaircaseWitness]
    exhausted: bool
    nodes: int = 0

    @property
    def orientation(self) -> Optional[Orientation]:
        return self.witness.orientation if self.witness is not None else None

    def to_dict(self) -> Dict:
        return {
            "rank": self.rank,
            "exhausted": self.exhausted,
            "orientation": self.orientation.value if self.orientation else None,
            "witness": self.witness.to_dict() if self.witness else None,
            "nodes": self.nodes,
        }


class _OrientedSearch:
    """
    Row-first depth-first search for one orientation.

    After choosing rows i_0..i_{t-1}, D[q] is the set of columns still usable
    at position q and `free` the set of columns usable at every later
    position. Every alive prefix is itself a valid staircase, with
    j_q = min D[q].
    """

    def __init__(self, M: EvalMatrix, t: ThresholdPair, k_max: int,
                 orientation: Orientation, budget: int):
        self.high, self.low = M.row_masks(t)
        self.n_rows = M.n_rows
        self.all_cols = (1 << M.n_cols) - 1
        self.k_max = k_max
        self.row_dominant = orientation is Orientation.ROW_DOMINANT
        self.budget = budget
        self.nodes = 0
        self.tripped = False
        self.best_rows: Tuple[int, ...] = ()
        self.best_cols: Tuple[int, ...] = ()

    def run(self) -> None:
        self._extend([], [], self.all_cols, 0)

    def _record(self, rows: List[int], columns: List[int]) -> None:
        self.best_rows = tuple(rows)
        self.best_cols = tuple((d & -d).bit_length() - 1 for d in columns)

    def _extend(self, rows: List[int], columns: List[int], free: int, used: int) -> None:
        depth = len(rows)
        best = len(self.best_rows)
        if best >= self.k_max or self.tripped:
            return
        if depth + min(bin(free).count("1"), self.n_rows - depth) <= best:
            return
        signatures = set()
        for i in range(self.n_rows):
            if used >> i & 1:
                continue
            signature = (self.high[i], self.low[i])
            if signature in signatures:
                continue
            signatures.add(signature)
            self.nodes += 1
            if self.nodes > self.budget:
                self.tripped = True
                return
            if self.row_dominant:
                updated = [d & self.high[i] for d in columns]
                new_free = free & self.low[i]
            else:
                updated = [d & self.low[i] for d in columns]
                new_free = free & self.high[i]
            diagonal = free & self.high[i]
            if not diagonal or not all(updated):
                continue
            updated.append(diagonal)
            rows.append(i)
            if len(rows) > len(self.best_rows):
                self._record(rows, updated)
            self._extend(rows, updated, new_free, used | 1 << i)
            rows.pop()
            if self.tripped or len(self.best_rows) >= self.k_max:
                return


class StaircaseSearch:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        """
        Initialize the staircase (order-property) search.

        Args:
            config: `order_analysis` section:
                - node_budget: int, nodes per orientation before giving up
        """
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.node_budget = int(self.config.get('node_budget', DEFAULT_NODE_BUDGET))
        self.metrics = metrics

    def order_rank(self, M: EvalMatrix, t: ThresholdPair, k_max: int) -> OrderRankResult:
        """
        Longest staircase at thresholds t in either orientation, capped at k_max.

        Returns:
            OrderRankResult; when the node budget trips, `exhausted` is False
            and `rank` is a certified lower bound
        """
        try:
            if not 1 <= k_max <= min(M.n_rows, M.n_cols):
                raise ParameterError(f"k_max must lie in 1..{min(M.n_rows, M.n_cols)}, got {k_max}")

            candidates = []
            nodes = 0
            exhausted = True
            for orientation in (Orientation.ROW_DOMINANT, Orientation.COL_DOMINANT):
                search = _OrientedSearch(M, t, k_max, orientation, self.node_budget)
                search.run()
                nodes += search.nodes
                if search.tripped:
                    exhausted = False
                if search.best_rows:
                    candidates.append(StaircaseWitness(search.best_rows, search.best_cols, t, orientation))

            # nothing longer than k_max is asked for
            if candidates and max(w.length for w in candidates) >= k_max:
                exhausted = True

            witness = None
            if candidates:
                rank = max(w.length for w in candidates)
                witness = min(
                    (w for w in candidates if w.length == rank),
                    key=lambda w: (w.rows, w.cols, w.orientation is not Orientation.ROW_DOMINANT),
                )
                if not check_staircase(M, witness):
                    raise CertificateError(f"staircase search produced an invalid witness {witness}")
            else:
                rank = 0

            if not exhausted:
                self.logger.warning(
                    f"staircase search at ({t.s}, {t.r}) hit its node budget; rank {rank} is a lower bound"
                )
            self.logger.debug(f"order rank at ({t.s}, {t.r}) = {rank} after {nodes} nodes")
            if self.metrics is not None:
                self.metrics.record_search('order', nodes, exhausted)
            return OrderRankResult(rank=rank, witness=witness, exhausted=exhausted, nodes=nodes)
        except Exception as e:
            self.logger.error(f"Error computing order rank at ({t.s}, {t.r}): {str(e)}")
            raise


def order_rank(M: EvalMatrix, t: ThresholdPair, k_max: int, node_budget: Optional[int] = None) -> OrderRankResult:
    config = {} if node_budget is None else {'node_budget': node_budget}
    return StaircaseSearch(config).order_rank(M, t, k_max)


def negation_transport(w: StaircaseWitness) -> Optional[StaircaseWitness]:
    """
    Map a length-k staircase on M at (s, r) to a length k - 1 staircase of the
    same orientation on -M at (-r, -s).

    Rows and columns are reversed and one index of each is dropped; the
    length-1 case has no counterpart.
    """
    k = w.length
    if k < 2:
        return None
    if w.orientation is Orientation.ROW_DOMINANT:
        rows = tuple(w.rows[k - 1 - p] for p in range(1, k))
        cols = tuple(w.cols[k - q] for q in range(1, k))
    else:
        rows = tuple(w.rows[k - p] for p in range(1, k))
        cols = tuple(w.cols[k - 1 - q] for q in range(1, k))
    return StaircaseWitness(rows, cols, w.thresholds.negated(), w.orientation)
