from dataclasses import dataclass
import logging
from typing import Dict, Optional, Union

from src.core.eval_matrix import EvalMatrix, ThresholdPair, to_rational
from src.core.exceptions import CertificateError, ParameterError
from src.core.metrics import SearchMetrics
from src.core.witnesses import ShatterWitness, check_shatter
from src.independence_analysis.shatter_search import ShatterSearch
from .cauchy_extractor import CauchyBranch, largest_grid_cell


@dataclass(frozen=True)
class IndependentBranch:
    witness: ShatterWitness

    def to_dict(self) -> Dict:
        return {"branch": "independent", "witness": self.witness.to_dict()}


@dataclass(frozen=True)
class Inconclusive:
    """Neither branch reached its target within the given sizes and budget."""

    cauchy_length: int
    independence_rank: int
    exhausted: bool

    def to_dict(self) -> Dict:
        return {
            "branch": "inconclusive",
            "cauchy_length": self.cauchy_length,
            "independence_rank": self.independence_rank,
            "exhausted": self.exhausted,
        }


DichotomyResult = Union[CauchyBranch, IndependentBranch, Inconclusive]


class RosenthalDichotomy:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.metrics = metrics

    def rosenthal_dichotomy(self, M: EvalMatrix, t: ThresholdPair, epsilon, want_cauchy: int,
                            want_indep: int, budget: Optional[int] = None) -> DichotomyResult:
        """
        Try an epsilon-Cauchy subsequence of length want_cauchy first, then an
        independent subfamily of size want_indep; report Inconclusive when
        neither appears.
        """
        try:
            epsilon = to_rational(epsilon)
            if epsilon <= 0 or want_cauchy < 1 or want_indep < 1:
                raise ParameterError("epsilon, want_cauchy and want_indep must be positive")

            cauchy = largest_grid_cell(M, epsilon)
            if cauchy.length >= want_cauchy:
                if not cauchy.verify(M):
                    raise CertificateError(f"grid bucket {cauchy.indices} is not {epsilon}-close")
                self.logger.info(f"cauchy branch of length {cauchy.length} at epsilon {epsilon}")
                return cauchy

            search_config = dict(self.config)
            if budget is not None:
                search_config['node_budget'] = budget
            searcher = ShatterSearch(search_config, self.metrics)
            k_max = min(want_indep, M.n_rows)
            independence = searcher.independence_rank(M, t, k_max)
            if independence.rank >= want_indep:
                witness = independence.witness
                if not check_shatter(M, witness):
                    raise CertificateError(f"shatter witness over rows {witness.rows} does not re-verify")
                self.logger.info(f"independent branch over rows {list(witness.rows)}")
                return IndependentBranch(witness)

            self.logger.info(
                f"dichotomy inconclusive: cauchy length {cauchy.length} < {want_cauchy}, "
                f"independence rank {independence.rank} < {want_indep}"
            )
            return Inconclusive(cauchy.length, independence.rank, independence.exhausted)
        except Exception as e:
            self.logger.error(f"Error running dichotomy at ({t.s}, {t.r}): {str(e)}")
            raise


def rosenthal_dichotomy(M: EvalMatrix, t: ThresholdPair, epsilon, want_cauchy: int, want_indep: int,
                        budget: Optional[int] = None) -> DichotomyResult:
    return RosenthalDichotomy({}).rosenthal_dichotomy(M, t, epsilon, want_cauchy, want_indep, budget)
