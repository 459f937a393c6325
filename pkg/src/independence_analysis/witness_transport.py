import logging

from src.core.eval_matrix import EvalMatrix
from src.core.exceptions import CertificateError, InvalidWitnessError
from src.core.witnesses import (
    Orientation, ShatterWitness, StaircaseWitness, check_chain, check_shatter, check_staircase,
)

logger = logging.getLogger(__name__)


def ip_to_op(M: EvalMatrix, w: ShatterWitness) -> StaircaseWitness:
    """
    Turn a shattered row set of size k into a row-dominant staircase of length k.

    Only the chain subsets P_t = rows[:t] are consulted: the column x_t
    witnessing P_t has row p low iff p < t, so rows in witness order against
    x_0..x_{k-1} form the staircase. A chain-only witness is accepted.

    Raises:
        InvalidWitnessError: the input does not check
        CertificateError: the produced staircase does not check
    """
    verdict = check_chain(M, w) if w.chain_only else check_shatter(M, w)
    if not verdict:
        raise InvalidWitnessError(f"shatter witness over rows {list(w.rows)} is invalid: {verdict.reason}")

    chain = w.chain_subsets()
    cols = tuple(w.column_for(chain[t]) for t in range(w.size))
    staircase = StaircaseWitness(w.rows, cols, w.thresholds, Orientation.ROW_DOMINANT)
    outcome = check_staircase(M, staircase)
    if not outcome:
        raise CertificateError(f"transported staircase fails at {outcome.cell}: {outcome.reason}")
    logger.debug(f"transported a degree-{w.size} shatter witness to a staircase over columns {list(cols)}")
    return staircase
