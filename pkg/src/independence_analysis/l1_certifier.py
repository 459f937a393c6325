from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict

from src.core.eval_matrix import EvalMatrix, format_rational
from src.core.exceptions import ParameterError
from src.core.witnesses import CoefVector, ShatterWitness


@dataclass(frozen=True)
class L1Certificate:
    bound: Fraction
    achieved: Fraction
    holds: bool
    column: int

    def to_dict(self) -> Dict:
        return {
            "bound": format_rational(self.bound),
            "achieved": format_rational(self.achieved),
            "holds": self.holds,
            "column": self.column,
        }


class L1Certifier:
    def __init__(self, config: Dict = None):
        self.config = config or {}
        self.logger = logging.getLogger(__name__)

    def l1_lower_cert(self, M: EvalMatrix, w: ShatterWitness, c: CoefVector) -> L1Certificate:
        """
        Lower bound ((r - s) / 2) * sum |c_i| for the centred combination
        sum c_i (f_i - (r + s) / 2), evaluated at the columns realizing
        P = {i : c_i < 0} and its complement in the witness rows.

        A False `holds` means the witness or this code is broken.
        """
        try:
            rows = set(w.rows)
            outside = [i for i in c.support if i not in rows]
            if outside:
                raise ParameterError(f"coefficient support {outside} lies outside the witness rows")

            t = w.thresholds
            midpoint = t.midpoint
            negative = frozenset(i for i, ci in zip(c.support, c.coefficients) if ci < 0)
            bound = t.gap / 2 * c.l1_norm()

            achieved = None
            best_column = -1
            for subset in (negative, frozenset(rows) - negative):
                column = w.column_for(subset)
                value = abs(sum(
                    (ci * (M.entries[i, column] - midpoint) for i, ci in zip(c.support, c.coefficients)),
                    Fraction(0),
                ))
                if achieved is None or value > achieved:
                    achieved, best_column = value, column

            holds = achieved >= bound
            if not holds:
                self.logger.error(
                    f"l1 certificate failed: achieved {achieved} below bound {bound} on rows {list(w.rows)}"
                )
            return L1Certificate(bound=bound, achieved=achieved, holds=holds, column=best_column)
        except Exception as e:
            self.logger.error(f"Error certifying l1 lower bound: {str(e)}")
            raise


def l1_lower_cert(M: EvalMatrix, w: ShatterWitness, c: CoefVector) -> L1Certificate:
    return L1Certifier().l1_lower_cert(M, w, c)
