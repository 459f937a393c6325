from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict, Optional, Sequence, Tuple

from src.core.eval_matrix import format_rational, to_rational
from src.core.exceptions import CertificateError, LPInfeasibleError, ParameterError
from src.core.metrics import SearchMetrics
from .lp_solver import Constraint, ExactSimplexSolver, LinearProgram


@dataclass(frozen=True)
class GaugeResult:
    """Minkowski gauge of w for conv(+-generators); value None when w is outside the span."""

    value: Optional[Fraction]
    coefficients: Tuple[Fraction, ...]
    in_span: bool

    def to_dict(self) -> Dict:
        return {
            "in_span": self.in_span,
            "value": format_rational(self.value) if self.value is not None else None,
            "coefficients": [format_rational(c) for c in self.coefficients],
        }


class GaugeNorm:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.solver = ExactSimplexSolver(self.config, metrics)

    def gauge_norm(self, generators: Sequence[Sequence], w: Sequence) -> GaugeResult:
        """
        Minimum of sum |c_i| over exact representations w = sum c_i g_i.

        Each c_i is split as c_i+ - c_i- with both parts non-negative.
        """
        try:
            if not generators:
                raise ParameterError("at least one generator is needed")
            gens = [[to_rational(v) for v in g] for g in generators]
            target = [to_rational(v) for v in w]
            dim = len(target)
            if any(len(g) != dim for g in gens):
                raise ParameterError("generators and target must share one dimension")

            k = len(gens)
            constraints = tuple(
                Constraint(tuple([g[d] for g in gens] + [-g[d] for g in gens]), "==", target[d])
                for d in range(dim)
            )
            lp = LinearProgram(tuple([Fraction(1)] * (2 * k)), constraints)
            try:
                solution = self.solver.solve(lp)
            except LPInfeasibleError:
                self.logger.info("target lies outside the span of the generators")
                return GaugeResult(None, (), False)

            coefficients = tuple(solution.x[i] - solution.x[k + i] for i in range(k))
            for d in range(dim):
                if sum((c * g[d] for c, g in zip(coefficients, gens)), Fraction(0)) != target[d]:
                    raise CertificateError("gauge representation does not reproduce the target")
            value = sum((abs(c) for c in coefficients), Fraction(0))
            if value != solution.objective:
                raise CertificateError(f"gauge value {solution.objective} differs from |c|_1 = {value}")
            return GaugeResult(value, coefficients, True)
        except Exception as e:
            self.logger.error(f"Error computing gauge norm: {str(e)}")
            raise


def gauge_norm(generators: Sequence[Sequence], w: Sequence) -> GaugeResult:
    return GaugeNorm({}).gauge_norm(generators, w)
