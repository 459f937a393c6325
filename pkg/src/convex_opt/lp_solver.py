"""
Exact rational simplex.

Every problem is taken over non-negative variables. The tableau is a numpy
object array of Fractions kept in canonical form; an artificial variable sits
on every row so that phase 1 starts from the identity basis, and the
artificial columns keep holding B^-1 for dual extraction in phase 2.
Bland's rule picks entering and leaving variables, so the method terminates.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.eval_matrix import format_rational, to_rational
from src.core.exceptions import CertificateError, LPError, LPInfeasibleError, LPUnboundedError, PivotLimitError
from src.core.metrics import SearchMetrics

DEFAULT_MAX_PIVOTS = 100_000
SENSES = ("<=", ">=", "==")

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Constraint:
    coefficients: Tuple[Fraction, ...]
    sense: str
    rhs: Fraction

    def __post_init__(self):
        if self.sense not in SENSES:
            raise LPError(f"unknown constraint sense {self.sense!r}")
        object.__setattr__(self, "coefficients", tuple(to_rational(a) for a in self.coefficients))
        object.__setattr__(self, "rhs", to_rational(self.rhs))

    def activity(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coefficients, x)), ZERO)

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        value = self.activity(x)
        if self.sense == "<=":
            return value <= self.rhs
        if self.sense == ">=":
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """Optimize objective . x subject to the constraints and x >= 0."""

    objective: Tuple[Fraction, ...]
    constraints: Tuple[Constraint, ...] = field(default_factory=tuple)
    maximize: bool = False

    def __post_init__(self):
        objective = tuple(to_rational(c) for c in self.objective)
        if not objective:
            raise LPError("a linear program needs at least one variable")
        constraints = tuple(self.constraints)
        for k, row in enumerate(constraints):
            if len(row.coefficients) != len(objective):
                raise LPError(f"constraint {k} has {len(row.coefficients)} coefficients for {len(objective)} variables")
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "constraints", constraints)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), ZERO)

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        return all(v >= 0 for v in x) and all(row.satisfied_by(x) for row in self.constraints)


@dataclass(frozen=True)
class LPSolution:
    """
    Optimal basic solution.

    `duals` has one multiplier per constraint in the problem's own sense:
    for a minimization A^T y <= c, for a maximization A^T y >= c, and in
    both cases b . y equals `objective`.
    """

    x: Tuple[Fraction, ...]
    objective: Fraction
    duals: Tuple[Fraction, ...]
    pivots: int

    def to_dict(self) -> Dict:
        return {
            "x": [format_rational(v) for v in self.x],
            "objective": format_rational(self.objective),
            "duals": [format_rational(v) for v in self.duals],
            "pivots": self.pivots,
        }


def farkas_holds(lp: LinearProgram, u: Sequence[Fraction]) -> bool:
    """u <= 0 on '<=' rows, u >= 0 on '>=' rows, A^T u <= 0 and b . u > 0."""
    if len(u) != len(lp.constraints):
        return False
    for row, ui in zip(lp.constraints, u):
        if row.sense == "<=" and ui > 0:
            return False
        if row.sense == ">=" and ui < 0:
            return False
    for j in range(lp.n_vars):
        if sum((row.coefficients[j] * ui for row, ui in zip(lp.constraints, u)), ZERO) > 0:
            return False
    return sum((row.rhs * ui for row, ui in zip(lp.constraints, u)), ZERO) > 0


def ray_holds(lp: LinearProgram, point: Sequence[Fraction], ray: Sequence[Fraction]) -> bool:
    """point is feasible, point + t*ray stays feasible for t >= 0, and the objective improves along ray."""
    if not lp.is_feasible(point) or any(d < 0 for d in ray) or not any(ray):
        return False
    for row in lp.constraints:
        direction = row.activity(ray)
        if row.sense == "<=" and direction > 0:
            return False
        if row.sense == ">=" and direction < 0:
            return False
        if row.sense == "==" and direction != 0:
            return False
    slope = lp.value(ray)
    return slope > 0 if lp.maximize else slope < 0


class ExactSimplexSolver:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        """
        Args:
            config: `convex_opt` section:
                - max_pivots: pivot guard per solve (phase 1 and 2 together)
        """
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.max_pivots = int(self.config.get('max_pivots', DEFAULT_MAX_PIVOTS))
        self.metrics = metrics

    def solve(self, lp: LinearProgram) -> LPSolution:
        """
        Solve exactly.

        Raises:
            LPInfeasibleError: carries a Farkas certificate, one entry per constraint
            LPUnboundedError: carries a feasible point and an improving ray
            PivotLimitError: the pivot guard tripped
        """
        try:
            state = _Tableau(lp, self.max_pivots)
            try:
                solution = state.run()
            except LPInfeasibleError as e:
                self._record("infeasible", state.pivots)
                if not farkas_holds(lp, e.farkas):
                    raise CertificateError("Farkas certificate does not verify")
                self.logger.debug(f"infeasible after {state.pivots} pivots")
                raise
            except LPUnboundedError as e:
                self._record("unbounded", state.pivots)
                if not ray_holds(lp, e.point, e.ray):
                    raise CertificateError("unbounded ray does not verify")
                self.logger.debug(f"unbounded after {state.pivots} pivots")
                raise
            except PivotLimitError:
                self._record("pivot_limit", state.pivots)
                self.logger.warning(f"simplex stopped at the pivot guard {self.max_pivots}")
                raise
            self._record("optimal", solution.pivots)
            _verify_optimality(lp, solution)
            return solution
        except LPError:
            raise
        except Exception as e:
            self.logger.error(f"Error solving linear program: {str(e)}")
            raise

    def _record(self, status: str, pivots: int) -> None:
        if self.metrics is not None:
            self.metrics.record_lp(status, pivots)


class _Tableau:
    def __init__(self, lp: LinearProgram, max_pivots: int):
        self.lp = lp
        self.max_pivots = max_pivots
        self.pivots = 0
        m, n = len(lp.constraints), lp.n_vars
        self.m, self.n = m, n

        slack_of: Dict[int, int] = {}
        column = n
        for i, row in enumerate(lp.constraints):
            if row.sense != "==":
                slack_of[i] = column
                column += 1
        self.n_slack = column - n
        self.art_start = column
        self.width = column + m

        T = np.full((m, self.width + 1), ZERO, dtype=object)
        self.sign = []
        for i, row in enumerate(lp.constraints):
            sigma = -1 if row.rhs < 0 else 1
            self.sign.append(sigma)
            for j, a in enumerate(row.coefficients):
                T[i, j] = sigma * a
            if i in slack_of:
                T[i, slack_of[i]] = Fraction(sigma if row.sense == "<=" else -sigma)
            T[i, self.art_start + i] = ONE
            T[i, -1] = sigma * row.rhs
        self.T = T
        self.slack_of = slack_of
        self.basis = [self.art_start + i for i in range(m)]

    def run(self) -> LPSolution:
        phase1 = np.full(self.width, ZERO, dtype=object)
        phase1[self.art_start:] = ONE
        self._simplex(phase1, allowed=self.width)
        infeasibility = sum((self.T[i, -1] for i in range(self.m) if self.basis[i] >= self.art_start), ZERO)
        if infeasibility > 0:
            y = self._duals(phase1)
            raise LPInfeasibleError("linear program is infeasible", [s * yi for s, yi in zip(self.sign, y)])
        self._drive_out_artificials()

        cost = np.full(self.width, ZERO, dtype=object)
        for j, c in enumerate(self.lp.objective):
            cost[j] = -c if self.lp.maximize else c
        self._simplex(cost, allowed=self.art_start)

        x = self._primal()
        y = [s * yi for s, yi in zip(self.sign, self._duals(cost))]
        if self.lp.maximize:
            y = [-v for v in y]
        return LPSolution(x=tuple(x[:self.n]), objective=self.lp.value(x[:self.n]), duals=tuple(y), pivots=self.pivots)

    def _reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        z = np.empty(self.width + 1, dtype=object)
        z[:self.width] = cost
        z[self.width] = ZERO
        for i, b in enumerate(self.basis):
            if cost[b] != 0:
                z = z - cost[b] * self.T[i]
        return z

    def _simplex(self, cost: np.ndarray, allowed: int) -> None:
        z = self._reduced_costs(cost)
        while True:
            entering = next((j for j in range(allowed) if z[j] < 0), None)
            if entering is None:
                return
            column = self.T[:, entering]
            candidates = [i for i in range(self.m) if column[i] > 0]
            if not candidates:
                point = self._primal()
                ray = [ZERO] * self.width
                ray[entering] = ONE
                for i, b in enumerate(self.basis):
                    ray[b] = -column[i]
                raise LPUnboundedError("objective is unbounded", point[:self.n], ray[:self.n])
            leave = min(candidates, key=lambda i: (self.T[i, -1] / column[i], self.basis[i]))
            self._pivot(leave, entering)
            z = z - z[entering] * self.T[leave]

    def _pivot(self, r: int, c: int) -> None:
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise PivotLimitError(f"more than {self.max_pivots} pivots")
        T = self.T
        T[r] = T[r] / T[r, c]
        for i in range(self.m):
            if i != r and T[i, c] != 0:
                T[i] = T[i] - T[i, c] * T[r]
        self.basis[r] = c

    def _drive_out_artificials(self) -> None:
        for i in range(self.m):
            if self.basis[i] < self.art_start:
                continue
            j = next((j for j in range(self.art_start) if self.T[i, j] != 0), None)
            # a row with no such column is redundant; its artificial stays basic at zero
            if j is not None:
                self._pivot(i, j)

    def _primal(self) -> List[Fraction]:
        x = [ZERO] * self.width
        for i, b in enumerate(self.basis):
            x[b] = self.T[i, -1]
        return x

    def _duals(self, cost: np.ndarray) -> List[Fraction]:
        """y = c_B B^-1, with B^-1 read from the artificial columns."""
        inverse = self.T[:, self.art_start:self.width]
        y = [ZERO] * self.m
        for i, b in enumerate(self.basis):
            if cost[b] != 0:
                for k in range(self.m):
                    y[k] += cost[b] * inverse[i, k]
        return y


def _verify_optimality(lp: LinearProgram, solution: LPSolution) -> None:
    """Dual feasibility, complementary slackness and zero duality gap, exactly."""
    x, y = solution.x, solution.duals
    if not lp.is_feasible(x):
        raise CertificateError("primal solution is infeasible")
    flip = 1 if lp.maximize else -1
    for row, yi in zip(lp.constraints, y):
        # sign of a dual in the problem's own sense
        if row.sense == "<=" and flip * yi < 0:
            raise CertificateError("dual multiplier of a '<=' row has the wrong sign")
        if row.sense == ">=" and flip * yi > 0:
            raise CertificateError("dual multiplier of a '>=' row has the wrong sign")
        if row.sense != "==" and yi != 0 and row.activity(x) != row.rhs:
            raise CertificateError("complementary slackness fails on a slack row")
    for j, c in enumerate(lp.objective):
        reduced = c - sum((row.coefficients[j] * yi for row, yi in zip(lp.constraints, y)), ZERO)
        if flip * reduced > 0:
            raise CertificateError(f"dual constraint {j} is violated")
        if x[j] != 0 and reduced != 0:
            raise CertificateError(f"complementary slackness fails on variable {j}")
    dual_value = sum((row.rhs * yi for row, yi in zip(lp.constraints, y)), ZERO)
    if dual_value != solution.objective:
        raise CertificateError(f"duality gap {solution.objective - dual_value} is not zero")


def lp_solve(lp: LinearProgram, max_pivots: Optional[int] = None) -> LPSolution:
    config = {} if max_pivots is None else {'max_pivots': max_pivots}
    return ExactSimplexSolver(config).solve(lp)
