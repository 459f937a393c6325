from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from src.core.eval_matrix import format_rational, to_rational
from src.core.exceptions import CertificateError, ParameterError
from src.core.metrics import SearchMetrics
from .lp_solver import Constraint, ExactSimplexSolver, LinearProgram

CHAIN_MODES = ("contained", "covering")


@dataclass(frozen=True)
class SetFamily:
    ground: Tuple[int, ...]
    members: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        ground = tuple(int(g) for g in self.ground)
        if len(set(ground)) != len(ground):
            raise ParameterError("ground set has repeated points")
        members = tuple(frozenset(int(g) for g in F) for F in self.members)
        points = set(ground)
        for F in members:
            if not F <= points:
                raise ParameterError(f"member {sorted(F)} is not a subset of the ground set")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, ground: Iterable[int], members: Iterable[Iterable[int]]) -> "SetFamily":
        return cls(tuple(ground), tuple(frozenset(F) for F in members))

    def with_member(self, F: Iterable[int]) -> "SetFamily":
        return SetFamily(self.ground, self.members + (frozenset(F),))

    def with_point(self, point: int) -> "SetFamily":
        return SetFamily(self.ground + (point,), self.members)

    def to_dict(self) -> Dict:
        return {"ground": list(self.ground), "members": [sorted(F) for F in self.members]}


@dataclass(frozen=True)
class ConvexMean:
    """Weights over ground points; zero weights are kept so LP vertices fit."""

    support: Tuple[int, ...]
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(to_rational(w) for w in self.weights)
        if len(weights) != len(self.support) or len(set(self.support)) != len(self.support):
            raise ParameterError("convex mean support must be duplicate-free and aligned with weights")
        if any(w < 0 for w in weights) or sum(weights, Fraction(0)) != 1:
            raise ParameterError("convex mean weights must be non-negative and sum to exactly 1")
        object.__setattr__(self, "weights", weights)

    def mass(self, F: Iterable[int]) -> Fraction:
        F = set(F)
        return sum((w for i, w in zip(self.support, self.weights) if i in F), Fraction(0))

    def positive_support(self) -> Tuple[int, ...]:
        return tuple(i for i, w in zip(self.support, self.weights) if w > 0)

    def to_dict(self) -> Dict:
        return {
            "support": list(self.positive_support()),
            "weights": [format_rational(w) for w in self.weights if w > 0],
        }


@dataclass(frozen=True)
class GameSolution:
    value: Fraction
    primal: ConvexMean
    dual: Tuple[Fraction, ...]
    primal_max: Fraction
    dual_min: Fraction

    @property
    def certified(self) -> bool:
        return self.primal_max == self.value == self.dual_min

    def to_dict(self) -> Dict:
        return {
            "value": format_rational(self.value),
            "primal": self.primal.to_dict(),
            "dual": [format_rational(d) for d in self.dual],
            "certificate": {
                "primal_max": format_rational(self.primal_max),
                "dual_min": format_rational(self.dual_min),
                "gap": format_rational(self.primal_max - self.dual_min),
            },
        }


@dataclass(frozen=True)
class PtakChain:
    sets: Tuple[FrozenSet[int], ...]
    members: Tuple[FrozenSet[int], ...]
    mode: str

    def verify(self, fam: SetFamily) -> bool:
        ground = set(fam.ground)
        if any(not A <= ground for A in self.sets):
            return False
        if any(not a < b for a, b in zip(self.sets, self.sets[1:])):
            return False
        if any(F not in fam.members for F in self.members):
            return False
        if self.mode == "contained":
            return all(F <= A for F, A in zip(self.members, self.sets))
        return all(A <= F for F, A in zip(self.members, self.sets))

    def to_dict(self) -> Dict:
        return {
            "mode": self.mode,
            "sets": [sorted(A) for A in self.sets],
            "members": [sorted(F) for F in self.members],
        }


class PtakGame:
    def __init__(self, config: Dict, metrics: Optional[SearchMetrics] = None):
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.solver = ExactSimplexSolver(self.config, metrics)

    def ptak_value(self, fam: SetFamily) -> GameSolution:
        """
        min over convex means mu on the ground of max over members F of mu(F).

        The dual distribution over members certifies the value: every ground
        point lies in members of total dual weight at least the value.
        """
        try:
            if not fam.ground:
                raise ParameterError("the ground set must be non-empty")
            n = len(fam.ground)
            if not fam.members:
                weights = (Fraction(1),) + (Fraction(0),) * (n - 1)
                primal = ConvexMean(fam.ground, weights)
                return GameSolution(Fraction(0), primal, (), Fraction(0), Fraction(0))

            index = {g: k for k, g in enumerate(fam.ground)}
            rows = []
            for F in fam.members:
                coefficients = [Fraction(0)] * (n + 1)
                for g in F:
                    coefficients[index[g]] = Fraction(1)
                coefficients[n] = Fraction(-1)
                rows.append(Constraint(tuple(coefficients), "<=", Fraction(0)))
            rows.append(Constraint(tuple([Fraction(1)] * n + [Fraction(0)]), "==", Fraction(1)))
            objective = tuple([Fraction(0)] * n + [Fraction(1)])
            solution = self.solver.solve(LinearProgram(objective, tuple(rows)))

            value = solution.objective
            primal = ConvexMean(fam.ground, solution.x[:n])
            dual = tuple(-y for y in solution.duals[:-1])
            if value == 0 or sum(dual, Fraction(0)) != 1:
                # any distribution certifies value 0: some point lies in no member
                dual = tuple(Fraction(1, len(fam.members)) for _ in fam.members)

            primal_max = max(primal.mass(F) for F in fam.members)
            dual_min = min(
                sum((d for d, F in zip(dual, fam.members) if g in F), Fraction(0)) for g in fam.ground
            )
            if not primal_max == value == dual_min:
                raise CertificateError(
                    f"game certificate mismatch: primal {primal_max}, value {value}, dual {dual_min}"
                )
            self.logger.debug(f"game value {value} over {n} points and {len(fam.members)} members")
            return GameSolution(value, primal, dual, primal_max, dual_min)
        except Exception as e:
            self.logger.error(f"Error computing game value: {str(e)}")
            raise

    def admissible_mean(self, fam: SetFamily, epsilon) -> Optional[ConvexMean]:
        """An explicit mean with mu(F) < epsilon for every member, if one exists."""
        epsilon = to_rational(epsilon)
        solution = self.ptak_value(fam)
        if solution.value < epsilon:
            return solution.primal
        return None

    def ptak_chain_search(self, fam: SetFamily, L: int, mode: str = "contained") -> Optional[PtakChain]:
        """
        Strictly increasing chain A_1 < ... < A_L of ground subsets with members F_n.

        In 'contained' mode F_n is inside A_n; in 'covering' mode A_n is
        inside F_n. Returns None when no chain of length L exists.
        """
        try:
            if L < 1:
                raise ParameterError(f"chain length must be positive, got {L}")
            if mode not in CHAIN_MODES:
                raise ParameterError(f"unknown chain mode {mode!r}")
            if mode == "contained":
                chain = self._contained_chain(fam, L)
            else:
                chain = self._covering_chain(fam, L)
            if chain is not None and not chain.verify(fam):
                raise CertificateError(f"chain {chain.to_dict()} does not verify")
            self.logger.debug(f"{mode} chain of length {L}: {'found' if chain else 'none'}")
            return chain
        except Exception as e:
            self.logger.error(f"Error searching {mode} chain: {str(e)}")
            raise

    def _contained_chain(self, fam: SetFamily, L: int) -> Optional[PtakChain]:
        if not fam.members:
            return None
        start = min(fam.members, key=lambda F: (len(F), sorted(F)))
        if len(start) + L - 1 > len(fam.ground):
            return None
        spare = [g for g in sorted(fam.ground) if g not in start]
        sets = [frozenset(start) | frozenset(spare[:n]) for n in range(L)]
        members = []
        for A in sets:
            inside = [F for F in fam.members if F <= A]
            members.append(min(inside, key=lambda F: (-len(F), sorted(F))))
        return PtakChain(tuple(sets), tuple(members), "contained")

    def _covering_chain(self, fam: SetFamily, L: int) -> Optional[PtakChain]:
        # A_n must lie in the intersection of F_n..F_L, which needs n points
        ordered = sorted(set(fam.members), key=lambda F: (-len(F), sorted(F)))

        def extend(n: int, common: FrozenSet[int], chosen: List[FrozenSet[int]]) -> Optional[List]:
            if n == 0:
                return chosen
            for F in ordered:
                meet = common & F if chosen else F
                if len(meet) >= n:
                    found = extend(n - 1, meet, [F] + chosen)
                    if found is not None:
                        return found
            return None

        members = extend(L, frozenset(), [])
        if members is None:
            return None
        sets: List[FrozenSet[int]] = []
        for n, F in enumerate(members, start=1):
            available = frozenset.intersection(*members[n - 1:])
            previous = sets[-1] if sets else frozenset()
            extra = sorted(available - previous)[: n - len(previous)]
            sets.append(previous | frozenset(extra))
        return PtakChain(tuple(sets), tuple(members), "covering")


def ptak_value(fam: SetFamily) -> GameSolution:
    return PtakGame({}).ptak_value(fam)


def ptak_chain_search(fam: SetFamily, L: int, mode: str = "contained") -> Optional[PtakChain]:
    return PtakGame({}).ptak_chain_search(fam, L, mode)
