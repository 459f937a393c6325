from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, List, Mapping, Sequence, Tuple

from src.core.eval_matrix import EvalMatrix, format_rational, to_rational
from src.core.exceptions import ParameterError

Vector = Tuple[Fraction, ...]


def _dominated(u: Vector, v: Vector) -> bool:
    return all(a <= b for a, b in zip(u, v))


def _lookup(observations: Sequence[Tuple[Vector, Fraction]], floor: Fraction, v: Vector) -> Fraction:
    values = [value for u, value in observations if _dominated(u, v)]
    return max(values) if values else floor


@dataclass(frozen=True)
class MonotoneTable:
    """
    The lookup h over observed feature vectors.

    g(v) = max{target(x) : f_i(x) <= v_i for all i}, -C when no column
    qualifies, and h(u) = g(u + eps).
    """

    features: Tuple[int, ...]
    epsilon: Fraction
    floor: Fraction
    observations: Tuple[Tuple[Vector, Fraction], ...]
    entries: Mapping[Vector, Fraction]

    def g(self, v: Sequence[Fraction]) -> Fraction:
        return _lookup(self.observations, self.floor, tuple(v))

    def h(self, u: Sequence[Fraction]) -> Fraction:
        u = tuple(u)
        if u in self.entries:
            return self.entries[u]
        return self.g(tuple(a + self.epsilon for a in u))

    def is_monotone(self) -> bool:
        domain = list(self.entries)
        return all(
            self.entries[u] <= self.entries[v]
            for u in domain for v in domain
            if _dominated(u, v)
        )

    def sandwich_holds(self) -> bool:
        return all(
            self.g(u) <= value <= self.g(tuple(a + self.epsilon for a in u))
            for u, value in self.entries.items()
        )

    def to_dict(self) -> Dict:
        return {
            "features": list(self.features),
            "epsilon": format_rational(self.epsilon),
            "entries": [
                {"vector": [format_rational(a) for a in u], "value": format_rational(value)}
                for u, value in sorted(self.entries.items())
            ],
        }


def feature_vectors(M: EvalMatrix, features: Sequence[int]) -> List[Vector]:
    """(f_i(x))_i for every column x."""
    return [tuple(M.entries[i, j] for i in features) for j in range(M.n_cols)]


def build_monotone_table(M: EvalMatrix, features: Sequence[int], target: Sequence, epsilon) -> MonotoneTable:
    """
    Evaluate g on observed feature vectors and set h(u) := g(u + eps).

    An empty feature list is accepted: every column then shares the empty
    vector and h is the constant max target.
    """
    epsilon = to_rational(epsilon)
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    target = [to_rational(v) for v in target]
    if len(target) != M.n_cols:
        raise ParameterError(f"target has {len(target)} entries for {M.n_cols} columns")

    vectors = feature_vectors(M, features)
    observations = tuple(zip(vectors, target))
    floor = -M.bound
    entries: Dict[Vector, Fraction] = {}
    for u in vectors:
        if u not in entries:
            entries[u] = _lookup(observations, floor, tuple(a + epsilon for a in u))
    return MonotoneTable(tuple(features), epsilon, floor, observations, MappingProxyType(entries))
