from dataclasses import dataclass
import logging
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from src.core.exceptions import CertificateError, ParameterError

DEFAULT_EXACT_LIMIT = 64


@dataclass(frozen=True)
class PairColoring:
    """Two-coloring of the pairs {i, j} of {1..n}; keys are (i, j) with i < j."""

    n: int
    colors: Dict[Tuple[int, int], int]

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"ground set size must be positive, got {self.n}")
        cleaned = {}
        for (i, j), color in dict(self.colors).items():
            a, b = (int(i), int(j)) if i < j else (int(j), int(i))
            if not 1 <= a < b <= self.n:
                raise ParameterError(f"pair ({i}, {j}) is not a pair of {{1..{self.n}}}")
            if color not in (0, 1):
                raise ParameterError(f"pair ({i}, {j}) has color {color}, expected 0 or 1")
            cleaned[(a, b)] = int(color)
        expected = self.n * (self.n - 1) // 2
        if len(cleaned) != expected:
            raise ParameterError(f"coloring defines {len(cleaned)} of {expected} pairs")
        object.__setattr__(self, "colors", cleaned)

    def color(self, i: int, j: int) -> int:
        return self.colors[(i, j) if i < j else (j, i)]

    def is_homogeneous(self, subset: Iterable[int]) -> Optional[int]:
        """The shared color of every pair in subset, or None."""
        members = sorted(subset)
        seen = {self.color(a, b) for x, a in enumerate(members) for b in members[x + 1:]}
        if len(seen) > 1:
            return None
        return seen.pop() if seen else 0

    def graph(self, color: int) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(1, self.n + 1))
        G.add_edges_from(pair for pair, c in self.colors.items() if c == color)
        return G

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int, int], int]) -> "PairColoring":
        return cls(n, {(i, j): fn(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)})

    @classmethod
    def constant(cls, n: int, color: int = 0) -> "PairColoring":
        return cls.from_function(n, lambda i, j: color)

    @classmethod
    def pentagon(cls) -> "PairColoring":
        """K_5 split into the pentagon (color 0) and the pentagram (color 1)."""
        return cls.from_function(5, lambda i, j: 0 if (j - i) % 5 in (1, 4) else 1)

    @classmethod
    def random(cls, n: int, seed: int) -> "PairColoring":
        rng = np.random.default_rng(seed)
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        draws = rng.integers(0, 2, size=len(pairs))
        return cls(n, {pair: int(c) for pair, c in zip(pairs, draws)})

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "PairColoring":
        return cls(n, {(int(i), int(j)): int(c) for i, j, c in edges})


@dataclass(frozen=True)
class RamseyResult:
    success: bool
    subset: Tuple[int, ...]
    color: Optional[int]
    largest: int
    method: str

    def to_dict(self) -> Dict:
        return {
            "success": self.success,
            "subset": list(self.subset),
            "color": self.color,
            "largest": self.largest,
            "method": self.method,
        }


class RamseyExtractor:
    def __init__(self, config: Dict):
        """
        Args:
            config: `ramsey_extract` section:
                - exact_limit: largest ground set for the exact clique search
        """
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.exact_limit = int(self.config.get('exact_limit', DEFAULT_EXACT_LIMIT))

    def ramsey_pairs(self, c: PairColoring, m: int) -> RamseyResult:
        """
        Monochromatic subset of size m.

        The majority-split extraction always runs first and succeeds whenever
        n >= 2^(2m-2). When it falls short and n is within `exact_limit`, a
        maximum clique search on each color class decides the instance, so a
        failure then reports the true largest homogeneous set.
        """
        try:
            if m < 2:
                raise ParameterError(f"target size must be at least 2, got {m}")

            subset, color = self._majority_split(c)
            method = "majority_split"
            if len(subset) < m and c.n <= self.exact_limit:
                subset, color = self._largest_clique(c)
                method = "exact"

            if c.is_homogeneous(subset) != color:
                raise CertificateError(f"extracted set {subset} is not homogeneous in color {color}")

            if len(subset) >= m:
                chosen = tuple(sorted(subset)[:m])
                self.logger.debug(f"found homogeneous set {chosen} of color {color} via {method}")
                return RamseyResult(True, chosen, color, len(subset), method)

            self.logger.info(f"no homogeneous set of size {m} among {c.n} points; largest found {len(subset)}")
            return RamseyResult(False, tuple(sorted(subset)), color, len(subset), method)
        except Exception as e:
            self.logger.error(f"Error extracting homogeneous subset: {str(e)}")
            raise

    def _majority_split(self, c: PairColoring) -> Tuple[List[int], int]:
        pool = list(range(1, c.n + 1))
        pivots: List[Tuple[int, int]] = []
        last = None
        while pool:
            v, rest = pool[0], pool[1:]
            if not rest:
                last = v
                break
            classes = {0: [u for u in rest if c.color(v, u) == 0], 1: [u for u in rest if c.color(v, u) == 1]}
            chosen = 0 if len(classes[0]) >= len(classes[1]) else 1
            pivots.append((v, chosen))
            pool = classes[chosen]

        best: List[int] = []
        best_color = 0
        for color in (0, 1):
            members = [v for v, col in pivots if col == color]
            if last is not None:
                members.append(last)
            if len(members) > len(best):
                best, best_color = members, color
        return best, best_color

    def _largest_clique(self, c: PairColoring) -> Tuple[List[int], int]:
        best: List[int] = []
        best_color = 0
        for color in (0, 1):
            for clique in nx.find_cliques(c.graph(color)):
                clique = sorted(clique)
                if len(clique) > len(best) or (len(clique) == len(best) and color == best_color and clique < best):
                    best, best_color = clique, color
        return best, best_color


def ramsey_pairs(c: PairColoring, m: int) -> RamseyResult:
    return RamseyExtractor({}).ramsey_pairs(c, m)
