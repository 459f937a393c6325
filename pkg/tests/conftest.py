import itertools
import os
from fractions import Fraction

import numpy as np
import pytest
import yaml

from src.core.eval_matrix import ThresholdPair, matrix_from_values
from src.core.metrics import SearchMetrics
from src.core.witnesses import ShatterWitness

TEST_CONFIG_PATH = os.path.join(os.path.dirname(__file__), 'test_config.yml')

GRID_VALUES = (Fraction(0), Fraction(1, 2), Fraction(1))


@pytest.fixture
def test_config():
    """Load test configuration."""
    with open(TEST_CONFIG_PATH, 'r') as f:
        return yaml.safe_load(f)


@pytest.fixture
def test_config_path():
    return TEST_CONFIG_PATH


@pytest.fixture
def metrics():
    return SearchMetrics()


@pytest.fixture
def unit_thresholds():
    return ThresholdPair(Fraction(0), Fraction(1))


def random_grid_matrix(rng, n_rows, n_cols, values=GRID_VALUES):
    draws = rng.integers(0, len(values), size=(n_rows, n_cols))
    return matrix_from_values([[values[int(v)] for v in row] for row in draws], bound=1)


@pytest.fixture(scope='session')
def matrix_corpus():
    """Seed-pinned random matrices over {0, 1/2, 1}, shapes up to max_dim x max_dim."""
    def build(count, max_dim, seed=20240101):
        rng = np.random.default_rng(seed)
        corpus = []
        for _ in range(count):
            n_rows = int(rng.integers(1, max_dim + 1))
            n_cols = int(rng.integers(1, max_dim + 1))
            corpus.append(random_grid_matrix(rng, n_rows, n_cols))
        return corpus
    return build


def full_shatter_witness(d, t):
    """The witness of the generated shatter family: subset S is realized at column mask(S)."""
    rows = tuple(range(d))
    mapping = {
        frozenset(i for i in rows if mask >> i & 1): mask
        for mask in range(1 << d)
    }
    return ShatterWitness(rows, mapping, t)


@pytest.fixture(scope='session')
def shatter_witness():
    return full_shatter_witness


def _has_oriented_staircase(M, t, rows, row_dominant):
    k = len(rows)
    for q in range(k):
        found = False
        for j in range(M.n_cols):
            ok = True
            for p, i in enumerate(rows):
                high = p >= q if row_dominant else p <= q
                value = M.entries[i, j]
                if high and not value >= t.r or not high and not value <= t.s:
                    ok = False
                    break
            if ok:
                found = True
                break
        if not found:
            return False
    return True


def naive_order_rank(M, t):
    """
    Exhaustive staircase length over ordered row tuples.

    Each position asks for a different low/high column pattern, so the
    columns of a staircase are automatically distinct.
    """
    for k in range(min(M.n_rows, M.n_cols), 0, -1):
        for rows in itertools.permutations(range(M.n_rows), k):
            if _has_oriented_staircase(M, t, rows, True) or _has_oriented_staircase(M, t, rows, False):
                return k
    return 0


def naive_independence_rank(M, t):
    """Exhaustive shattering over row subsets and column patterns."""
    for k in range(M.n_rows, 0, -1):
        for rows in itertools.combinations(range(M.n_rows), k):
            patterns = set()
            for j in range(M.n_cols):
                values = [M.entries[i, j] for i in rows]
                if all(v <= t.s or v >= t.r for v in values):
                    patterns.add(tuple(v <= t.s for v in values))
            if len(patterns) == 1 << k:
                return k
    return 0


def _solve_square(A, b):
    """Exact Gauss-Jordan; None for a singular system."""
    n = len(A)
    rows = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if pivot is None:
            return None
        rows[c], rows[pivot] = rows[pivot], rows[c]
        head = rows[c][c]
        rows[c] = [v / head for v in rows[c]]
        for r in range(n):
            if r != c and rows[r][c] != 0:
                factor = rows[r][c]
                rows[r] = [a - factor * b_ for a, b_ in zip(rows[r], rows[c])]
    return [rows[i][n] for i in range(n)]


def vertex_game_value(ground, members):
    """
    min over convex means of max member mass, by enumerating the vertices of
    {(mu, v) : mu >= 0, sum mu = 1, mu(F) <= v}.
    """
    n = len(ground)
    if not members:
        return Fraction(0)
    index = {g: k for k, g in enumerate(ground)}
    tight = []
    for k in range(n):
        tight.append([Fraction(1) if c == k else Fraction(0) for c in range(n)] + [Fraction(0)])
    for F in members:
        tight.append([Fraction(1) if ground[c] in F else Fraction(0) for c in range(n)] + [Fraction(-1)])
    simplex = [Fraction(1)] * n + [Fraction(0)]
    best = None
    for chosen in itertools.combinations(range(len(tight)), n):
        A = [tight[k] for k in chosen] + [simplex]
        b = [Fraction(0)] * n + [Fraction(1)]
        solution = _solve_square(A, b)
        if solution is None:
            continue
        mu, v = solution[:n], solution[n]
        if any(w < 0 for w in mu):
            continue
        if any(sum(mu[index[g]] for g in F) > v for F in members):
            continue
        if best is None or v < best:
            best = v
    return best


@pytest.fixture(scope='session')
def order_oracle():
    return naive_order_rank


@pytest.fixture(scope='session')
def independence_oracle():
    return naive_independence_rank


@pytest.fixture(scope='session')
def game_oracle():
    return vertex_game_value


def naive_defect_gaps(M, k_max):
    """Per length k, the largest r - s over entry-value pairs whose exhaustive staircase length reaches k."""
    gaps = [None] * k_max
    for t in M.threshold_candidates():
        rank = naive_order_rank(M, t)
        for k in range(1, min(rank, k_max) + 1):
            if gaps[k - 1] is None or t.gap > gaps[k - 1]:
                gaps[k - 1] = t.gap
    return gaps


@pytest.fixture(scope='session')
def defect_oracle():
    return naive_defect_gaps
