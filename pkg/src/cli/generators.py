from fractions import Fraction
import math
from typing import Optional

import numpy as np

from src.core.eval_matrix import EvalMatrix, RationalLike, to_rational, validate_matrix
from src.core.exceptions import ParameterError

GENERATOR_KINDS = ("linear-order", "shatter", "random", "monotone-family", "constant")
RANDOM_DISTRIBUTIONS = ("grid", "sign", "binary")
GRID_DENOMINATOR = 4


def _require_positive(**sizes) -> None:
    for name, value in sizes.items():
        if value < 1:
            raise ParameterError(f"{name} must be at least 1, got {value}")


def linear_order(n: int) -> EvalMatrix:
    """L_n: entry 1 when row >= column, else 0."""
    _require_positive(n=n)
    entries = [[1 if i >= j else 0 for j in range(n)] for i in range(n)]
    return validate_matrix([f"f{i + 1}" for i in range(n)], [f"x{j + 1}" for j in range(n)], entries, 1)


def shatter_family(d: int) -> EvalMatrix:
    """d rows and 2^d columns; entry (i, c) is 0 when bit i of c is set, else 1."""
    _require_positive(d=d)
    columns = 1 << d
    entries = [[0 if c >> i & 1 else 1 for c in range(columns)] for i in range(d)]
    return validate_matrix([f"f{i + 1}" for i in range(d)], [f"x{c}" for c in range(columns)], entries, 1)


def random_matrix(n: int, m: int, seed: int, dist: str = "grid") -> EvalMatrix:
    """
    Seeded random matrix with entries in [-1, 1].

    dist 'grid' draws multiples of 1/4, 'sign' draws -1/1, 'binary' draws 0/1.
    """
    _require_positive(n=n, m=m)
    if dist not in RANDOM_DISTRIBUTIONS:
        raise ParameterError(f"unknown distribution {dist!r}")
    rng = np.random.default_rng(seed)
    if dist == "grid":
        draws = rng.integers(-GRID_DENOMINATOR, GRID_DENOMINATOR + 1, size=(n, m))
        entries = [[Fraction(int(v), GRID_DENOMINATOR) for v in row] for row in draws]
    elif dist == "sign":
        draws = rng.integers(0, 2, size=(n, m))
        entries = [[Fraction(2 * int(v) - 1) for v in row] for row in draws]
    else:
        draws = rng.integers(0, 2, size=(n, m))
        entries = [[Fraction(int(v)) for v in row] for row in draws]
    return validate_matrix([f"f{i + 1}" for i in range(n)], [f"x{j + 1}" for j in range(m)], entries, 1)


def monotone_family(n: int, m: int) -> EvalMatrix:
    """
    Nondecreasing step rows sharing one step at column ceil(m/2): row i takes
    i/(2n) before the step and (n+i)/(2n) from it on. Only two distinct
    columns occur, so no staircase is longer than 2.
    """
    _require_positive(n=n, m=m)
    step = math.ceil(m / 2)
    entries = [
        [Fraction(i, 2 * n) if j < step else Fraction(n + i, 2 * n) for j in range(m)]
        for i in range(n)
    ]
    return validate_matrix([f"f{i + 1}" for i in range(n)], [f"x{j + 1}" for j in range(m)], entries, 1)


def constant_matrix(n: int, m: int, value: RationalLike = 0, bound: Optional[RationalLike] = None) -> EvalMatrix:
    _require_positive(n=n, m=m)
    c = to_rational(value)
    return validate_matrix(
        [f"f{i + 1}" for i in range(n)], [f"x{j + 1}" for j in range(m)], [[c] * m for _ in range(n)], bound
    )


def generate(kind: str, sizes, seed: int = 0, dist: str = "grid", value: RationalLike = 0) -> EvalMatrix:
    """Dispatch one generator by name; `sizes` holds the positional sizes."""
    sizes = list(sizes)
    expected = {"linear-order": 1, "shatter": 1, "random": 2, "monotone-family": 2, "constant": 2}
    if kind not in expected:
        raise ParameterError(f"unknown generator {kind!r}; choose from {', '.join(GENERATOR_KINDS)}")
    if len(sizes) != expected[kind]:
        raise ParameterError(f"generator {kind} takes {expected[kind]} size(s), got {len(sizes)}")
    if kind == "linear-order":
        return linear_order(sizes[0])
    if kind == "shatter":
        return shatter_family(sizes[0])
    if kind == "random":
        return random_matrix(sizes[0], sizes[1], seed, dist)
    if kind == "monotone-family":
        return monotone_family(sizes[0], sizes[1])
    return constant_matrix(sizes[0], sizes[1], value)
