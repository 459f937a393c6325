from fractions import Fraction

import numpy as np
import pytest

from src.cli.generators import linear_order, monotone_family
from src.core.exceptions import ParameterError
from src.definable_approx.feature_selector import FeatureFailure, FeatureSelector
from src.definable_approx.monotone_table import build_monotone_table
from src.definable_approx.type_approximator import ApproxResult, TypeApproximator, approximate

EPSILONS = [Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]


def convex_target(M, rng):
    draws = [int(v) for v in rng.integers(0, 5, size=M.n_rows)]
    if not any(draws):
        draws[0] = 1
    total = sum(draws)
    return [
        sum((Fraction(w, total) * M.entries[i, j] for i, w in enumerate(draws)), Fraction(0))
        for j in range(M.n_cols)
    ]


class TestMonotoneTable:
    def test_no_features_gives_the_maximum(self):
        M = linear_order(3)
        table = build_monotone_table(M, [], [0, Fraction(1, 2), 1], Fraction(1, 4))
        assert table.h(()) == 1
        assert table.is_monotone()
        assert table.sandwich_holds()

    def test_floor_below_every_observation(self):
        M = linear_order(3)
        table = build_monotone_table(M, [2], [0, Fraction(1, 2), 1], Fraction(1, 4))
        assert table.g((Fraction(-1),)) == -M.bound
        assert table.h((Fraction(1),)) == 1
        assert table.is_monotone()

    def test_entries_are_read_only(self):
        table = build_monotone_table(linear_order(3), [0], [0, Fraction(1, 2), 1], Fraction(1, 4))
        assert table.h((Fraction(1),)) == 1
        with pytest.raises(TypeError):
            table.entries[(Fraction(0),)] = Fraction(5)

    def test_epsilon_must_be_positive(self):
        with pytest.raises(ParameterError):
            build_monotone_table(linear_order(2), [0], [0, 0], 0)


class TestTypeApproximator:
    @pytest.fixture
    def approximator(self, test_config, metrics):
        return TypeApproximator(test_config['definable_approx'], metrics)

    @pytest.mark.parametrize("epsilon", [Fraction(1), Fraction(1, 2), Fraction(1, 4)])
    def test_coarse_scales_need_no_feature(self, approximator, epsilon):
        M = monotone_family(4, 6)
        result = approximator.approximate(M, None, list(M.row(1)), epsilon)
        assert result.features == ()
        assert result.err == Fraction(1, 2)
        assert result.within_three_epsilon

    def test_fine_scale_takes_one_feature(self, approximator):
        M = monotone_family(4, 6)
        result = approximator.approximate(M, None, list(M.row(1)), Fraction(1, 8))
        assert result.features == (0,)
        assert result.err == 0
        assert result.iterations == 1

    def test_stable_suite(self, approximator):
        rng = np.random.default_rng(31)
        for n in (1, 2, 5, 16):
            for m in (2, 3, 16):
                M = monotone_family(n, m)
                target = convex_target(M, rng)
                for epsilon in EPSILONS:
                    result = approximator.approximate(M, None, target, epsilon)
                    assert isinstance(result, ApproxResult)
                    assert result.err <= 3 * epsilon
                    assert result.table.is_monotone()
                    assert result.table.sandwich_holds()

    def test_unreachable_target_fails_at_once(self, approximator):
        M = linear_order(8)
        target = [j % 2 for j in range(8)]
        result = approximator.approximate(M, None, target, Fraction(1, 4))
        assert isinstance(result, FeatureFailure)
        assert result.reason == "no_admissible_row"
        assert result.pairs == ((0, 1),)
        assert result.features == ()
        assert result.pattern_length == 0

    def test_failure_records_separation_pattern(self, approximator):
        M = linear_order(8)
        target = [1 - j % 2 for j in range(8)]
        result = approximator.approximate(M, None, target, Fraction(1, 4))
        assert isinstance(result, FeatureFailure)
        assert result.pairs == ((0, 1), (1, 2))
        assert result.features == (0,)
        assert result.separation == ((Fraction(1), Fraction(0)),)
        assert result.pattern_length == 1
        assert result.to_dict()["failure"] == "no_admissible_row"

    def test_cap(self):
        M = linear_order(8)
        target = [j % 2 for j in range(8)]
        result = FeatureSelector({'cap': 0}).select_features(M, list(range(8)), target, Fraction(1, 4))
        assert result.reason == "cap_reached"

    def test_module_function_and_row_subset(self):
        M = monotone_family(4, 6)
        result = approximate(M, [2, 3], list(M.row(3)), Fraction(1, 8))
        assert result.features == (2,)

    def test_arguments(self, approximator):
        M = linear_order(3)
        with pytest.raises(ParameterError):
            approximator.approximate(M, None, [0, 0, 0], 0)
        with pytest.raises(ParameterError):
            approximator.approximate(M, None, [0, 0], Fraction(1, 2))
        with pytest.raises(ParameterError):
            approximator.approximate(M, [], [0, 0, 0], Fraction(1, 2))
        with pytest.raises(ParameterError):
            approximator.approximate(M, [7], [0, 0, 0], Fraction(1, 2))
