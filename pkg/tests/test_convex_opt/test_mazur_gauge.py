from fractions import Fraction

import numpy as np
import pytest

from src.cli.generators import linear_order, monotone_family, random_matrix
from src.convex_opt.gauge_norm import GaugeNorm, gauge_norm
from src.convex_opt.mazur_approximator import MazurApproximator, cesaro_distance, mazur_approx
from src.convex_opt.stability_probe import StabilityProbe
from src.core.eval_matrix import ThresholdPair, matrix_from_values
from src.core.exceptions import ParameterError
from src.core.witnesses import check_staircase


class TestMazurApproximator:
    @pytest.fixture
    def approximator(self, test_config, metrics):
        return MazurApproximator(test_config['convex_opt'], metrics)

    def test_symmetric_alternating_instance(self, approximator):
        M = matrix_from_values([[1, -1], [-1, 1]])
        result = approximator.mazur_approx(M, [0, 1], [0, 0], 0)
        assert result.distance == 0
        assert result.coefficients.coefficients == (Fraction(1, 2), Fraction(1, 2))
        assert result.coefficients.combine(M) == [0, 0]

    def test_repeated_rows_are_merged(self, approximator):
        M = matrix_from_values([[1, -1], [-1, 1]])
        result = approximator.mazur_approx(M, [0, 1, 0, 1], [0, 0], 0)
        assert result.distance == 0
        assert sorted(result.coefficients.support) == [0, 1]

    def test_linear_order_tail(self, approximator):
        # the last row of L_4 is constant 1; target 1/2 everywhere is at distance 1/2
        result = approximator.mazur_approx(linear_order(4), [0, 1, 2, 3], [Fraction(1, 2)] * 4, 3)
        assert result.distance == Fraction(1, 2)

    def test_cesaro_is_never_better(self, approximator):
        M = random_matrix(6, 4, 9)
        seq = [0, 1, 2, 3, 4, 5]
        target = [Fraction(0)] * 4
        assert approximator.cesaro_distance(M, seq, target, 0) >= approximator.mazur_approx(M, seq, target, 0).distance

    def test_distance_grows_as_the_tail_shrinks(self):
        rng = np.random.default_rng(8)
        for seed in range(30):
            M = random_matrix(5, 3, seed)
            seq = [int(v) for v in rng.integers(0, 5, size=5)]
            target = [Fraction(int(v), 4) for v in rng.integers(-4, 5, size=3)]
            distances = [mazur_approx(M, seq, target, tail).distance for tail in range(len(seq))]
            assert all(a <= b for a, b in zip(distances, distances[1:]))
            assert cesaro_distance(M, seq, target, 0) >= distances[0]

    @pytest.mark.stress
    def test_tail_monotonicity_sweep(self):
        rng = np.random.default_rng(80)
        for seed in range(100):
            M = random_matrix(6, 4, seed)
            seq = [int(v) for v in rng.integers(0, 6, size=6)]
            target = [Fraction(int(v), 4) for v in rng.integers(-4, 5, size=4)]
            distances = [mazur_approx(M, seq, target, tail).distance for tail in range(len(seq))]
            assert all(a <= b for a, b in zip(distances, distances[1:]))

    def test_arguments(self, approximator):
        M = linear_order(2)
        with pytest.raises(ParameterError):
            approximator.mazur_approx(M, [0, 1], [0, 0], 2)
        with pytest.raises(ParameterError):
            approximator.mazur_approx(M, [0, 1], [0], 0)
        with pytest.raises(ParameterError):
            approximator.mazur_approx(M, [0, 5], [0, 0], 0)


class TestGaugeNorm:
    @pytest.fixture
    def gauge(self, test_config):
        return GaugeNorm(test_config['convex_opt'])

    def test_diagonal_over_axes(self, gauge):
        result = gauge.gauge_norm([[1, 0], [0, 1]], [1, 1])
        assert result.value == 2
        assert result.coefficients == (1, 1)
        assert result.in_span

    def test_zero_vector(self, gauge):
        assert gauge.gauge_norm([[1, 0], [0, 1]], [0, 0]).value == 0

    def test_negative_coefficients(self, gauge):
        result = gauge.gauge_norm([[1, 1], [1, -1]], [0, -2])
        assert result.value == 2
        assert result.coefficients == (-1, 1)

    def test_outside_span(self, gauge):
        result = gauge.gauge_norm([[1, 0]], [0, 1])
        assert not result.in_span
        assert result.value is None

    def test_dimension_mismatch(self, gauge):
        with pytest.raises(ParameterError):
            gauge.gauge_norm([[1, 0]], [1])
        with pytest.raises(ParameterError):
            gauge.gauge_norm([], [1])

    def test_norm_axioms(self):
        rng = np.random.default_rng(10)
        generators = [[1, 0, 1], [0, 1, 1], [1, 1, 0], [1, -1, 0]]
        for _ in range(40):
            u = [Fraction(int(v), 3) for v in rng.integers(-6, 7, size=3)]
            v = [Fraction(int(x), 3) for x in rng.integers(-6, 7, size=3)]
            scale = Fraction(int(rng.integers(-5, 6)), 2)
            gu, gv = gauge_norm(generators, u).value, gauge_norm(generators, v).value
            assert gauge_norm(generators, [scale * a for a in u]).value == abs(scale) * gu
            assert gauge_norm(generators, [a + b for a, b in zip(u, v)]).value <= gu + gv

    @pytest.mark.stress
    def test_norm_axioms_sweep(self):
        rng = np.random.default_rng(11)
        generators = [[1, 0, 1, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1], [1, 1, 1, 1]]
        for _ in range(200):
            u = [Fraction(int(v), 4) for v in rng.integers(-8, 9, size=4)]
            v = [Fraction(int(x), 4) for x in rng.integers(-8, 9, size=4)]
            scale = Fraction(int(rng.integers(-6, 7)), 3)
            gu, gv = gauge_norm(generators, u).value, gauge_norm(generators, v).value
            assert gauge_norm(generators, [scale * a for a in u]).value == abs(scale) * gu
            assert gauge_norm(generators, [a + b for a, b in zip(u, v)]).value <= gu + gv


class TestStabilityProbe:
    @pytest.fixture
    def probe(self, test_config, metrics):
        return StabilityProbe(test_config['convex_opt'], metrics)

    def test_monotone_family_does_not_extend(self, probe):
        M = monotone_family(4, 4)
        t = ThresholdPair(Fraction(1, 4), Fraction(1, 2))
        report = probe.conv_stability_probe(M, t, 4, 10, seed=1)
        assert not report.extension_found
        assert report.extended_matrix.n_rows == 14
        assert report.extended_matrix.row_labels[4:6] == ("conv#1", "conv#2")
        for weights in report.sample_weights.values():
            assert sum(weights) == 1

    def test_seeded_samples_repeat(self, probe):
        M = random_matrix(4, 4, 2)
        t = ThresholdPair(0, Fraction(1, 2))
        first = probe.conv_stability_probe(M, t, 4, 5, seed=3)
        second = probe.conv_stability_probe(M, t, 4, 5, seed=3)
        assert first.sample_weights == second.sample_weights
        assert first.to_dict() == second.to_dict()

    def test_extensions_use_sampled_rows(self, probe):
        for seed in range(10):
            M = random_matrix(3, 5, seed)
            t = ThresholdPair(0, Fraction(1, 2))
            report = probe.conv_stability_probe(M, t, 3, 8, seed)
            assert report.extended.rank >= report.base.rank
            if report.extension_found:
                assert report.sampled_rows_in_witness
                assert check_staircase(report.extended_matrix, report.extended.witness)

    def test_arguments(self, probe, unit_thresholds):
        with pytest.raises(ParameterError):
            probe.conv_stability_probe(linear_order(2), unit_thresholds, 2, 0, 0)
        with pytest.raises(ParameterError):
            probe.conv_stability_probe(linear_order(2), unit_thresholds, 0, 1, 0)
