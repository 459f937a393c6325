from fractions import Fraction

import pytest

from src.cli.generators import constant_matrix, linear_order
from src.core.eval_matrix import matrix_from_values
from src.core.exceptions import ParameterError
from src.core.witnesses import check_staircase
from src.order_analysis.defect_profiler import DefectProfiler, defect_profile


class TestDefectProfiler:
    @pytest.fixture
    def profiler(self, test_config, metrics):
        return DefectProfiler(test_config['order_analysis'], metrics)

    def test_linear_order_has_full_gap_everywhere(self, profiler):
        profile = profiler.defect_profile(linear_order(3), 3)
        assert profile.exhausted
        assert [profile.gap(k) for k in (1, 2, 3)] == [1, 1, 1]
        for entry in profile.entries:
            assert entry.witness.length == entry.k
            assert check_staircase(linear_order(3), entry.witness)

    def test_gap_shrinks_with_length(self, profiler):
        M = matrix_from_values([["1/2", 0], [1, 1]])
        profile = profiler.defect_profile(M, 2)
        assert profile.gap(1) == 1
        assert profile.gap(2) == Fraction(1, 2)
        second = profile.entries[1]
        assert (second.thresholds.s, second.thresholds.r) == (0, Fraction(1, 2))
        assert check_staircase(M, second.witness)

    def test_unreachable_length(self):
        profile = defect_profile(matrix_from_values([[0, 0], [0, 1]]), 2)
        assert profile.gap(1) == 1
        assert profile.gap(2) is None
        assert profile.to_dict()["entries"][1]["gap"] is None

    def test_k_max_range(self, profiler):
        with pytest.raises(ParameterError):
            profiler.defect_profile(linear_order(2), 3)

    def test_constant_matrix_has_no_gap(self, profiler):
        profile = profiler.defect_profile(constant_matrix(3, 3, "1/2"), 3)
        assert profile.exhausted
        assert all(entry.gap is None and entry.witness is None for entry in profile.entries)

    def test_agrees_with_exhaustive_enumeration(self, profiler, matrix_corpus, defect_oracle):
        for M in matrix_corpus(40, 4, seed=404):
            k_max = min(M.n_rows, M.n_cols)
            profile = profiler.defect_profile(M, k_max)
            assert [profile.gap(k) for k in range(1, k_max + 1)] == defect_oracle(M, k_max)
            for entry in profile.entries:
                if entry.witness is not None:
                    assert entry.witness.length == entry.k
                    assert entry.thresholds.gap == entry.gap
                    assert check_staircase(M, entry.witness)
