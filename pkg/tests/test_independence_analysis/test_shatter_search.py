from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.cli.generators import constant_matrix, linear_order, shatter_family
from src.core.eval_matrix import ThresholdPair, matrix_from_values
from src.core.exceptions import ParameterError
from src.core.witnesses import check_shatter
from src.independence_analysis.shatter_search import ShatterSearch, independence_rank
from src.order_analysis.staircase_search import order_rank

GRID = [Fraction(0), Fraction(1, 2), Fraction(1)]


@st.composite
def grid_matrices(draw, max_rows=4, max_cols=6):
    n_rows = draw(st.integers(1, max_rows))
    n_cols = draw(st.integers(1, max_cols))
    values = draw(st.lists(
        st.lists(st.sampled_from(GRID), min_size=n_cols, max_size=n_cols),
        min_size=n_rows, max_size=n_rows,
    ))
    return matrix_from_values(values, bound=1)


class TestShatterSearch:
    @pytest.fixture
    def search(self, test_config, metrics):
        return ShatterSearch(test_config['independence_analysis'], metrics)

    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    def test_generated_family(self, search, unit_thresholds, d):
        result = search.independence_rank(shatter_family(d), unit_thresholds, d)
        assert result.rank == d
        assert result.exhausted
        assert result.witness.rows == tuple(range(d))
        # each pattern occurs at exactly one column, the one whose bits are the low rows
        for subset, column in result.witness.witness.items():
            assert column == sum(1 << i for i in subset)

    def test_linear_order_has_rank_one(self, search, unit_thresholds):
        result = search.independence_rank(linear_order(6), unit_thresholds, 6)
        assert result.rank == 1
        assert result.exhausted

    def test_constant_matrix(self, search, unit_thresholds):
        result = search.independence_rank(constant_matrix(3, 3, 1), unit_thresholds, 3)
        assert result.rank == 0
        assert result.witness is None

    def test_lexicographically_least_row_set(self, search, unit_thresholds):
        # rows 1 and 2 are copies, so {0, 1} and {0, 2} are both shattered
        M = matrix_from_values([
            [0, 0, 1, 1],
            [0, 1, 0, 1],
            [0, 1, 0, 1],
        ])
        result = search.independence_rank(M, unit_thresholds, 3)
        assert result.rank == 2
        assert result.witness.rows == (0, 1)

    def test_budget_trip(self, unit_thresholds, metrics):
        result = ShatterSearch({'node_budget': 10}, metrics).independence_rank(shatter_family(4), unit_thresholds, 4)
        assert not result.exhausted
        assert result.rank < 4
        assert metrics.value('search_budget_exhausted_total', search='independence') == 1

    def test_k_max_range(self, search, unit_thresholds):
        with pytest.raises(ParameterError):
            search.independence_rank(shatter_family(2), unit_thresholds, 3)

    def test_agrees_with_exhaustive_enumeration(self, search, matrix_corpus, independence_oracle):
        for M in matrix_corpus(40, 5, seed=11):
            for t in M.threshold_candidates():
                assert search.independence_rank(M, t, M.n_rows).rank == independence_oracle(M, t)

    def test_never_exceeds_order_rank(self, matrix_corpus):
        for M in matrix_corpus(60, 6, seed=5):
            for t in M.threshold_candidates():
                k = min(M.n_rows, M.n_cols)
                indep = independence_rank(M, t, M.n_rows)
                order = order_rank(M, t, k)
                assert indep.exhausted and order.exhausted
                assert indep.rank <= order.rank

    @pytest.mark.stress
    def test_oracle_sweep(self, matrix_corpus, independence_oracle, order_oracle):
        search = ShatterSearch({})
        for M in matrix_corpus(200, 5, seed=13):
            for t in M.threshold_candidates():
                assert search.independence_rank(M, t, M.n_rows).rank == independence_oracle(M, t)

    @pytest.mark.stress
    def test_rank_inequality_sweep(self, matrix_corpus):
        for M in matrix_corpus(500, 7, seed=17):
            for t in M.threshold_candidates():
                k = min(M.n_rows, M.n_cols)
                assert independence_rank(M, t, M.n_rows).rank <= order_rank(M, t, k).rank

    @settings(deadline=None, max_examples=60)
    @given(grid_matrices(), st.data())
    def test_heredity(self, M, data):
        t = ThresholdPair(0, 1)
        result = independence_rank(M, t, M.n_rows)
        if result.rank < 2:
            return
        keep = data.draw(st.lists(st.sampled_from(result.witness.rows), min_size=1, unique=True))
        sub = result.witness.restrict(sorted(keep))
        assert check_shatter(M, sub)
        assert independence_rank(M.submatrix(sorted(keep), list(range(M.n_cols))), t, len(keep)).rank == len(keep)


class TestSignedIndependence:
    @pytest.fixture
    def search(self, test_config):
        return ShatterSearch(test_config['independence_analysis'])

    def test_positive_family(self, search, unit_thresholds):
        result = search.signed_independence_rank(shatter_family(2), unit_thresholds, 2)
        assert (result.positive.rank, result.negative.rank, result.joint.rank) == (2, 0, 2)
        assert result.realized_by == "positive"
        assert not result.joint_exceeds_signs

    def test_negative_family(self, search, unit_thresholds):
        M = shatter_family(2).negate()
        result = search.signed_independence_rank(M, unit_thresholds, 2)
        assert result.positive.rank == 0
        assert result.negative.rank == 2
        assert result.realized_by == "negative"
        assert result.joint_matrix.row_labels[2:] == ("-f1", "-f2")
        assert result.to_dict()["max"] == 2
