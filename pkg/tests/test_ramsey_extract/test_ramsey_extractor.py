import itertools

import pytest

from src.core.exceptions import ParameterError
from src.ramsey_extract.ramsey_extractor import PairColoring, RamseyExtractor, ramsey_pairs

K6_PAIRS = list(itertools.combinations(range(1, 7), 2))


class TestPairColoring:
    def test_pentagon(self):
        c = PairColoring.pentagon()
        assert c.color(1, 2) == 0
        assert c.color(5, 1) == 0
        assert c.color(1, 3) == 1
        assert c.is_homogeneous([1, 2]) == 0
        assert c.is_homogeneous([1, 2, 3]) is None

    def test_incomplete_coloring(self):
        with pytest.raises(ParameterError):
            PairColoring.from_edges(3, [[1, 2, 0], [2, 3, 1]])
        with pytest.raises(ParameterError):
            PairColoring.from_edges(2, [[1, 2, 2]])

    def test_random_is_seeded(self):
        assert PairColoring.random(8, 3) == PairColoring.random(8, 3)

    def test_color_graph(self):
        G = PairColoring.pentagon().graph(1)
        assert G.number_of_nodes() == 5
        assert G.number_of_edges() == 5


class TestRamseyExtractor:
    @pytest.fixture
    def extractor(self, test_config):
        return RamseyExtractor(test_config['ramsey_extract'])

    def test_constant_coloring(self, extractor):
        result = extractor.ramsey_pairs(PairColoring.constant(6), 3)
        assert result.success
        assert result.subset == (1, 2, 3)
        assert result.color == 0
        assert result.largest == 6
        assert result.method == "majority_split"

    def test_pentagon_has_no_triangle(self, extractor):
        result = extractor.ramsey_pairs(PairColoring.pentagon(), 3)
        assert not result.success
        assert result.largest == 2
        assert result.method == "exact"

    def test_majority_split_bound(self):
        extractor = RamseyExtractor({'exact_limit': 0})
        for seed in range(50):
            result = extractor.ramsey_pairs(PairColoring.random(16, seed), 3)
            assert result.success
            assert result.method == "majority_split"

    def test_target_size_range(self, extractor):
        with pytest.raises(ParameterError):
            extractor.ramsey_pairs(PairColoring.constant(4), 1)

    def test_sampled_six_point_colorings(self, extractor):
        for code in range(0, 1 << 15, 97):
            c = PairColoring(6, {pair: code >> b & 1 for b, pair in enumerate(K6_PAIRS)})
            result = extractor.ramsey_pairs(c, 3)
            assert result.success
            assert c.is_homogeneous(result.subset) == result.color

    @pytest.mark.stress
    def test_every_six_point_coloring(self):
        for code in range(1 << 15):
            c = PairColoring(6, {pair: code >> b & 1 for b, pair in enumerate(K6_PAIRS)})
            result = ramsey_pairs(c, 3)
            assert result.success
            assert c.is_homogeneous(result.subset) == result.color
