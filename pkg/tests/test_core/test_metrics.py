from src.cli.generators import linear_order
from src.core.eval_matrix import ThresholdPair
from src.core.metrics import SearchMetrics
from src.order_analysis.staircase_search import StaircaseSearch


class TestSearchMetrics:
    def test_counters(self, metrics):
        metrics.record_search('order', 12, True)
        metrics.record_search('order', 3, False)
        metrics.record_lp('optimal', 7)
        assert metrics.value('search_nodes_total', search='order') == 15
        assert metrics.value('search_budget_exhausted_total', search='order') == 1
        assert metrics.value('lp_pivots_total') == 7
        assert metrics.value('lp_solves_total', status='optimal') == 1
        assert metrics.value('lp_solves_total', status='infeasible') == 0

    def test_instances_do_not_share_counters(self):
        first, second = SearchMetrics(), SearchMetrics()
        first.record_lp('optimal', 1)
        assert second.value('lp_pivots_total') == 0

    def test_search_reports_nodes(self, metrics):
        result = StaircaseSearch({}, metrics).order_rank(linear_order(3), ThresholdPair(0, 1), 3)
        assert metrics.value('search_nodes_total', search='order') == result.nodes > 0

    def test_textfile_export(self, metrics, tmp_path):
        metrics.record_search('independence', 5, True)
        path = tmp_path / "metrics.prom"
        metrics.write(str(path))
        text = path.read_text()
        assert 'search_nodes_total{search="independence"} 5.0' in text
