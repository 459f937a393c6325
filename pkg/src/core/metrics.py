from typing import Optional

from prometheus_client import CollectorRegistry, Counter, write_to_textfile


class SearchMetrics:
    """
    Prometheus counters for search and LP effort.

    Each instance owns its registry, so concurrent analyses never share
    counters.
    """

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        self.registry = registry or CollectorRegistry()
        self.search_nodes = Counter(
            'search_nodes_total',
            'Nodes expanded by combinatorial searches',
            ['search'],
            registry=self.registry,
        )
        self.budget_exhausted = Counter(
            'search_budget_exhausted_total',
            'Searches stopped by their node budget',
            ['search'],
            registry=self.registry,
        )
        self.lp_pivots = Counter(
            'lp_pivots_total',
            'Simplex pivots performed',
            registry=self.registry,
        )
        self.lp_solves = Counter(
            'lp_solves_total',
            'Linear programs solved, by outcome',
            ['status'],
            registry=self.registry,
        )

    def record_search(self, search: str, nodes: int, exhausted: bool) -> None:
        self.search_nodes.labels(search=search).inc(nodes)
        if not exhausted:
            self.budget_exhausted.labels(search=search).inc()

    def record_lp(self, status: str, pivots: int) -> None:
        self.lp_pivots.inc(pivots)
        self.lp_solves.labels(status=status).inc()

    def value(self, name: str, **labels) -> float:
        sample = self.registry.get_sample_value(name, labels or None)
        return sample or 0.0

    def write(self, path: str) -> None:
        write_to_textfile(path, self.registry)
