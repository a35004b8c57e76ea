"""Maximum quasi-biclique search in bipartite graphs."""

from ._qbc import (
    ArgumentError,
    Graph,
    QbcError,
    balanced_biclique_upper_bound,
    edge_count_bounds,
    emit_lp,
    greedy,
    is_quasi_biclique,
    load_graph,
    near_balanced_upper_bound,
    quasi_clique_upper_bound,
    run_bench,
    solve,
)

__all__ = [
    "ArgumentError",
    "Graph",
    "QbcError",
    "balanced_biclique_upper_bound",
    "edge_count_bounds",
    "emit_lp",
    "greedy",
    "is_quasi_biclique",
    "load_graph",
    "near_balanced_upper_bound",
    "quasi_clique_upper_bound",
    "run_bench",
    "solve",
]
