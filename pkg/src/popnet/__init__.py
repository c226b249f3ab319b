"""popnet: popularity-thresholded spectral analysis of undirected networks."""

__version__ = "0.1.0"

from .analysis import (
    LogisticFit,
    TransitionReport,
    beta_grid_experiment,
    curvature,
    degree_changeover,
    degree_ratio_experiment,
    detect_transition,
    fit_logistic,
    transition_report,
)
from .centrality import (
    CentralityScores,
    betweenness_centrality,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
    pagerank,
)
from .errors import PopnetError
from .graph import (
    Graph,
    IndexMap,
    induce_by_popularity,
    largest_connected_component,
    load_edge_list,
    remove_popularity_band,
    snowball_sample,
    subgraph,
)
from .meta import NodeMetaTable, load_node_meta
from .sgc import SGCConfig, SGCGraph, generate_sgc
from .spectral import EigenPair, Spectrum, eigen_gap, power_iteration, top_k_spectrum
from .stats import (
    attribute_assortativity,
    degree_assortativity,
    degree_popularity_correlation,
    genre_edge_overlap,
    group_mean_degree,
    popularity_homophily,
)
from .sweep import SweepResult, group_series, removal_band_sweep, threshold_sweep

__all__ = [
    "__version__",
    "Graph", "IndexMap", "NodeMetaTable", "SGCConfig", "SGCGraph",
    "CentralityScores", "EigenPair", "Spectrum", "SweepResult",
    "LogisticFit", "TransitionReport", "PopnetError",
    "load_edge_list", "load_node_meta", "subgraph", "induce_by_popularity",
    "remove_popularity_band", "largest_connected_component", "snowball_sample",
    "degree_assortativity", "attribute_assortativity", "popularity_homophily",
    "degree_popularity_correlation", "genre_edge_overlap", "group_mean_degree",
    "power_iteration", "top_k_spectrum", "eigen_gap",
    "degree_centrality", "closeness_centrality", "betweenness_centrality",
    "eigenvector_centrality", "pagerank",
    "generate_sgc", "threshold_sweep", "removal_band_sweep", "group_series",
    "detect_transition", "fit_logistic", "curvature", "degree_changeover",
    "transition_report", "beta_grid_experiment", "degree_ratio_experiment",
]
