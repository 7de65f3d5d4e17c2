from importlib.metadata import PackageNotFoundError, version

from ._analysis import (
    CorrelationReport,
    EdgeBaseline,
    Fronts,
    ParetoFront,
    compute_fronts,
    correlation,
    delta_from_front,
    deltas,
    entangled_report,
    front_flags,
)
from ._config import STRATEGY_NAMES, GaConfig, MetricMemoConfig, NnConfig, StrategyConfig
from ._dataset import (
    CoverageStats,
    DataSample,
    Dataset,
    DatasetSpec,
    DynamicsSpec,
    FamilyCounts,
    Secrets,
    connected_graph_count,
    coverage_stats,
    default_specs,
    generate_dataset,
    load_dataset,
    load_secrets,
    load_spec,
    resolve_spec,
    save_dataset,
    save_secrets,
)
from ._degree_sequence import degrees_from_vector, is_graphical, realize_degree_sequence
from ._dynamics import (
    LinearDynamics,
    NodeDynamics,
    NonlinearDynamics,
    SyncResult,
    Trajectory,
    dynamics_from_dict,
    eigenratio_objective,
    linear_objective,
    nonlinear_objective,
    nonlinear_objectives,
    objective,
    simulate_nonlinear,
)
from ._exceptions import (
    DatasetParseError,
    DatasetValidationError,
    DivergenceError,
    DomainError,
    EigensolverError,
    NetDesignError,
    NumericError,
    OptimizerError,
    ParameterError,
    StrategyError,
    TrainingError,
)
from ._features import FEATURE_SCHEMA_VERSION, extract_features, feature_length, feature_matrix, feature_names
from ._genetic import GaResult, ga_optimize
from ._graph import GeneratorKind, Graph, connected_components, edge_pairs, generate, is_connected, max_edges
from ._linalg import eigh, eigvalsh, jacobi_eigh
from ._memo import MemoizedMetrics
from ._metrics import (
    BetweennessStats,
    DegreeStats,
    MetricBundle,
    StructuralStats,
    algebraic_connectivity,
    betweenness_stats,
    degree_stats,
    eigenratio,
    eigenvector_centrality,
    metric_bundle,
    shortest_cycle_lengths,
    spectrum,
    structural_stats,
)
from ._oracle import EXHAUSTIVE_MAX_N, OracleResult, enumerate_connected_graphs, exhaustive_optimum, oracle_optimum
from ._repair import cap_and_connect, non_bridge_edges, repair_connectivity
from ._strategies import (
    StrategyOutcome,
    combination_scores,
    combine_graphs,
    design,
    design_a,
    design_an,
    design_bwne,
    design_ddd,
    design_dpf,
    design_nnga,
    design_pf,
)
from ._surrogate import SurrogateNet, TrainingResult, load_net, loss_and_gradients, predict, save_net, train_surrogate
from ._validation import ValidationRow, best_data_sample, validate_strategies

try:
    __version__ = version("netdesign")
except PackageNotFoundError:
    __version__ = "unknown"

__all__ = [
    "EXHAUSTIVE_MAX_N",
    "FEATURE_SCHEMA_VERSION",
    "STRATEGY_NAMES",
    "BetweennessStats",
    "CorrelationReport",
    "CoverageStats",
    "DataSample",
    "Dataset",
    "DatasetParseError",
    "DatasetSpec",
    "DatasetValidationError",
    "DegreeStats",
    "DivergenceError",
    "DomainError",
    "DynamicsSpec",
    "EdgeBaseline",
    "EigensolverError",
    "FamilyCounts",
    "Fronts",
    "GaConfig",
    "GaResult",
    "GeneratorKind",
    "Graph",
    "LinearDynamics",
    "MemoizedMetrics",
    "MetricBundle",
    "MetricMemoConfig",
    "NetDesignError",
    "NnConfig",
    "NodeDynamics",
    "NonlinearDynamics",
    "NumericError",
    "OptimizerError",
    "OracleResult",
    "ParameterError",
    "ParetoFront",
    "Secrets",
    "StrategyConfig",
    "StrategyError",
    "StrategyOutcome",
    "StructuralStats",
    "SurrogateNet",
    "SyncResult",
    "TrainingError",
    "TrainingResult",
    "Trajectory",
    "ValidationRow",
    "algebraic_connectivity",
    "best_data_sample",
    "betweenness_stats",
    "cap_and_connect",
    "combination_scores",
    "combine_graphs",
    "compute_fronts",
    "connected_components",
    "connected_graph_count",
    "correlation",
    "coverage_stats",
    "default_specs",
    "degree_stats",
    "degrees_from_vector",
    "delta_from_front",
    "deltas",
    "design",
    "design_a",
    "design_an",
    "design_bwne",
    "design_ddd",
    "design_dpf",
    "design_nnga",
    "design_pf",
    "dynamics_from_dict",
    "edge_pairs",
    "eigenratio",
    "eigenratio_objective",
    "eigenvector_centrality",
    "eigh",
    "eigvalsh",
    "entangled_report",
    "enumerate_connected_graphs",
    "exhaustive_optimum",
    "extract_features",
    "feature_length",
    "feature_matrix",
    "feature_names",
    "front_flags",
    "ga_optimize",
    "generate",
    "generate_dataset",
    "is_connected",
    "is_graphical",
    "jacobi_eigh",
    "linear_objective",
    "load_dataset",
    "load_net",
    "load_secrets",
    "load_spec",
    "loss_and_gradients",
    "max_edges",
    "metric_bundle",
    "non_bridge_edges",
    "nonlinear_objective",
    "nonlinear_objectives",
    "objective",
    "oracle_optimum",
    "predict",
    "realize_degree_sequence",
    "repair_connectivity",
    "resolve_spec",
    "save_dataset",
    "save_net",
    "save_secrets",
    "shortest_cycle_lengths",
    "simulate_nonlinear",
    "spectrum",
    "structural_stats",
    "train_surrogate",
    "validate_strategies",
]
