"""lampharm: lamplighter and product graphs as lazy oracles, with
p-harmonic Dirichlet solvers, capacity and isoperimetric probes,
spanning-line machinery, and random-walk contrast experiments."""

__version__ = "0.1.0"

from .keys import IntPoint, LampKey, PairKey, WordKey, format_key
from .graphs import (
    BudgetExceededError,
    DEFAULT_VERTEX_BUDGET,
    FiniteGraph,
    GraphOracle,
    InvalidVertexError,
    ball,
    caterpillar_graph,
    cayley_graph,
    cycle_graph,
    direct_product,
    end_estimate,
    free_group_graph,
    graph_distances,
    grid_graph,
    induced_on,
    k_fuzz,
    lamplighter,
    line_graph,
    pairwise_distance,
    path_graph,
)
from .descriptors import DescriptorError, parse_descriptor
from .potential import (
    DirichletProblem,
    DisconnectedInteriorError,
    EdgeFunction,
    NonConvergenceError,
    SolverError,
    VertexFunction,
    annulus_capacity,
    gradient,
    harmonic_residual,
    oscillation_probe,
    p_energy,
    sign_projection,
    solve_dirichlet,
    split_by_sign,
)
from .isoperimetry import (
    GrowthEstimate,
    IsoProfilePoint,
    default_family,
    edge_boundary,
    growth_exponent,
    is_d_kappa,
    iso_profile,
    iso_ratio,
)
from .spanning import (
    GradientBoundReport,
    LineRule,
    SearchResult,
    SpanningLine,
    augment_ball,
    augment_with_line,
    builtin_spanning_line,
    check_line_rule,
    check_spanning_line,
    find_spanning_line,
    verify_gradient_bound,
)
from .walks import (
    ContrastReport,
    WalkConfig,
    WalkSeries,
    chi_square_uniform,
    liouville_contrast,
    simulate_walks,
    tv_distance,
    walk_series,
)
from .report import ExperimentReport, dirichlet_json, fmt_value, write_csv

__all__ = [
    "__version__",
    "IntPoint", "LampKey", "PairKey", "WordKey", "format_key",
    "BudgetExceededError", "DEFAULT_VERTEX_BUDGET", "FiniteGraph",
    "GraphOracle", "InvalidVertexError", "ball", "caterpillar_graph",
    "cayley_graph", "cycle_graph", "direct_product", "end_estimate",
    "free_group_graph", "graph_distances", "grid_graph", "induced_on",
    "k_fuzz", "lamplighter", "line_graph", "pairwise_distance",
    "path_graph",
    "DescriptorError", "parse_descriptor",
    "DirichletProblem", "DisconnectedInteriorError", "EdgeFunction",
    "NonConvergenceError", "SolverError", "VertexFunction",
    "annulus_capacity", "gradient", "harmonic_residual",
    "oscillation_probe", "p_energy", "sign_projection", "solve_dirichlet",
    "split_by_sign",
    "GrowthEstimate", "IsoProfilePoint", "default_family", "edge_boundary",
    "growth_exponent", "is_d_kappa", "iso_profile", "iso_ratio",
    "GradientBoundReport", "LineRule", "SearchResult", "SpanningLine",
    "augment_ball", "augment_with_line", "builtin_spanning_line",
    "check_line_rule", "check_spanning_line", "find_spanning_line",
    "verify_gradient_bound",
    "ContrastReport", "WalkConfig", "WalkSeries", "chi_square_uniform",
    "liouville_contrast", "simulate_walks", "tv_distance", "walk_series",
    "ExperimentReport", "dirichlet_json", "fmt_value", "write_csv",
]
