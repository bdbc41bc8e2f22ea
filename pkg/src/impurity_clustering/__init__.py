"""Minimum-impurity clustering with entropy impurity: solvers, channel
quantization, and the gap reduction from vertex cover."""
from .channel import Channel, Quantizer, design_quantizer, mutual_information_xy, mutual_information_xz
from .core import (
    Clustering,
    Graph,
    Instance,
    clustering_impurity,
    edge_set_impurity,
    entropy_impurity,
    kl_divergence,
    mtc_kl_objective,
)
from .errors import DomainError, InvariantError, ParseError, ResourceError
from .reductions import build_trace, generate_hard_instance, normalize_minimal_cover, star_decomposition
from .solvers import SolveResult, solve, solve_exact, solve_lloyd, solve_multistart

__version__ = "0.1.0"

__all__ = [
    "Channel", "Quantizer", "design_quantizer", "mutual_information_xy", "mutual_information_xz",
    "Clustering", "Graph", "Instance", "clustering_impurity", "edge_set_impurity", "entropy_impurity",
    "kl_divergence", "mtc_kl_objective",
    "DomainError", "InvariantError", "ParseError", "ResourceError",
    "build_trace", "generate_hard_instance", "normalize_minimal_cover", "star_decomposition",
    "SolveResult", "solve", "solve_exact", "solve_lloyd", "solve_multistart",
]
