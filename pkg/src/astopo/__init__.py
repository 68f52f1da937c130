"""AS-level Internet topology toolkit.

Builds AS graphs from ASPATH data, computes topological measures, detects
distributional change with the two-sample Cramér-von Mises criterion, and
evaluates generative topology models against a reference graph.
"""

__version__ = "0.1.0"

from .graph import (AsGraph, build_graph, degrees, largest_connected_component,
                    read_edge_list, write_edge_list)
from .generators import GeneratorConfig, edge_budget, generate
from .stats import CvmResult, cvm_p_value, cvm_statistic, subsample

__all__ = [
    "AsGraph",
    "build_graph",
    "degrees",
    "largest_connected_component",
    "read_edge_list",
    "write_edge_list",
    "GeneratorConfig",
    "generate",
    "edge_budget",
    "CvmResult",
    "cvm_statistic",
    "cvm_p_value",
    "subsample",
    "__version__",
]
