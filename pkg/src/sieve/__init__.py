"""Community detection in sparse networks.

Components are split off by breadth-first search, then each one is
partitioned exactly under the S objective (or modularity Q for comparison).
"""

from .components import Component, component_size_distribution, decompose
from .graph import (
    DegreeReport,
    GraphFormatError,
    SparseGraph,
    build_threshold_network,
    degree_report,
    load_edge_list,
    read_edge_list,
)
from .objectives import Partition, eval_Q, eval_S_component, eval_S_global
from .solver import SolveResult, brute_force_best, export_mip, solve_Q, solve_S

__version__ = "0.1.0"
