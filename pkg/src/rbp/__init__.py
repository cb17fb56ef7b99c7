"""Bicriteria approximation for the offline reordering buffer problem on trees and general metrics."""

from rbp.brute import SizeLimitError, solve_exact, solve_exact_capacity
from rbp.cover import RequestCover, cover_length, greedy_extension, minimal_hitting_set
from rbp.embedding import EmbeddedTree, embed_metric, pull_back_schedule
from rbp.instance import (
    InstanceError, RbpInstance, WindowPartition, format_instance, pad_to_window_multiple,
    parse_instance, partition_windows, read_instance, write_instance,
)
from rbp.intervals import ServiceIntervals, check_two_feasibility, derive_intervals
from rbp.lowerbound import LowerBoundInstance, gap_report, generate
from rbp.lp import LinearProgram, LpSolution, build_lp1, build_lp2_directed, solve_lp
from rbp.pipeline import Solution, StageError, solve_general, solve_tree
from rbp.server import (
    ServerTrace, inorder_cost, run_cover_server, run_lowerbound_server, validate_trace,
)
from rbp.terminals import Terminals, find_terminal, find_terminals, orient_window
from rbp.tree import Arc, Tree, TreePath

__version__ = "0.1.0"
