"""Priority vectors from pairwise comparison matrices by minimizing the worst
absolute deviation, with refinement to the unique Pareto-optimal point."""

from .arclen import ArcLengthFn, CycleLengthFn, arc_length, arc_multiplier, canonical_cycle, cycle_length, inflexion_point
from .lwae import SolveReport, check_feasible, polish, solve, solve_bisection, solve_cycle_cancel
from .netflow import ParametricNetwork, bellman_ford_oracle, build_network, shortest_paths_or_cycle
from .pcm import (
    PairwiseComparisonMatrix,
    WeightVector,
    complete_upper_triangle,
    consistent_pcm,
    deviations,
    geometric_mean_vector,
    gp_error,
    is_consistent,
    principal_eigenvector,
    random_pcm,
    read_matrix_csv,
    saaty_index,
    validate_pcm,
    write_matrix_csv,
)
from .refine import (
    binding_digraph,
    component_offsets,
    is_unique,
    reduce_network,
    refine_to_unique,
    solution_dimension,
    verify_pareto,
)
from .rootfind import BadBracket, Bracket, anderson_bjorck

__version__ = "0.1.0"
