"""Minimize conflict in social networks by zeroing k initial opinions.

Under the Friedkin-Johnsen opinion model, expressed opinions settle at
z = (I + L)^-1 s. This package selects the k nodes whose internal opinions,
once set to zero, most reduce either resistance (s.z) or controversy (z.z):
exactly via supermodular greedy, or in nearly linear time via randomized
sketching of the gain formula.
"""

from .dynamics import (
    ConflictMeasure,
    ExpressedOpinions,
    OpinionVector,
    dense_forest_matrix,
    equilibrium,
    fj_step,
    measure,
    polarization_index,
)
from .gains import (
    GainEstimate,
    SketchSet,
    build_sketches,
    default_sketch_dim,
    estimate_gains,
    exact_gain,
    jl_sketch_dim,
)
from .graph import (
    EdgeListError,
    Graph,
    NodeIdMap,
    incidence_apply,
    laplacian_plus_identity_apply,
    load_edge_list,
)
from .greedy import (
    Method,
    SelectionResult,
    baseline_pagerank,
    baseline_random,
    brute_force,
    greedy_ac,
    greedy_exact,
    pagerank_scores,
)
from .linsolve import ConvergenceError, SolveOptions, solve, solve_many

__version__ = "0.1.0"

__all__ = [
    "ConflictMeasure",
    "ConvergenceError",
    "EdgeListError",
    "ExpressedOpinions",
    "GainEstimate",
    "Graph",
    "Method",
    "NodeIdMap",
    "OpinionVector",
    "SelectionResult",
    "SketchSet",
    "SolveOptions",
    "baseline_pagerank",
    "baseline_random",
    "brute_force",
    "build_sketches",
    "default_sketch_dim",
    "dense_forest_matrix",
    "equilibrium",
    "estimate_gains",
    "exact_gain",
    "fj_step",
    "greedy_ac",
    "greedy_exact",
    "incidence_apply",
    "jl_sketch_dim",
    "laplacian_plus_identity_apply",
    "load_edge_list",
    "measure",
    "pagerank_scores",
    "polarization_index",
    "solve",
    "solve_many",
]
