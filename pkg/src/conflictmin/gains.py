"""Exact and sketched marginal gains for zeroing one node's opinion.

Zeroing node i changes the objective f = s^T M s (M = (I+L)^-1 for
resistance, (I+L)^-2 for controversy) by

    gain(i) = s_i * (2 * (M s)_i - s_i * M_ii),

always nonnegative for s >= 0. The exact route evaluates both terms with
linear solves. The sketched route avoids per-node solves by writing the
diagonal as squared column norms,

    ((I+L)^-1)_ii  = ||Omega e_i||^2 + ||B Omega e_i||^2
    ((I+L)^-2)_ii  = ||Omega e_i||^2        (Omega = (I+L)^-1, B = incidence)

and estimating those norms with random +-1/sqrt(p) projections: p solves
against projected incidence rows give an edge-space sketch of B*Omega, p
solves against projection rows give a node-space sketch of Omega, and two
more solves give the smoothed vectors Omega s and Omega^2 s. Everything a
per-node estimate needs is then a handful of array lookups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import ConflictMeasure, _check_lengths
from .linsolve import (
    SolveOptions,
    edge_sketch_tolerance,
    node_sketch_tolerance,
    smoothing_tolerance,
    solve,
    solve_many,
)

# practical defaults; the worst-case formulas are available via theoretical=True
ROW_TOLERANCE = 1e-6
SMOOTHING_TOLERANCE = 1e-8
SKETCH_DIM_FACTOR = 4.0


def default_sketch_dim(n, factor=SKETCH_DIM_FACTOR):
    """Heuristic projection dimension, O(log n)."""
    return max(8, math.ceil(factor * math.log(n)))


def jl_sketch_dim(n, eps):
    """Dimension for which +-1/sqrt(p) projections preserve squared norms
    within 1 +- eps with probability at least 1 - 1/n."""
    return math.ceil(24.0 * math.log(n) / eps**2)


def conservative_sketch_dim(n, eps):
    """Worst-case dimension giving eps/12 norm accuracy, so the end-to-end
    gain estimates land within 1 +- eps even under adversarial compounding."""
    return jl_sketch_dim(n, eps / 12.0)


@dataclass(frozen=True)
class SketchSet:
    """Projected solver outputs for one opinion vector.

    edge_sketch[:, i] estimates B Omega e_i (its squared column norm
    approximates ||B Omega e_i||^2); node_sketch[:, i] likewise for
    Omega e_i. smoothed_once ~ Omega s and smoothed_twice ~ Omega^2 s.
    Column norms are precomputed so per-node gain estimates are O(1).
    Immutable; invalidated when s changes.
    """

    dim: int
    edge_sketch: np.ndarray  # (dim, n)
    node_sketch: np.ndarray  # (dim, n)
    smoothed_once: np.ndarray  # (n,)
    smoothed_twice: np.ndarray  # (n,)
    seed: int
    edge_norms_sq: np.ndarray = field(default=None)  # (n,)
    node_norms_sq: np.ndarray = field(default=None)  # (n,)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("sketch dimension must be >= 1")
        if self.edge_norms_sq is None:
            object.__setattr__(self, "edge_norms_sq", (self.edge_sketch**2).sum(axis=0))
        if self.node_norms_sq is None:
            object.__setattr__(self, "node_norms_sq", (self.node_sketch**2).sum(axis=0))


@dataclass(frozen=True)
class GainEstimate:
    node: int
    delta: float


def exact_gain(g, s, kind, i, opts=None):
    """Drop in the conflict measure when s_i is set to 0, via solves.

    Resistance needs one solve (the i-th column of (I+L)^-1); controversy
    chains a second solve through it for the (I+L)^-2 column.
    """
    _check_lengths(g, s)
    if not (0 <= i < g.n):
        raise ValueError(f"node {i} out of range")
    si = s.values[i]
    if si == 0.0:
        return 0.0
    unit = np.zeros(g.n)
    unit[i] = 1.0
    col = solve(g, unit, opts)
    if kind is ConflictMeasure.CONTROVERSY:
        col = solve(g, col, opts)
    return float(si * (2.0 * (s.values @ col) - si * col[i]))


def build_sketches(g, s, eps, seed, opts=None, p=None, theoretical=False):
    """Build the sketch set for the current opinions. Deterministic per seed.

    The projection entries are +-1/sqrt(p), drawn from a seeded generator
    (node-space rows first, then edge-space rows). Edge-space rows are
    pushed through the incidence transpose by sparse multiplication before
    solving. The two smoothed vectors are hoisted out of the row loop; they
    do not depend on it.

    theoretical=True switches both the solver tolerances and (when p is not
    given) the projection dimension to their worst-case guarantee values.
    """
    _check_lengths(g, s)
    if not (0.0 < eps <= 0.5):
        raise ValueError(f"eps must be in (0, 1/2], got {eps}")

    n, m = g.n, g.m
    max_deg = int(g.degrees.max()) if g.m else 0
    if p is None:
        p = conservative_sketch_dim(n, eps) if theoretical else default_sketch_dim(n)
    if p < 1:
        raise ValueError("sketch dimension must be >= 1")

    max_iter = opts.max_iterations if opts is not None else None
    if theoretical:
        row_tol_edge = edge_sketch_tolerance(n, eps)
        row_tol_node = node_sketch_tolerance(n, eps)
        smooth_tol = smoothing_tolerance(n, max_deg, eps)
    elif opts is not None:
        row_tol_edge = row_tol_node = opts.tolerance
        smooth_tol = min(opts.tolerance, SMOOTHING_TOLERANCE)
    else:
        row_tol_edge = row_tol_node = ROW_TOLERANCE
        smooth_tol = SMOOTHING_TOLERANCE
    edge_opts = SolveOptions(tolerance=row_tol_edge, max_iterations=max_iter)
    node_opts = SolveOptions(tolerance=row_tol_node, max_iterations=max_iter)
    smooth_opts = SolveOptions(tolerance=smooth_tol, max_iterations=max_iter)

    rng = np.random.default_rng(seed)
    scale = 1.0 / math.sqrt(p)

    node_rows = (rng.integers(0, 2, size=(p, n)) * 2.0 - 1.0) * scale
    incidence_t = g.incidence().T.tocsr()  # (n, m)
    projected_edges = np.empty((p, n))
    for r in range(p):
        edge_row = (rng.integers(0, 2, size=m) * 2.0 - 1.0) * scale
        projected_edges[r] = incidence_t @ edge_row

    smoothed_once = solve(g, s.values, smooth_opts)
    smoothed_twice = solve(g, smoothed_once, smooth_opts)
    edge_sketch = np.vstack(solve_many(g, projected_edges, edge_opts))
    node_sketch = np.vstack(solve_many(g, node_rows, node_opts))

    return SketchSet(
        dim=p,
        edge_sketch=edge_sketch,
        node_sketch=node_sketch,
        smoothed_once=smoothed_once,
        smoothed_twice=smoothed_twice,
        seed=seed,
    )


def estimate_gains(g, s, kind, sk, exclude=frozenset()):
    """Sketched gain for every node not excluded, O(n) given the sketches.

    resistance:  s_i * (2*smoothed_once_i  - (edge_norm_i^2 + node_norm_i^2) * s_i)
    controversy: s_i * (2*smoothed_twice_i - node_norm_i^2 * s_i)

    Nodes with s_i = 0 get exactly 0. Sketch noise can push an estimate
    negative; such values are kept (they just lose the argmax).
    The caller must rebuild sketches whenever s changes.
    """
    _check_lengths(g, s)
    vals = s.values
    if kind is ConflictMeasure.RESISTANCE:
        diag_est = sk.edge_norms_sq + sk.node_norms_sq
        deltas = vals * (2.0 * sk.smoothed_once - diag_est * vals)
    elif kind is ConflictMeasure.CONTROVERSY:
        deltas = vals * (2.0 * sk.smoothed_twice - sk.node_norms_sq * vals)
    else:
        raise ValueError(f"unknown measure {kind!r}")
    return [
        GainEstimate(node=i, delta=float(deltas[i]))
        for i in range(g.n)
        if i not in exclude
    ]
