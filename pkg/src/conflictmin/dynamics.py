"""Friedkin-Johnsen equilibrium opinions and the two conflict measures.

Each node holds a fixed internal opinion s_i in [0, 1] and repeatedly
averages it with its neighbors' expressed opinions. The equilibrium
expressed opinions are z = (I + L)^-1 s, a convex combination of internal
opinions because (I + L)^-1 (the forest matrix) is doubly stochastic with
nonnegative entries on connected graphs.

Conflict measures over the equilibrium:
  resistance  = s . z  = s^T (I+L)^-1 s
  controversy = z . z  = s^T (I+L)^-2 s
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .linsolve import solve

DENSE_ORACLE_CAP = 500


class ConflictMeasure(Enum):
    RESISTANCE = "resistance"
    CONTROVERSY = "controversy"


class OpinionVector:
    """Internal opinions, one per node, each in [0, 1].

    Mutable only by zeroing entries, which preserves the range invariant.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("opinions must be a 1-d vector")
        if len(values) and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError("opinions must lie in [0, 1]")
        self.values = values.copy()

    @property
    def n(self):
        return len(self.values)

    def copy(self):
        return OpinionVector(self.values)

    def zero(self, i):
        """Set s_i to 0 in place."""
        self.values[i] = 0.0

    def zeroed(self, nodes):
        """Copy with the given nodes' opinions set to 0."""
        out = self.values.copy()
        out[list(nodes)] = 0.0
        return OpinionVector(out)

    def __repr__(self):
        return f"OpinionVector(n={self.n})"


class ExpressedOpinions:
    """Equilibrium expressed opinions z, one per node."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = np.asarray(values, dtype=np.float64)

    @property
    def n(self):
        return len(self.values)


def _check_lengths(g, s):
    if s.n != g.n:
        raise ValueError(f"opinion vector has {s.n} entries, graph has {g.n} nodes")


def equilibrium(g, s, opts=None):
    """Equilibrium expressed opinions z = (I + L)^-1 s."""
    _check_lengths(g, s)
    return ExpressedOpinions(solve(g, s.values, opts))


def fj_step(g, s, z_t):
    """One synchronous update: z_i <- (s_i + sum of neighbor z_j) / (1 + d_i)."""
    _check_lengths(g, s)
    z_t = np.asarray(z_t, dtype=np.float64)
    if z_t.shape != (g.n,):
        raise ValueError(f"state has shape {z_t.shape}, expected ({g.n},)")
    return (s.values + g.adjacency_matvec(z_t)) / (1.0 + g.degrees)


def measure(g, s, kind, opts=None):
    """Evaluate a conflict measure at the current internal opinions.

    Both measures need only the single solve z = (I+L)^-1 s: resistance is
    s.z and controversy is z.z. Both are nonnegative and at most n.
    """
    _check_lengths(g, s)
    z = solve(g, s.values, opts)
    if kind is ConflictMeasure.RESISTANCE:
        return float(s.values @ z)
    if kind is ConflictMeasure.CONTROVERSY:
        return float(z @ z)
    raise ValueError(f"unknown measure {kind!r}")


def polarization_index(g, s, opts=None):
    """Controversy normalized by node count; display quantity only."""
    return measure(g, s, ConflictMeasure.CONTROVERSY, opts) / g.n


def dense_forest_matrix(g, cap=DENSE_ORACLE_CAP):
    """Exact (I + L)^-1 by dense factorization. Test oracle, size-capped."""
    if g.n > cap:
        raise ValueError(f"dense oracle refused: n={g.n} exceeds cap {cap}")
    system = np.eye(g.n)
    system[np.arange(g.n), np.arange(g.n)] += g.degrees
    system[g.edges[:, 0], g.edges[:, 1]] -= 1.0
    system[g.edges[:, 1], g.edges[:, 0]] -= 1.0
    return np.linalg.inv(system)
