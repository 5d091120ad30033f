"""Iterative solver for systems (I + L) x = b on a graph.

(I + L) is symmetric, diagonally dominant and positive definite with
eigenvalues in [1, 1 + 2*max_degree], so plain conjugate gradient with a
Jacobi (diagonal) preconditioner converges quickly and deterministically.

The accuracy contract is relative error at most `tolerance` measured in the
(I+L)-norm. That norm is not computable without the true solution, so the
stopping rule is the relative residual ||(I+L)y - b|| / ||b||, tightened by
the spectral safety factor sqrt(1 + 2*max_degree): together with
lambda_min(I+L) >= 1 this provably implies the (I+L)-norm bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit


class ConvergenceError(RuntimeError):
    """Solver failed to reach the requested tolerance.

    Carries the last relative residual so callers can retry with a looser
    tolerance or a larger iteration budget.
    """

    def __init__(self, relative_residual, iterations):
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(relative residual {relative_residual:.3e})"
        )
        self.relative_residual = relative_residual
        self.iterations = iterations


@dataclass(frozen=True)
class SolveOptions:
    """Solver configuration.

    tolerance: target relative error (0 < tolerance < 1).
    max_iterations: iteration cap; defaults to 10*sqrt(n) + 100 at solve time.
    seed: unused by the deterministic solver, accepted for interface
        uniformity with the randomized stages built on top of it.
    """

    tolerance: float = 1e-8
    max_iterations: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if not (0.0 < self.tolerance < 1.0):
            raise ValueError(f"tolerance must be in (0, 1), got {self.tolerance}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    def iteration_cap(self, n):
        if self.max_iterations is not None:
            return self.max_iterations
        return int(10 * math.sqrt(n)) + 100


@njit(cache=True)
def _pcg(indptr, indices, diag, b, rel_target, maxiter):
    """Jacobi-preconditioned CG on (I + L) with explicit loops.

    All reductions are sequential, so results are bit-reproducible for a
    given input. Returns (x, iterations, relative_residual, converged).
    """
    n = b.shape[0]
    x = np.zeros(n)
    bnorm2 = 0.0
    for i in range(n):
        bnorm2 += b[i] * b[i]
    if bnorm2 == 0.0:
        return x, 0, 0.0, True
    bnorm = np.sqrt(bnorm2)
    target = rel_target * bnorm

    r = b.copy()
    z = np.empty(n)
    for i in range(n):
        z[i] = r[i] / diag[i]
    p = z.copy()
    rz = 0.0
    for i in range(n):
        rz += r[i] * z[i]

    Ap = np.empty(n)
    rnorm = bnorm
    for it in range(maxiter):
        for i in range(n):
            acc = diag[i] * p[i]
            for jj in range(indptr[i], indptr[i + 1]):
                acc -= p[indices[jj]]
            Ap[i] = acc
        pAp = 0.0
        for i in range(n):
            pAp += p[i] * Ap[i]
        alpha = rz / pAp
        rnorm2 = 0.0
        for i in range(n):
            x[i] += alpha * p[i]
            r[i] -= alpha * Ap[i]
            rnorm2 += r[i] * r[i]
        rnorm = np.sqrt(rnorm2)
        if rnorm <= target:
            return x, it + 1, rnorm / bnorm, True
        rz_new = 0.0
        for i in range(n):
            z[i] = r[i] / diag[i]
            rz_new += r[i] * z[i]
        beta = rz_new / rz
        for i in range(n):
            p[i] = z[i] + beta * p[i]
        rz = rz_new
    return x, maxiter, rnorm / bnorm, False


def solve(g, b, opts=None):
    """Solve (I + L) x = b to relative error opts.tolerance.

    Deterministic for a given (graph, b, opts). Raises ConvergenceError if
    the iteration cap is hit first.
    """
    if opts is None:
        opts = SolveOptions()
    b = np.ascontiguousarray(b, dtype=np.float64)
    if b.shape != (g.n,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({g.n},)")
    if not np.all(np.isfinite(b)):
        raise ValueError("right-hand side must be finite")

    max_deg = int(g.degrees.max()) if g.n > 0 and g.m > 0 else 0
    safety = math.sqrt(1.0 + 2.0 * max_deg)
    x, iters, relres, converged = _pcg(
        g.indptr,
        g.indices,
        g._diag,
        b,
        opts.tolerance / safety,
        opts.iteration_cap(g.n),
    )
    if not converged:
        raise ConvergenceError(relres, iters)
    return x


def solve_many(g, rows, opts=None):
    """Solve (I + L) x = row for each row; identical to independent solves.

    Rows are independent, so they could be dispatched concurrently; the
    sequential loop keeps results bit-identical to per-row solve() calls.
    Failures are reported with the offending row index.
    """
    out = []
    for idx, row in enumerate(rows):
        try:
            out.append(solve(g, row, opts))
        except ConvergenceError as exc:
            exc.args = (f"row {idx}: {exc.args[0]}",)
            raise
    return out


def edge_sketch_tolerance(n, eps):
    """Worst-case solver tolerance for edge-space sketch rows.

    Scales like eps / n^3; far tighter than anything needed in practice,
    available behind the theoretical-tolerances flag.
    """
    num = eps * math.sqrt(1.0 - eps / 12.0) * (n - 1)
    den = 32.0 * n**2 * (n + 1) * math.sqrt((1.0 + eps / 12.0) * (n + 1) * n)
    return num / den


def node_sketch_tolerance(n, eps):
    """Worst-case solver tolerance for node-space sketch rows."""
    num = eps * math.sqrt(1.0 - eps / 12.0)
    den = 32.0 * (n + 1) * math.sqrt((1.0 + eps / 12.0) * (n + 1) * n)
    return num / den


def smoothing_tolerance(n, max_degree, eps):
    """Worst-case solver tolerance for the smoothed-opinion vectors.

    The matrix-magnitude term is taken as 1 + max_degree, the largest
    diagonal entry of (I + L).
    """
    return eps / (6.0 * (1.0 + max_degree) * math.sqrt(n * (1.0 + n)))
