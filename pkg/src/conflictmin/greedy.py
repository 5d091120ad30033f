"""Node-selection strategies for conflict minimization.

The objective f(T) (conflict after zeroing the opinions of set T) is
non-increasing and supermodular in T, so greedily taking the node with the
largest marginal gain each round is within a (1 - 1/e) factor of the best
possible drop. greedy_exact evaluates gains exactly; greedy_ac swaps in the
sketched estimates and scales to millions of edges. Random and PageRank
baselines and an exhaustive brute-force oracle round out the lineup.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from .dynamics import ConflictMeasure, dense_forest_matrix, measure
from .gains import build_sketches, estimate_gains
from .linsolve import solve

# above this size greedy_exact stops materializing the dense inverse and
# falls back to per-column solves for the diagonal
DENSE_GREEDY_CUTOFF = 4096
BRUTE_FORCE_BUDGET = 2_000_000


class Method(Enum):
    GREEDY = "greedy"
    GREEDY_AC = "greedy-ac"
    RANDOM = "random"
    PAGERANK = "pagerank"
    BRUTE_FORCE = "brute-force"


@dataclass
class SelectionResult:
    """Outcome of one selection run.

    chosen is ordered by pick time. step_gains holds the per-round gain the
    method acted on (estimates for greedy-ac, empty for methods that do not
    evaluate gains); successive entries need not be non-increasing. f_initial
    and f_final are set only by methods that evaluate the objective.
    """

    method: Method
    chosen: list[int]
    k: int
    step_gains: list[float] = field(default_factory=list)
    f_initial: float | None = None
    f_final: float | None = None
    elapsed: float = 0.0
    seed: int | None = None
    epsilon: float | None = None

    def __post_init__(self):
        if len(self.chosen) != self.k:
            raise ValueError(f"expected {self.k} chosen nodes, got {len(self.chosen)}")
        if len(set(self.chosen)) != len(self.chosen):
            raise ValueError("chosen nodes must be distinct")

    def to_dict(self):
        return {
            "method": self.method.value,
            "chosen": [int(i) for i in self.chosen],
            "k": self.k,
            "step_gains": [float(x) for x in self.step_gains],
            "f_initial": self.f_initial,
            "f_final": self.f_final,
            "elapsed": self.elapsed,
            "seed": self.seed,
            "epsilon": self.epsilon,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            method=Method(d["method"]),
            chosen=list(d["chosen"]),
            k=d["k"],
            step_gains=list(d["step_gains"]),
            f_initial=d["f_initial"],
            f_final=d["f_final"],
            elapsed=d["elapsed"],
            seed=d["seed"],
            epsilon=d["epsilon"],
        )


def _check_k(k, n, allow_full=False):
    top = n if allow_full else n - 1
    if not (1 <= k <= top):
        raise ValueError(f"k must be in [1, {top}] for n={n}, got {k}")


def _dense_objective_tables(g, kind):
    """Dense forest matrix plus the diagonal of the objective matrix M."""
    omega = dense_forest_matrix(g, cap=max(DENSE_GREEDY_CUTOFF, g.n))
    if kind is ConflictMeasure.RESISTANCE:
        return omega, np.diag(omega).copy()
    return omega, (omega**2).sum(axis=0)  # (Omega^2)_ii = ||Omega e_i||^2


def _solver_objective_diag(g, kind, opts):
    """Diagonal of M by one solve per column; used beyond the dense cutoff."""
    diag = np.empty(g.n)
    unit = np.zeros(g.n)
    for i in range(g.n):
        unit[i] = 1.0
        col = solve(g, unit, opts)
        unit[i] = 0.0
        diag[i] = col[i] if kind is ConflictMeasure.RESISTANCE else col @ col
    return diag


def greedy_exact(g, s, kind, k, opts=None):
    """Select k nodes by exact marginal gains, zeroing each pick in turn.

    Per round the whole gain vector is s * (2*(M s) - diag(M)*s); the
    diagonal never changes, so it is computed once up front (via a dense
    inverse below DENSE_GREEDY_CUTOFF, per-column solves above). Ties go to
    the smallest node id.
    """
    _check_k(k, g.n)
    work = s.copy()
    t0 = time.perf_counter()

    dense = g.n <= DENSE_GREEDY_CUTOFF
    if dense:
        omega, diag = _dense_objective_tables(g, kind)

        def smoothed(vals):
            out = omega @ vals
            return out if kind is ConflictMeasure.RESISTANCE else omega @ out

    else:
        diag = _solver_objective_diag(g, kind, opts)

        def smoothed(vals):
            out = solve(g, vals, opts)
            return out if kind is ConflictMeasure.RESISTANCE else solve(g, out, opts)

    def objective(vals, ms):
        if kind is ConflictMeasure.RESISTANCE:
            return float(vals @ ms)
        z = omega @ vals if dense else solve(g, vals, opts)
        return float(z @ z)

    chosen, gains = [], []
    ms = smoothed(work.values)
    f_initial = objective(work.values, ms)
    for _ in range(k):
        deltas = work.values * (2.0 * ms - diag * work.values)
        deltas[chosen] = -np.inf
        pick = int(np.argmax(deltas))  # first max == smallest id on ties
        chosen.append(pick)
        gains.append(float(deltas[pick]))
        work.zero(pick)
        ms = smoothed(work.values)
    f_final = objective(work.values, ms)

    return SelectionResult(
        method=Method.GREEDY,
        chosen=chosen,
        k=k,
        step_gains=gains,
        f_initial=f_initial,
        f_final=f_final,
        elapsed=time.perf_counter() - t0,
    )


def greedy_ac(g, s, kind, k, eps, seed, opts=None, p=None, theoretical=False):
    """Sketched greedy: k rounds of build-sketches / estimate / pick.

    Each round rebuilds the sketches for the current opinions with a fresh
    seed (seed + round index) and zeroes the highest-estimate node, ties to
    the smallest id. f_initial/f_final are evaluated with the exact measure
    so reported drops are honest; step_gains are the acted-on estimates.
    """
    _check_k(k, g.n)
    if not (0.0 < eps <= 0.5):
        raise ValueError(f"eps must be in (0, 1/2], got {eps}")
    work = s.copy()
    f_initial = measure(g, work, kind, opts)

    chosen, gains = [], []
    excluded = set()
    t0 = time.perf_counter()
    for rnd in range(k):
        sk = build_sketches(
            g, work, eps, seed + rnd, opts=opts, p=p, theoretical=theoretical
        )
        estimates = estimate_gains(g, work, kind, sk, exclude=excluded)
        best = estimates[0]
        for est in estimates[1:]:
            if est.delta > best.delta:
                best = est
        chosen.append(best.node)
        gains.append(best.delta)
        excluded.add(best.node)
        work.zero(best.node)
    elapsed = time.perf_counter() - t0

    f_final = measure(g, work, kind, opts)
    return SelectionResult(
        method=Method.GREEDY_AC,
        chosen=chosen,
        k=k,
        step_gains=gains,
        f_initial=f_initial,
        f_final=f_final,
        elapsed=elapsed,
        seed=seed,
        epsilon=eps,
    )


def brute_force(g, s, kind, k, opts=None):
    """Exhaustive minimum of f over all k-subsets; ties go to the
    lexicographically smallest set. Refused beyond BRUTE_FORCE_BUDGET sets."""
    _check_k(k, g.n)
    n_sets = math.comb(g.n, k)
    if n_sets > BRUTE_FORCE_BUDGET:
        raise ValueError(
            f"brute force refused: C({g.n},{k}) = {n_sets} exceeds budget {BRUTE_FORCE_BUDGET}"
        )
    t0 = time.perf_counter()

    if g.n <= DENSE_GREEDY_CUTOFF:
        omega = dense_forest_matrix(g, cap=max(DENSE_GREEDY_CUTOFF, g.n))
        M = omega if kind is ConflictMeasure.RESISTANCE else omega @ omega
        sv = s.values
        ms = M @ sv
        f_empty = float(sv @ ms)
        # f(T) = f(empty) - 2*sum_{a in T} s_a (Ms)_a + sum_{a,b in T} M_ab s_a s_b
        weighted = (sv * ms).tolist()
        Ml = M.tolist()
        svl = sv.tolist()
        best_f, best_T = math.inf, None
        for T in combinations(range(g.n), k):
            acc = f_empty
            for idx in range(k):
                a = T[idx]
                sa = svl[a]
                acc -= 2.0 * weighted[a]
                acc += Ml[a][a] * sa * sa
                for jdx in range(idx + 1, k):
                    b = T[jdx]
                    acc += 2.0 * Ml[a][b] * sa * svl[b]
            if acc < best_f:
                best_f, best_T = acc, T
    else:
        f_empty = measure(g, s, kind, opts)
        best_f, best_T = math.inf, None
        for T in combinations(range(g.n), k):
            f_T = measure(g, s.zeroed(T), kind, opts)
            if f_T < best_f:
                best_f, best_T = f_T, T

    return SelectionResult(
        method=Method.BRUTE_FORCE,
        chosen=list(best_T),
        k=k,
        f_initial=f_empty,
        f_final=float(best_f),
        elapsed=time.perf_counter() - t0,
    )


def baseline_random(g, k, seed):
    """Uniform k-sample without replacement, deterministic per seed."""
    _check_k(k, g.n, allow_full=True)
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    chosen = [int(i) for i in rng.choice(g.n, size=k, replace=False)]
    return SelectionResult(
        method=Method.RANDOM,
        chosen=chosen,
        k=k,
        elapsed=time.perf_counter() - t0,
        seed=seed,
    )


def pagerank_scores(g, damping=0.85, tol=1e-10, max_rounds=200):
    """PageRank on the undirected random walk with uniform teleport.

    Power iteration until the L1 change drops below tol (or max_rounds).
    """
    if not (0.0 < damping < 1.0):
        raise ValueError(f"damping must be in (0, 1), got {damping}")
    n = g.n
    if n == 1:
        return np.array([1.0])
    deg = g.degrees.astype(np.float64)
    scores = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_rounds):
        new = teleport + damping * g.adjacency_matvec(scores / deg)
        if np.abs(new - scores).sum() < tol:
            return new
        scores = new
    return scores


def baseline_pagerank(g, k, damping=0.85, tol=1e-10, max_rounds=200):
    """Top-k nodes by PageRank score; ties go to the smallest node id."""
    _check_k(k, g.n, allow_full=True)
    t0 = time.perf_counter()
    scores = pagerank_scores(g, damping, tol, max_rounds)
    order = np.argsort(-scores, kind="stable")  # stable: ties keep id order
    chosen = [int(i) for i in order[:k]]
    return SelectionResult(
        method=Method.PAGERANK,
        chosen=chosen,
        k=k,
        elapsed=time.perf_counter() - t0,
    )
