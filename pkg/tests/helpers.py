"""Shared test fixtures: independent dense oracles and random graph builders.

The dense matrices here are assembled straight from edge lists with plain
numpy, on purpose: they never go through the package's sparse machinery, so
they can serve as oracles for it.
"""

import numpy as np

from conflictmin import ConflictMeasure, Graph, OpinionVector


def dense_system(n, edges):
    """(I + L) assembled densely from an edge list."""
    M = np.eye(n)
    for u, v in edges:
        M[u, u] += 1.0
        M[v, v] += 1.0
        M[u, v] -= 1.0
        M[v, u] -= 1.0
    return M


def dense_inverse(n, edges):
    """(I + L)^-1 by dense inversion."""
    return np.linalg.inv(dense_system(n, edges))


def dense_incidence(n, edges):
    """Signed incidence matrix, +1 at the smaller endpoint of each edge."""
    B = np.zeros((len(edges), n))
    for e, (u, v) in enumerate(edges):
        a, b = (u, v) if u < v else (v, u)
        B[e, a] = 1.0
        B[e, b] = -1.0
    return B


def dense_measure(n, edges, s_values, kind):
    """Conflict measure evaluated with the dense inverse."""
    omega = dense_inverse(n, edges)
    z = omega @ s_values
    if kind is ConflictMeasure.RESISTANCE:
        return float(s_values @ z)
    return float(z @ z)


def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def cycle_edges(n):
    return path_edges(n) + [(0, n - 1)]


def star_edges(n):
    return [(0, i) for i in range(1, n)]


def path_graph(n):
    return Graph(n, path_edges(n))


def random_tree_edges(rng, n):
    """Random attachment tree: node i>=1 hangs off a uniform earlier node."""
    if n == 1:
        return []
    parents = rng.integers(0, np.maximum(np.arange(1, n), 1))
    return [(int(p), i) for i, p in enumerate(parents, start=1)]


def er_graph(rng, n, p=None, max_tries=200):
    """Erdos-Renyi G(n, p), resampled until connected."""
    if p is None:
        p = min(1.0, 2.2 * np.log(max(n, 2)) / max(n, 2))
    for _ in range(max_tries):
        upper = rng.random((n, n)) < p
        iu = np.triu_indices(n, k=1)
        mask = upper[iu]
        edges = list(zip(iu[0][mask].tolist(), iu[1][mask].tolist()))
        try:
            return Graph(n, edges)
        except ValueError:
            continue
    raise RuntimeError("failed to sample a connected graph")


def random_tree(rng, n):
    return Graph(n, random_tree_edges(rng, n))


def random_connected(rng, n):
    """Either flavor of small random connected graph, even split."""
    if rng.random() < 0.5:
        return random_tree(rng, n)
    return er_graph(rng, n)


def sparse_synthetic(rng, n, extra_edges):
    """Connected sparse graph: random attachment tree plus extra random edges."""
    tree = random_tree_edges(rng, n)
    u = rng.integers(0, n, size=int(extra_edges * 1.2))
    v = rng.integers(0, n, size=int(extra_edges * 1.2))
    keep = u != v
    lo = np.minimum(u[keep], v[keep]).astype(np.int64)
    hi = np.maximum(u[keep], v[keep]).astype(np.int64)
    keys = lo * n + hi
    tree_arr = np.asarray(tree, dtype=np.int64)
    tree_keys = tree_arr[:, 0] * n + tree_arr[:, 1] if len(tree) else np.empty(0, np.int64)
    keys = np.setdiff1d(np.unique(keys), tree_keys)[:extra_edges]
    edges = tree + list(zip((keys // n).tolist(), (keys % n).tolist()))
    return Graph(n, edges)


def preferential_attachment(rng, n, attach):
    """Scale-free-ish graph: each new node links to `attach` distinct nodes
    sampled proportionally to degree."""
    edges = [(i, j) for i in range(attach + 1) for j in range(i + 1, attach + 1)]
    endpoint_pool = [v for e in edges for v in e]
    for node in range(attach + 1, n):
        targets = set()
        while len(targets) < attach:
            targets.add(endpoint_pool[rng.integers(0, len(endpoint_pool))])
        for t in sorted(targets):
            edges.append((t, node))
            endpoint_pool.extend((t, node))
    return Graph(n, edges)


def random_opinions(rng, n):
    return OpinionVector(rng.random(n))
