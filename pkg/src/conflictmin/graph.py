"""Sparse undirected graph with Laplacian and incidence operators.

Storage is compressed adjacency (row offsets + neighbor array), plus a
canonical edge list with u < v per edge. Graphs are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components


class EdgeListError(ValueError):
    """Raised when an edge-list file cannot be turned into a usable graph."""


class Graph:
    """Immutable simple undirected graph on contiguous node ids 0..n-1.

    Attributes
    ----------
    n : number of nodes
    m : number of edges
    indptr, indices : CSR layout of the symmetric adjacency structure
    degrees : per-node degree, degrees[i] == len(neighbors(i))
    edges : (m, 2) int array, each row (u, v) with u < v; row order fixes
        the orientation of the signed incidence operator (head u, tail v)
    """

    __slots__ = ("n", "m", "indptr", "indices", "degrees", "edges", "_adj", "_diag")

    def __init__(self, n, edges):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if n < 1:
            raise ValueError("graph needs at least one node")
        if len(edges) and (edges.min() < 0 or edges.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValueError("self-loops are not allowed")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        if len(np.unique(lo * n + hi)) != len(edges):
            raise ValueError("duplicate edges are not allowed")

        self.n = int(n)
        self.m = int(len(edges))
        self.edges = np.column_stack([lo, hi])
        self.edges.setflags(write=False)

        ones = np.ones(self.m, dtype=np.float64)
        coo = sp.coo_matrix((ones, (lo, hi)), shape=(n, n))
        adj = (coo + coo.T).tocsr()
        adj.sort_indices()
        self._adj = adj
        self.indptr = adj.indptr.astype(np.int64)
        self.indices = adj.indices.astype(np.int64)
        self.degrees = np.diff(self.indptr)
        self._diag = 1.0 + self.degrees.astype(np.float64)
        for arr in (self.indptr, self.indices, self.degrees, self._diag):
            arr.setflags(write=False)

        if self.n > 1:
            ncomp = connected_components(adj, directed=False, return_labels=False)
            if ncomp != 1:
                raise ValueError("graph is not connected")

    def neighbors(self, i):
        """Neighbor ids of node i (sorted, read-only view)."""
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def adjacency_matvec(self, v):
        """A @ v for the 0/1 adjacency structure."""
        return self._adj @ v

    def incidence(self):
        """Signed incidence operator as an (m, n) CSR matrix.

        Row e for edge (u, v) has +1 at u and -1 at v.
        """
        rows = np.repeat(np.arange(self.m), 2)
        cols = self.edges.ravel()
        data = np.tile(np.array([1.0, -1.0]), self.m)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.m, self.n))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass
class NodeIdMap:
    """Bijection between original file ids and contiguous ids 0..n-1."""

    originals: np.ndarray  # originals[contiguous_id] = original_id

    def __post_init__(self):
        self.originals = np.asarray(self.originals, dtype=np.int64)
        self._index = {int(o): i for i, o in enumerate(self.originals)}
        if len(self._index) != len(self.originals):
            raise ValueError("original ids must be distinct")

    def __len__(self):
        return len(self.originals)

    def to_original(self, contiguous_id):
        return int(self.originals[contiguous_id])

    def to_contiguous(self, original_id):
        return self._index[int(original_id)]


def load_edge_list(path):
    """Load a whitespace-separated edge list and keep its largest component.

    Lines starting with '#' or '%' are comments. Each remaining line must be
    exactly two integer ids (a third token means a weighted graph, which is
    rejected). Self-loops and duplicate edges (in either orientation) are
    dropped. Node ids are remapped to 0..n-1 in first-seen order; among
    equally sized components the one containing the earliest-seen node wins.

    Returns (Graph, NodeIdMap).
    """
    path = Path(path)
    first_seen = {}  # original id -> provisional index in first-seen order
    pair_set = set()
    pairs = []  # provisional-index pairs in first-seen order

    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise EdgeListError(
                    f"{path.name}:{lineno}: expected two node ids, got {len(tokens)} tokens"
                )
            try:
                a, b = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise EdgeListError(
                    f"{path.name}:{lineno}: unparsable node ids {tokens[0]!r} {tokens[1]!r}"
                ) from None
            for orig in (a, b):
                if orig not in first_seen:
                    first_seen[orig] = len(first_seen)
            if a == b:
                continue
            u, v = first_seen[a], first_seen[b]
            key = (u, v) if u < v else (v, u)
            if key in pair_set:
                continue
            pair_set.add(key)
            pairs.append(key)

    if not pairs:
        raise EdgeListError(f"{path.name}: no usable edges")

    total = len(first_seen)
    edges = np.asarray(pairs, dtype=np.int64)
    ones = np.ones(len(edges))
    coo = sp.coo_matrix((ones, (edges[:, 0], edges[:, 1])), shape=(total, total))
    _, labels = connected_components(coo + coo.T, directed=False)
    sizes = np.bincount(labels)
    # largest component; ties go to the component seen first
    best = min(
        np.flatnonzero(sizes == sizes.max()),
        key=lambda lab: np.flatnonzero(labels == lab)[0],
    )
    keep = np.flatnonzero(labels == best)  # ascending == first-seen order

    remap = np.full(total, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    kept_edges = edges[(remap[edges[:, 0]] >= 0) & (remap[edges[:, 1]] >= 0)]
    new_edges = remap[kept_edges]

    originals_by_provisional = np.empty(total, dtype=np.int64)
    for orig, prov in first_seen.items():
        originals_by_provisional[prov] = orig

    graph = Graph(len(keep), new_edges)
    id_map = NodeIdMap(originals_by_provisional[keep])
    return graph, id_map


def laplacian_plus_identity_apply(g, v):
    """Apply (I + L) to v, where L = D - A is the graph Laplacian.

    Output w_i = (1 + d_i) v_i - sum of v_j over neighbors j of i.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (g.n,):
        raise ValueError(f"vector has shape {v.shape}, expected ({g.n},)")
    return g._diag * v - g.adjacency_matvec(v)


def incidence_apply(g, v):
    """Apply the signed incidence operator: output_e = v_u - v_v per edge (u, v)."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (g.n,):
        raise ValueError(f"vector has shape {v.shape}, expected ({g.n},)")
    return v[g.edges[:, 0]] - v[g.edges[:, 1]]
