"""Growing-graph container.

A GrowingGraph is a simple undirected graph whose vertices carry a birth
time and a feature coordinate.  Vertex ids are assigned in birth order and
stay stable under time restriction and isolated-vertex removal, so a graph
at time t1 is literally the induced subgraph of the graph at t2 >= t1.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DomainError

__all__ = ["GrowingGraph", "prune_isolated", "write_edge_list", "write_vertex_csv"]


def _canonicalize_edges(edges):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    lo = edges.min(axis=1)
    hi = edges.max(axis=1)
    if np.any(lo == hi):
        raise DomainError("self-loops are not allowed")
    edges = np.stack([lo, hi], axis=1)
    edges = np.unique(edges, axis=0)  # sorts lexicographically and dedupes
    return edges


@dataclass(frozen=True)
class GrowingGraph:
    """Immutable snapshot of a growing graph.

    ids: sorted int64 vertex ids (birth order).
    birth_times, features: per-vertex, aligned with ids.
    edges: (m, 2) int64 array of id pairs with u < v, lexicographically sorted.
    includes_isolated: True for the raw snapshot, False after pruning.
    """

    ids: np.ndarray
    birth_times: np.ndarray
    features: np.ndarray
    edges: np.ndarray
    includes_isolated: bool = True

    def __post_init__(self):
        ids = np.asarray(self.ids, dtype=np.int64)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "birth_times", np.asarray(self.birth_times, dtype=np.float64))
        object.__setattr__(self, "features", np.asarray(self.features, dtype=np.float64))
        object.__setattr__(self, "edges", _canonicalize_edges(self.edges))
        if ids.size and np.any(np.diff(ids) <= 0):
            raise DomainError("vertex ids must be strictly increasing")
        if self.edges.size:
            present = np.isin(self.edges, ids)
            if not present.all():
                raise DomainError("edge endpoint not among vertex ids")

    @classmethod
    def from_edges(cls, n, edges, includes_isolated=True):
        """Plain graph on vertices 0..n-1; birth time = id, feature = id/n."""
        ids = np.arange(n, dtype=np.int64)
        return cls(
            ids=ids,
            birth_times=ids.astype(np.float64),
            features=ids.astype(np.float64) / max(n, 1),
            edges=np.asarray(edges, dtype=np.int64).reshape(-1, 2),
            includes_isolated=includes_isolated,
        )

    @property
    def num_vertices(self):
        return int(self.ids.size)

    @property
    def num_edges(self):
        return int(self.edges.shape[0])

    def positions_of(self, ids):
        """Positional index of the given ids in this graph's vertex order."""
        pos = np.searchsorted(self.ids, ids)
        return pos

    def degrees(self):
        """Degree per vertex, aligned with ids."""
        deg = np.zeros(self.num_vertices, dtype=np.int64)
        if self.num_edges:
            pos = self.positions_of(self.edges)
            np.add.at(deg, pos[:, 0], 1)
            np.add.at(deg, pos[:, 1], 1)
        return deg

    def adjacency(self):
        """Symmetric 0/1 adjacency as CSR, rows/cols in vertex order."""
        n = self.num_vertices
        if self.num_edges == 0:
            return sp.csr_matrix((n, n), dtype=np.float64)
        pos = self.positions_of(self.edges)
        data = np.ones(pos.shape[0], dtype=np.float64)
        a = sp.coo_matrix((data, (pos[:, 0], pos[:, 1])), shape=(n, n))
        a = a + a.T
        return a.tocsr()

    def adjacency_dense(self, dtype=np.float64):
        n = self.num_vertices
        a = np.zeros((n, n), dtype=dtype)
        if self.num_edges:
            pos = self.positions_of(self.edges)
            a[pos[:, 0], pos[:, 1]] = 1
            a[pos[:, 1], pos[:, 0]] = 1
        return a

    def restrict_to_time(self, t):
        """Induced subgraph on vertices with birth_time <= t."""
        keep = self.birth_times <= t
        kept_ids = self.ids[keep]
        if self.num_edges:
            mask = np.isin(self.edges[:, 0], kept_ids) & np.isin(self.edges[:, 1], kept_ids)
            edges = self.edges[mask]
        else:
            edges = self.edges
        return GrowingGraph(
            ids=kept_ids,
            birth_times=self.birth_times[keep],
            features=self.features[keep],
            edges=edges,
            includes_isolated=self.includes_isolated,
        )

    def subgraph(self, keep_ids):
        """Induced subgraph on the given ids (need not be contiguous)."""
        keep_ids = np.unique(np.asarray(keep_ids, dtype=np.int64))
        mask = np.isin(self.ids, keep_ids)
        kept_ids = self.ids[mask]
        if self.num_edges:
            emask = np.isin(self.edges[:, 0], kept_ids) & np.isin(self.edges[:, 1], kept_ids)
            edges = self.edges[emask]
        else:
            edges = self.edges
        return GrowingGraph(
            ids=kept_ids,
            birth_times=self.birth_times[mask],
            features=self.features[mask],
            edges=edges,
            includes_isolated=self.includes_isolated,
        )


def prune_isolated(graph):
    """Remove all degree-0 vertices; edge set unchanged. Idempotent."""
    deg = graph.degrees()
    keep = deg > 0
    return GrowingGraph(
        ids=graph.ids[keep],
        birth_times=graph.birth_times[keep],
        features=graph.features[keep],
        edges=graph.edges,
        includes_isolated=False,
    )


def write_edge_list(graph, path, header=None):
    """Write one 'u v' line per edge (u < v, ascending), '#' header lines first."""
    with open(path, "w") as fh:
        for key, value in (header or {}).items():
            fh.write(f"# {key}: {value}\n")
        for u, v in graph.edges:
            fh.write(f"{u} {v}\n")


def write_vertex_csv(graph, path):
    """Vertex metadata sidecar: id, birth_time, feature."""
    with open(path, "w") as fh:
        fh.write("id,birth_time,feature\n")
        for i in range(graph.num_vertices):
            fh.write(f"{graph.ids[i]},{graph.birth_times[i]!r},{graph.features[i]!r}\n")
