"""Compact immutable graph over AS numbers.

The graph is simple (no self-loops, no duplicate edges) and undirected.
Nodes carry their original AS numbers; internally they are mapped to dense
indices 0..n-1 and the adjacency is stored in CSR form with each neighbor
list sorted, so measure kernels can run on contiguous arrays and edge
queries are binary searches.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError, EmptyInputError

ASN_MAX = 2**32 - 1


@dataclass(frozen=True, eq=False)
class AsGraph:
    """Simple undirected graph in compressed adjacency form.

    node_ids[i] is the AS number of internal node i (unique, any order).
    indices[indptr[i]:indptr[i+1]] are the sorted internal neighbor
    indices of node i. self_loop_count tallies self-loop observations
    that were dropped during construction; they are never stored in the
    adjacency.
    """

    node_ids: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    edge_count: int
    self_loop_count: int = 0

    def __post_init__(self):
        for arr in (self.node_ids, self.indptr, self.indices):
            arr.setflags(write=False)

    @property
    def node_count(self) -> int:
        return int(self.node_ids.shape[0])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        pos = np.searchsorted(nb, j)
        return pos < nb.shape[0] and nb[pos] == j

    def edge_index_pairs(self) -> np.ndarray:
        """All edges as an (m, 2) array of internal index pairs with u < v."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees())
        mask = src < self.indices
        return np.column_stack((src[mask], self.indices[mask]))

    def edge_asn_pairs(self) -> np.ndarray:
        """All edges as an (m, 2) array of ASN pairs with a < b, sorted."""
        pairs = np.sort(self.node_ids[self.edge_index_pairs()], axis=1)
        order = np.lexsort((pairs[:, 1], pairs[:, 0]))
        return pairs[order]

    def index_of(self, asns) -> np.ndarray:
        """Map ASNs to internal indices (ASNs must exist in the graph)."""
        order = np.argsort(self.node_ids)
        pos = np.searchsorted(self.node_ids, asns, sorter=order)
        idx = order[pos]
        if not np.array_equal(self.node_ids[idx], np.asarray(asns)):
            raise KeyError("ASN not present in graph")
        return idx

    def induced_subgraph(self, keep: np.ndarray) -> "AsGraph":
        """Subgraph induced on the internal indices in `keep` (bool mask or
        index array). Original ASNs are preserved."""
        keep = np.asarray(keep)
        if keep.dtype == bool:
            keep = np.flatnonzero(keep)
        keep = np.unique(keep)
        remap = np.full(self.node_count, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.shape[0], dtype=np.int64)
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees())
        ok = (remap[src] >= 0) & (remap[self.indices] >= 0)
        new_src = remap[src[ok]]
        new_dst = remap[self.indices[ok]]
        return _from_directed(self.node_ids[keep], new_src, new_dst,
                              self_loops=self.self_loop_count)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AsGraph):
            return NotImplemented
        return (np.array_equal(self.node_ids, other.node_ids)
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __repr__(self) -> str:
        return f"AsGraph(n={self.node_count}, m={self.edge_count})"


def _from_directed(node_ids, src, dst, self_loops=0) -> AsGraph:
    """Assemble an AsGraph from symmetric directed index arrays (no dedup)."""
    n = node_ids.shape[0]
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return AsGraph(node_ids=np.ascontiguousarray(node_ids, dtype=np.int64),
                   indptr=indptr,
                   indices=np.ascontiguousarray(dst, dtype=np.int64),
                   edge_count=int(src.shape[0] // 2),
                   self_loop_count=int(self_loops))


def build_graph(observations, keep_self_loops: bool = False) -> AsGraph:
    """Build a deduplicated simple graph from unordered ASN pair observations.

    Self-loop observations (a == b) are never stored in the adjacency; they
    are tallied in self_loop_count. With keep_self_loops=False (default) the
    ASNs of self-loop-only pairs are dropped entirely; with True such ASNs
    are kept as isolated nodes so they still appear in counts.
    """
    pairs = np.asarray(list(observations) if not isinstance(observations, np.ndarray)
                       else observations, dtype=np.int64)
    if pairs.size == 0:
        raise EmptyInputError("no edge observations")
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise DataFormatError("observations must be (a, b) pairs")
    if pairs.min() < 0 or pairs.max() > ASN_MAX:
        raise DataFormatError("ASN out of 32-bit unsigned range")

    self_mask = pairs[:, 0] == pairs[:, 1]
    n_self = int(self_mask.sum())
    retained = np.sort(pairs[~self_mask], axis=1)
    if retained.shape[0] == 0 and not keep_self_loops:
        raise EmptyInputError("no edges retained after dropping self-loops")

    edges = np.unique(retained, axis=0) if retained.shape[0] else retained
    ids = edges.ravel()
    if keep_self_loops and n_self:
        ids = np.concatenate((ids, pairs[self_mask, 0]))
    node_ids = np.unique(ids)
    if node_ids.size == 0:
        raise EmptyInputError("no nodes retained")

    a = np.searchsorted(node_ids, edges[:, 0])
    b = np.searchsorted(node_ids, edges[:, 1])
    src = np.concatenate((a, b))
    dst = np.concatenate((b, a))
    return _from_directed(node_ids, src, dst, self_loops=n_self)


def degrees(g: AsGraph) -> np.ndarray:
    """Degree of every node in internal index order."""
    return g.degrees()


def connected_component_labels(g: AsGraph) -> np.ndarray:
    """Label each node with a component id (0-based, discovery order)."""
    n = g.node_count
    labels = np.full(n, -1, dtype=np.int64)
    comp = 0
    for start in range(n):
        if labels[start] >= 0:
            continue
        labels[start] = comp
        frontier = np.array([start], dtype=np.int64)
        while frontier.size:
            nbrs = _gather_neighbors(g.indptr, g.indices, frontier)
            nbrs = nbrs[labels[nbrs] < 0]
            if nbrs.size == 0:
                break
            frontier = np.unique(nbrs)
            labels[frontier] = comp
        comp += 1
    return labels


def _gather_neighbors(indptr, indices, frontier):
    """Concatenated neighbor lists of all frontier nodes, vectorized."""
    counts = indptr[frontier + 1] - indptr[frontier]
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    flat = np.repeat(indptr[frontier], counts) + (np.arange(total) - offsets)
    return indices[flat]


def largest_connected_component(g: AsGraph) -> AsGraph:
    """Induced subgraph on the largest component.

    Size ties are broken in favor of the component containing the smallest
    ASN, for reproducibility.
    """
    if g.node_count == 0:
        raise EmptyInputError("empty graph")
    labels = connected_component_labels(g)
    sizes = np.bincount(labels)
    best = None
    for c in np.flatnonzero(sizes == sizes.max()):
        min_asn = g.node_ids[labels == c].min()
        if best is None or min_asn < best[1]:
            best = (c, min_asn)
    keep = labels == best[0]
    if keep.all():
        return g
    return g.induced_subgraph(keep)


def read_pairs(path_or_stream) -> np.ndarray:
    """Read whitespace-separated ASN pairs from edge-list text.

    Lines starting with '#' and blank lines are ignored. Returns an (k, 2)
    int64 array, possibly empty.
    """
    if isinstance(path_or_stream, (str, bytes)) or hasattr(path_or_stream, "__fspath__"):
        with open(path_or_stream, "r", encoding="utf-8") as fh:
            return read_pairs(fh)
    out = []
    for lineno, line in enumerate(path_or_stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise DataFormatError(f"line {lineno}: expected two decimal ASNs, got {line!r}")
        out.append((int(parts[0]), int(parts[1])))
    return np.asarray(out, dtype=np.int64).reshape(-1, 2)


def read_edge_list(path_or_stream, keep_self_loops: bool = False) -> AsGraph:
    """Read an edge-list file and build the graph."""
    return build_graph(read_pairs(path_or_stream), keep_self_loops=keep_self_loops)


def write_edge_list(g: AsGraph, path_or_stream) -> None:
    """Write the graph's edges, one per line, a < b, sorted."""
    if isinstance(path_or_stream, (str, bytes)) or hasattr(path_or_stream, "__fspath__"):
        with open(path_or_stream, "w", encoding="utf-8") as fh:
            write_edge_list(g, fh)
            return
    write_pairs(g.edge_asn_pairs(), path_or_stream)


def write_pairs(pairs, path_or_stream) -> None:
    """Write (a, b) pairs one per line; callers are responsible for order."""
    if isinstance(path_or_stream, (str, bytes)) or hasattr(path_or_stream, "__fspath__"):
        with open(path_or_stream, "w", encoding="utf-8") as fh:
            write_pairs(pairs, fh)
            return
    buf = io.StringIO()
    for a, b in pairs:
        buf.write(f"{a} {b}\n")
    path_or_stream.write(buf.getvalue())
