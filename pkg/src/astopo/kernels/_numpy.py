"""Pure-numpy fallback kernels.

Same contracts as the numba versions in _numba.py. BFS-based kernels are
level-synchronous and vectorized per frontier; they are adequate for tests,
benchmarks, and mid-sized graphs, but the numba path is the production one
for full AS-scale runs.
"""

from __future__ import annotations

import numpy as np


def _frontier_edges(indptr, indices, frontier):
    """Return (src, dst) arrays for every directed edge leaving `frontier`."""
    counts = indptr[frontier + 1] - indptr[frontier]
    total = int(counts.sum())
    if total == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    flat = np.repeat(indptr[frontier], counts) + (np.arange(total) - offsets)
    return np.repeat(frontier, counts), indices[flat]


def betweenness_raw(indptr, indices):
    """Pair-dependency betweenness accumulation over all sources.

    Counts each unordered pair twice; callers halve and normalize.
    """
    n = indptr.shape[0] - 1
    bc = np.zeros(n, dtype=np.float64)
    for s in range(n):
        dist = np.full(n, -1, dtype=np.int64)
        sigma = np.zeros(n, dtype=np.float64)
        dist[s] = 0
        sigma[s] = 1.0
        frontier = np.array([s], dtype=np.int64)
        level_edges = []
        level = 0
        while frontier.size:
            src, dst = _frontier_edges(indptr, indices, frontier)
            fresh = dist[dst] < 0
            if fresh.any():
                dist[np.unique(dst[fresh])] = level + 1
            nxt = dist[dst] == level + 1
            src_n, dst_n = src[nxt], dst[nxt]
            np.add.at(sigma, dst_n, sigma[src_n])
            level_edges.append((src_n, dst_n))
            frontier = np.unique(dst_n)
            level += 1
        delta = np.zeros(n, dtype=np.float64)
        for src_n, dst_n in reversed(level_edges):
            if src_n.size == 0:
                continue
            np.add.at(delta, src_n, sigma[src_n] / sigma[dst_n] * (1.0 + delta[dst_n]))
        delta[s] = 0.0
        bc += delta
    return bc


def distance_sums(indptr, indices):
    """Per-node sum of BFS hop distances and per-node reached-node count."""
    n = indptr.shape[0] - 1
    sums = np.zeros(n, dtype=np.int64)
    reached = np.zeros(n, dtype=np.int64)
    for s in range(n):
        dist = np.full(n, -1, dtype=np.int64)
        dist[s] = 0
        frontier = np.array([s], dtype=np.int64)
        level = 0
        total = 0
        cnt = 1
        while frontier.size:
            _, dst = _frontier_edges(indptr, indices, frontier)
            dst = dst[dist[dst] < 0]
            if dst.size == 0:
                break
            frontier = np.unique(dst)
            level += 1
            dist[frontier] = level
            total += level * frontier.size
            cnt += frontier.size
        sums[s] = total
        reached[s] = cnt
    return sums, reached


def triangle_counts(indptr, indices):
    """Number of edges among each node's neighbors (triangles through it)."""
    n = indptr.shape[0] - 1
    tri = np.zeros(n, dtype=np.int64)
    for v in range(n):
        nb = indices[indptr[v]:indptr[v + 1]]
        if nb.shape[0] < 2:
            continue
        total = 0
        for u in nb:
            other = indices[indptr[u]:indptr[u + 1]]
            pos = np.searchsorted(nb, other)
            pos[pos == nb.shape[0]] = 0
            total += int((nb[pos] == other).sum())
        tri[v] = total // 2
    return tri


def core_numbers(indptr, indices):
    """Peeling decomposition: repeatedly strip nodes of degree <= k."""
    n = indptr.shape[0] - 1
    deg = (indptr[1:] - indptr[:-1]).astype(np.int64)
    core = np.zeros(n, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    k = 0
    while alive.any():
        while True:
            rm = np.flatnonzero(alive & (deg <= k))
            if rm.size == 0:
                break
            core[rm] = k
            alive[rm] = False
            _, dst = _frontier_edges(indptr, indices, rm)
            dst = dst[alive[dst]]
            if dst.size:
                np.subtract.at(deg, dst, 1)
        k += 1
    return core


def cvm_u4_rows(rank_rows, n):
    """4*U statistic per row of shuffled doubled pooled midranks.

    rank_rows is (rows, N) int64; the first n columns of each row are one
    sample, the rest the other. Integer sums keep the result exact and
    identical to the numba path.
    """
    rows, N = rank_rows.shape
    m = N - n
    a = np.sort(rank_rows[:, :n], axis=1)
    b = np.sort(rank_rows[:, n:], axis=1)
    sa = np.sum((a - 2 * np.arange(1, n + 1, dtype=np.int64)) ** 2, axis=1, dtype=np.int64)
    sb = np.sum((b - 2 * np.arange(1, m + 1, dtype=np.int64)) ** 2, axis=1, dtype=np.int64)
    return np.float64(n) * sa.astype(np.float64) + np.float64(m) * sb.astype(np.float64)
