"""Topological measures on AsGraph instances.

Distributional measures (degree, betweenness, page rank, per-node mean
path length, clustering coefficient, core numbers) return one value per
node; scalar summaries (k-max, assortativity, s-metric, max degree) return
single numbers. Path-based measures require a connected graph; extract the
largest component first.
"""

from __future__ import annotations

import heapq

import numpy as np

from . import kernels
from .errors import (ConvergenceError, DisconnectedGraphError,
                     EmptyInputError, UndefinedValueError)
from .graph import AsGraph


def betweenness(g: AsGraph, normalized: bool = True) -> np.ndarray:
    """Exact shortest-path betweenness with endpoints excluded.

    Each unordered pair is counted once. With normalized=True values are
    divided by (n-1)(n-2)/2, the number of pairs a node could lie between,
    making distributions comparable across graphs of different size.
    Graphs with fewer than 3 nodes score all zeros.
    """
    n = g.node_count
    if n < 3:
        return np.zeros(n, dtype=np.float64)
    raw = kernels.betweenness_raw(g.indptr, g.indices) / 2.0
    if normalized:
        raw /= (n - 1) * (n - 2) / 2.0
    return raw


def avg_path_lengths(g: AsGraph) -> tuple[np.ndarray, float]:
    """Mean BFS hop distance from each node to all others, plus graph mean."""
    n = g.node_count
    if n <= 1:
        return np.zeros(n, dtype=np.float64), 0.0
    sums, reached = kernels.distance_sums(g.indptr, g.indices)
    if int(reached.min()) != n:
        raise DisconnectedGraphError(
            "graph is disconnected; extract the largest connected component first")
    per_node = sums / float(n - 1)
    return per_node, float(per_node.mean())


def clustering(g: AsGraph) -> tuple[np.ndarray, float]:
    """Local clustering coefficient per node, plus graph mean.

    Nodes of degree < 2 have coefficient 0 by convention so the vector
    stays aligned with the other per-node measures.
    """
    deg = g.degrees().astype(np.float64)
    tri = kernels.triangle_counts(g.indptr, g.indices).astype(np.float64)
    coef = np.zeros(g.node_count, dtype=np.float64)
    mask = deg >= 2
    coef[mask] = 2.0 * tri[mask] / (deg[mask] * (deg[mask] - 1.0))
    mean = float(coef.mean()) if g.node_count else 0.0
    return coef, mean


def core_numbers(g: AsGraph) -> tuple[np.ndarray, int]:
    """k-core index per node and the maximum core index k-max."""
    core = kernels.core_numbers(g.indptr, g.indices)
    k_max = int(core.max()) if core.size else 0
    return core, k_max


def pagerank(g: AsGraph, damping: float = 0.85, tol: float = 1e-10,
             max_iter: int = 10000) -> np.ndarray:
    """Stationary distribution of the damped random walk on the graph.

    Power iteration until the L1 difference of successive iterates drops
    below tol. Isolated nodes are treated as dangling (their mass is
    spread uniformly). Raises ConvergenceError carrying the last iterate
    if max_iter is exhausted.
    """
    n = g.node_count
    if n == 0:
        raise EmptyInputError("empty graph")
    deg = g.degrees().astype(np.float64)
    dangling = deg == 0.0
    inv_deg = np.zeros(n, dtype=np.float64)
    inv_deg[~dangling] = 1.0 / deg[~dangling]
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees())
    x = np.full(n, 1.0 / n, dtype=np.float64)
    base = (1.0 - damping) / n
    for it in range(max_iter):
        w = x * inv_deg
        y = np.bincount(src, weights=w[g.indices], minlength=n)
        y = base + damping * (y + x[dangling].sum() / n)
        if np.abs(y - x).sum() < tol:
            return y / y.sum()
        x = y
    raise ConvergenceError(f"pagerank did not converge in {max_iter} iterations",
                           iterate=x, iterations=max_iter)


def pagerank_residual(g: AsGraph, r: np.ndarray, damping: float = 0.85) -> float:
    """L1 residual ||F(r) - r|| of the pagerank fixed-point map."""
    n = g.node_count
    deg = g.degrees().astype(np.float64)
    dangling = deg == 0.0
    inv_deg = np.zeros(n, dtype=np.float64)
    inv_deg[~dangling] = 1.0 / deg[~dangling]
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees())
    w = r * inv_deg
    y = np.bincount(src, weights=w[g.indices], minlength=n)
    y = (1.0 - damping) / n + damping * (y + r[dangling].sum() / n)
    return float(np.abs(y - r).sum())


def _endpoint_degree_pairs(g: AsGraph) -> tuple[np.ndarray, np.ndarray]:
    deg = g.degrees().astype(np.float64)
    src = np.repeat(np.arange(g.node_count, dtype=np.int64), g.degrees())
    return deg[src], deg[g.indices]


def assortativity(g: AsGraph) -> float:
    """Pearson correlation of degrees across edge endpoints.

    Every undirected edge contributes both orientations. Regular graphs
    have zero degree variance over endpoints and raise UndefinedValueError
    rather than returning a silent 0.
    """
    if g.edge_count == 0:
        raise EmptyInputError("graph has no edges")
    x, y = _endpoint_degree_pairs(g)
    mx = x.mean()
    var = (x * x).mean() - mx * mx
    if var <= 1e-12 * max(1.0, mx * mx):
        raise UndefinedValueError("degree variance over edge endpoints is zero")
    cov = (x * y).mean() - mx * mx
    return float(cov / var)


def s_metric(g: AsGraph) -> tuple[float, float]:
    """Sum over edges of the endpoint degree product, raw and normalized.

    The normalizer is the greedy stub-pairing bound on the same degree
    sequence (see s_max_estimate), so the normalized value is comparable
    across graphs of different size.
    """
    x, y = _endpoint_degree_pairs(g)
    raw = float((x * y).sum() / 2.0)
    smax = s_max_estimate(g.degrees())
    return raw, (raw / smax if smax > 0 else 0.0)


def s_max_estimate(degree_sequence) -> float:
    """Greedy upper-bound construction for the maximum s over graphs with
    the given degree sequence.

    Repeatedly connects the two unsaturated nodes of highest remaining
    stub count (ties broken by original degree, then index), skipping
    pairs already linked; this is Havel-Hakimi-style pairing, which
    realizes graphical sequences without stranding stubs.
    """
    deg = np.asarray(degree_sequence, dtype=np.int64)
    n = deg.shape[0]
    rem = deg.copy()
    linked: list[set[int]] = [set() for _ in range(n)]
    # max-heap keyed by (remaining stubs, original degree), index as tiebreak
    heap = [(-int(rem[i]), -int(deg[i]), i) for i in range(n) if rem[i] > 0]
    heapq.heapify(heap)
    s = 0.0
    while len(heap) > 1:
        r_u, _, u = heapq.heappop(heap)
        if -r_u != rem[u]:
            if rem[u] > 0:
                heapq.heappush(heap, (-int(rem[u]), -int(deg[u]), u))
            continue
        skipped = []
        while rem[u] > 0 and heap:
            r_v, d_v, v = heapq.heappop(heap)
            if -r_v != rem[v]:
                if rem[v] > 0:
                    heapq.heappush(heap, (-int(rem[v]), -int(deg[v]), v))
                continue
            if v in linked[u]:
                skipped.append((r_v, d_v, v))
                continue
            linked[u].add(v)
            linked[v].add(u)
            rem[u] -= 1
            rem[v] -= 1
            s += float(deg[u]) * float(deg[v])
            if rem[v] > 0:
                heapq.heappush(heap, (-int(rem[v]), -int(deg[v]), v))
        for item in skipped:
            if rem[item[2]] > 0:
                heapq.heappush(heap, item)
        if rem[u] > 0:
            pass  # stubs of u cannot be placed; drop them
    return s


def ccdf(values) -> tuple[np.ndarray, np.ndarray]:
    """Complement cumulative distribution: fraction of entries >= value.

    Returns (distinct sorted values, nonincreasing fractions); the first
    fraction is always 1.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        raise EmptyInputError("ccdf of empty sequence")
    svals = np.sort(vals)
    uniq = np.unique(svals)
    below = np.searchsorted(svals, uniq, side="left")
    frac = 1.0 - below / vals.size
    return uniq, frac
