"""Numba-jitted hot kernels. Import fails if numba is unavailable."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def betweenness_raw(indptr, indices):
    # Brandes pair-dependency accumulation; each unordered pair counted twice.
    n = indptr.shape[0] - 1
    bc = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        for i in range(n):
            dist[i] = -1
            sigma[i] = 0.0
            delta[i] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        queue[0] = s
        head = 0
        tail = 1
        cnt = 0
        while head < tail:
            v = queue[head]
            head += 1
            order[cnt] = v
            cnt += 1
            dv = dist[v]
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for i in range(cnt - 1, 0, -1):
            w = order[i]
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w]
            for ei in range(indptr[w], indptr[w + 1]):
                v = indices[ei]
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
            bc[w] += delta[w]
    return bc


@njit(cache=True)
def distance_sums(indptr, indices):
    n = indptr.shape[0] - 1
    sums = np.zeros(n, dtype=np.int64)
    reached = np.zeros(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        for i in range(n):
            dist[i] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        total = 0
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v]
            total += dv
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue[tail] = w
                    tail += 1
        sums[s] = total
        reached[s] = tail
    return sums, reached


@njit(cache=True)
def triangle_counts(indptr, indices):
    n = indptr.shape[0] - 1
    tri = np.zeros(n, dtype=np.int64)
    for v in range(n):
        v0, v1 = indptr[v], indptr[v + 1]
        if v1 - v0 < 2:
            continue
        total = 0
        for ei in range(v0, v1):
            u = indices[ei]
            u0, u1 = indptr[u], indptr[u + 1]
            # two-pointer intersection of sorted neighbor lists
            i = v0
            j = u0
            while i < v1 and j < u1:
                x = indices[i]
                y = indices[j]
                if x == y:
                    total += 1
                    i += 1
                    j += 1
                elif x < y:
                    i += 1
                else:
                    j += 1
        tri[v] = total // 2
    return tri


@njit(cache=True)
def core_numbers(indptr, indices):
    # Batagelj-Zaversnik bucket peeling, O(n + m).
    n = indptr.shape[0] - 1
    deg = np.empty(n, dtype=np.int64)
    md = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > md:
            md = deg[v]
    bins = np.zeros(md + 2, dtype=np.int64)
    for v in range(n):
        bins[deg[v] + 1] += 1
    for d in range(1, md + 2):
        bins[d] += bins[d - 1]
    pos = np.empty(n, dtype=np.int64)
    vert = np.empty(n, dtype=np.int64)
    fill = bins[:-1].copy()
    for v in range(n):
        pos[v] = fill[deg[v]]
        vert[pos[v]] = v
        fill[deg[v]] += 1
    core = deg.copy()
    start = bins[:-1].copy()
    for i in range(n):
        v = vert[i]
        for ei in range(indptr[v], indptr[v + 1]):
            u = indices[ei]
            if core[u] > core[v]:
                du = core[u]
                pu = pos[u]
                pw = start[du]
                w = vert[pw]
                if u != w:
                    vert[pu] = w
                    vert[pw] = u
                    pos[u] = pw
                    pos[w] = pu
                start[du] += 1
                core[u] -= 1
    return core


@njit(cache=True)
def cvm_u4_rows(rank_rows, n):
    rows, N = rank_rows.shape
    m = N - n
    out = np.empty(rows, dtype=np.float64)
    for r in range(rows):
        a = np.sort(rank_rows[r, :n].copy())
        b = np.sort(rank_rows[r, n:].copy())
        sa = np.int64(0)
        for i in range(n):
            d = a[i] - 2 * (i + 1)
            sa += d * d
        sb = np.int64(0)
        for j in range(m):
            d = b[j] - 2 * (j + 1)
            sb += d * d
        out[r] = np.float64(n) * np.float64(sa) + np.float64(m) * np.float64(sb)
    return out
