"""Seeded generative topology models.

All models grow a simple connected graph to exactly n nodes and are
bit-reproducible for a given (model, n, seed, params). Synthetic node
labels are 0..n-1. Preference-driven models sample from a Fenwick tree
so per-step weight updates stay O(log n).

Models:
  ba     preferential attachment; new node adds m edges, seed K_{m+1}
  fkp    cost tradeoff: new point links to argmin of
         alpha * euclidean + hops-to-root, points uniform in unit square
  ufkp   best-of-candidates arrivals scoring -log(deg+1)
  bfkp   ufkp plus an alpha * euclidean term
  mfkp   bfkp minus a per-node uniform attractiveness term
  glp    with prob p add m preferential internal edges, else a new node
         with m preferential edges; preference weight deg - beta
  ig     new node joins 1 host + 2 host-to-peer edges (prob p) or
         2 hosts + 1 host-to-peer edge; linear degree preference
  pfp1   ig step structure, preference deg^(1 + delta*log10(deg))
  pfp2   pfp1 plus a third branch (prob q): 1 host + 1 host-to-peer edge
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, GenerationError
from .graph import AsGraph, build_graph

MODEL_NAMES = ("ba", "fkp", "ufkp", "bfkp", "mfkp", "glp", "ig", "pfp1", "pfp2")

_DEFAULTS: dict[str, dict[str, float]] = {
    "ba": {"m": 2},
    "fkp": {"alpha": 10.0},
    "ufkp": {"m": 1, "candidates": 0},
    "bfkp": {"m": 1, "alpha": 10.0, "candidates": 0},
    "mfkp": {"m": 1, "alpha": 10.0, "candidates": 0},
    "glp": {"m": 1, "p": 0.4695, "beta": 0.6447},
    "ig": {"p": 0.4},
    "pfp1": {"p": 0.4, "delta": 0.048},
    "pfp2": {"p": 0.4, "q": 0.1, "delta": 0.048},
}

_IG_SEED_SIZE = 6  # ring seed; every host keeps non-neighbors available early


@dataclass(frozen=True)
class GeneratorConfig:
    model: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def resolved_params(self) -> dict:
        name = self.model.lower()
        if name not in _DEFAULTS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {MODEL_NAMES}")
        merged = dict(_DEFAULTS[name])
        for key, value in self.params.items():
            if key not in merged:
                raise ConfigError(f"model {name!r} has no parameter {key!r}")
            merged[key] = type(merged[key])(value) if isinstance(merged[key], int) else float(value)
        _validate(name, self.n, merged)
        return merged


@dataclass(frozen=True)
class EdgeBudget:
    value: float
    exact: bool


def _validate(name: str, n: int, p: dict) -> None:
    if n < 1:
        raise ConfigError("n must be positive")
    if "m" in p and p["m"] < 1:
        raise ConfigError("m must be >= 1")
    for key in ("p", "q"):
        if key in p and not (0.0 <= p[key] <= 1.0):
            raise ConfigError(f"{key} must lie in [0, 1]")
    if "alpha" in p and p["alpha"] < 0:
        raise ConfigError("alpha must be nonnegative")
    if "candidates" in p and p["candidates"] < 0:
        raise ConfigError("candidates must be >= 0 (0 means all existing nodes)")
    if name == "ba" and n < p["m"] + 1:
        raise ConfigError(f"ba needs n >= m+1 = {p['m'] + 1}")
    if name in ("fkp", "ufkp", "bfkp", "mfkp") and n < 2:
        raise ConfigError(f"{name} needs n >= 2")
    if name == "glp":
        if p["beta"] >= 1.0:
            raise ConfigError("glp requires beta < 1 (minimum achievable degree is 1)")
        if p["p"] >= 1.0:
            raise ConfigError("glp requires p < 1, otherwise no nodes are ever added")
        if n < max(int(p["m"]) + 1, 2):
            raise ConfigError("glp needs n >= max(m+1, 2)")
    if name in ("ig", "pfp1", "pfp2"):
        if n < _IG_SEED_SIZE:
            raise ConfigError(f"{name} needs n >= {_IG_SEED_SIZE}")
        if name == "pfp2" and p["p"] + p["q"] > 1.0:
            raise ConfigError("pfp2 requires p + q <= 1")


class _WeightTree:
    """Fenwick tree over per-node positive weights for O(log n) sampling."""

    def __init__(self, capacity: int):
        self._cap = capacity
        self._tree = np.zeros(capacity + 1, dtype=np.float64)
        self.weights = np.zeros(capacity, dtype=np.float64)
        self.total = 0.0
        # highest power of two <= capacity, for the descent
        self._top = 1 << (max(capacity, 1).bit_length() - 1)
        if self._top > capacity:
            self._top >>= 1

    def set_weight(self, i: int, w: float) -> None:
        delta = w - self.weights[i]
        if delta == 0.0:
            return
        self.weights[i] = w
        self.total += delta
        j = i + 1
        while j <= self._cap:
            self._tree[j] += delta
            j += j & (-j)

    def sample(self, u: float) -> int:
        """Index whose cumulative weight interval contains u in [0, total)."""
        rem = u
        pos = 0
        mask = self._top
        while mask:
            nxt = pos + mask
            if nxt <= self._cap and self._tree[nxt] <= rem:
                rem -= self._tree[nxt]
                pos = nxt
            mask >>= 1
        # float drift can land one past the last positive weight
        while pos >= self._cap or self.weights[pos] <= 0.0:
            pos -= 1
            if pos < 0:
                raise GenerationError("weight tree is empty")
        return pos


def generate(config: GeneratorConfig) -> AsGraph:
    """Generate the configured topology. Deterministic per config."""
    params = config.resolved_params()
    rng = np.random.default_rng(config.seed)
    name = config.model.lower()
    if name == "ba":
        pairs = _ba(config.n, int(params["m"]), rng)
    elif name == "fkp":
        pairs = _fkp(config.n, params["alpha"], rng)
    elif name in ("ufkp", "bfkp", "mfkp"):
        pairs = _fkp_family(config.n, int(params["m"]),
                            params.get("alpha", 0.0),
                            use_dist=name in ("bfkp", "mfkp"),
                            use_attract=name == "mfkp",
                            candidates=int(params["candidates"]), rng=rng)
    elif name == "glp":
        pairs = _glp(config.n, int(params["m"]), params["p"], params["beta"], rng)
    else:
        q = params.get("q", 0.0)
        delta = params.get("delta", 0.0)
        pairs = _ig_family(config.n, params["p"], q, delta, rng)
    return build_graph(np.asarray(pairs, dtype=np.int64))


def edge_budget(config: GeneratorConfig) -> EdgeBudget:
    """Edge count of the generated graph: exact where the construction is
    deterministic in count, expectation otherwise."""
    params = config.resolved_params()
    name = config.model.lower()
    n = config.n
    if name == "ba":
        m = int(params["m"])
        return EdgeBudget(m * (m + 1) / 2 + m * (n - m - 1), exact=True)
    if name == "fkp":
        return EdgeBudget(n - 1, exact=True)
    if name in ("ufkp", "bfkp", "mfkp"):
        m = int(params["m"])
        total = sum(min(m, j) for j in range(1, n))
        return EdgeBudget(total, exact=True)
    if name == "glp":
        m0 = max(int(params["m"]) + 1, 2)
        exp_edges = (m0 - 1) + params["m"] * (n - m0) / (1.0 - params["p"])
        return EdgeBudget(exp_edges, exact=False)
    steps = n - _IG_SEED_SIZE
    if name in ("ig", "pfp1"):
        return EdgeBudget(_IG_SEED_SIZE + 3 * steps, exact=True)
    q = params["q"]
    return EdgeBudget(_IG_SEED_SIZE + (3.0 - q) * steps, exact=False)


def _ba(n, m, rng):
    pairs = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    rep = []
    for a, b in pairs:
        rep.append(a)
        rep.append(b)
    for v in range(m + 1, n):
        targets: list[int] = []
        while len(targets) < m:
            t = rep[int(rng.integers(0, len(rep)))]
            if t not in targets:
                targets.append(t)
        for t in targets:
            pairs.append((t, v))
            rep.append(t)
        rep.extend([v] * m)
    return pairs


def _fkp(n, alpha, rng):
    pos = rng.random((n, 2))
    hops = np.zeros(n, dtype=np.int64)
    pairs = []
    for j in range(1, n):
        cost = alpha * np.hypot(pos[:j, 0] - pos[j, 0], pos[:j, 1] - pos[j, 1]) + hops[:j]
        i = int(np.argmin(cost))  # first minimum: deterministic tie rule
        pairs.append((i, j))
        hops[j] = hops[i] + 1
    return pairs


def _top_m(objective: np.ndarray, ids: np.ndarray, m: int) -> np.ndarray:
    """Indices of the m smallest objective values; ties resolved by id."""
    k = min(m, ids.shape[0])
    if k == ids.shape[0]:
        pool = np.arange(ids.shape[0])
    else:
        thr = np.partition(objective, k - 1)[k - 1]
        pool = np.flatnonzero(objective <= thr)
    order = np.lexsort((ids[pool], objective[pool]))
    return ids[pool[order[:k]]]


def _fkp_family(n, m, alpha, use_dist, use_attract, candidates, rng):
    pos = rng.random((n, 2)) if use_dist else None
    attract = rng.random(n) if use_attract else None
    deg = np.zeros(n, dtype=np.int64)
    pairs = []
    for j in range(1, n):
        if candidates and candidates < j:
            ids = rng.choice(j, size=candidates, replace=False)
        else:
            ids = np.arange(j)
        obj = -np.log(deg[ids] + 1.0)
        if use_dist:
            obj = obj + alpha * np.hypot(pos[ids, 0] - pos[j, 0], pos[ids, 1] - pos[j, 1])
        if use_attract:
            obj = obj - attract[ids]
        for i in _top_m(obj, ids, m):
            pairs.append((int(i), j))
            deg[i] += 1
            deg[j] += 1
    return pairs


def _glp(n, m, p, beta, rng):
    m0 = max(m + 1, 2)
    adj: list[set[int]] = [set() for _ in range(n)]
    deg = np.zeros(n, dtype=np.int64)
    pairs = []
    tree = _WeightTree(n)

    def link(a, b):
        pairs.append((a, b) if a < b else (b, a))
        adj[a].add(b)
        adj[b].add(a)
        deg[a] += 1
        deg[b] += 1
        tree.set_weight(a, deg[a] - beta)
        tree.set_weight(b, deg[b] - beta)

    # seed path 0-1-...-(m0-1)
    for i in range(m0 - 1):
        link(i, i + 1)
    count = m0

    def pick_pref(exclude: set[int]) -> int:
        for _ in range(200):
            cand = tree.sample(rng.random() * tree.total)
            if cand not in exclude:
                return cand
        ranked = sorted(range(count), key=lambda i: (-tree.weights[i], i))
        for cand in ranked:
            if cand not in exclude:
                return cand
        raise GenerationError("no eligible preferential target")

    def internal_edge() -> bool:
        for _ in range(200):
            u = tree.sample(rng.random() * tree.total)
            v = tree.sample(rng.random() * tree.total)
            if u != v and v not in adj[u]:
                link(u, v)
                return True
        ranked = sorted(range(count), key=lambda i: (-tree.weights[i], i))
        for a in ranked:
            for b in ranked:
                if a != b and b not in adj[a]:
                    link(a, b)
                    return True
        return False

    while count < n:
        if rng.random() < p:
            for _ in range(m):
                if not internal_edge():
                    break  # graph complete: fall through, node step next loop
        else:
            v = count
            chosen: set[int] = set()
            for _ in range(min(m, count)):
                t = pick_pref(chosen)
                chosen.add(t)
            count += 1
            for t in sorted(chosen):
                link(t, v)
    return pairs


def _ig_weight(d: float, delta: float) -> float:
    if d <= 0:
        return 1.0  # epsilon rule: unattached nodes keep a unit weight
    if delta == 0.0:
        return float(d)
    return float(d ** (1.0 + delta * np.log10(d)))


def _ig_family(n, p, q, delta, rng):
    adj: list[set[int]] = [set() for _ in range(n)]
    deg = np.zeros(n, dtype=np.int64)
    pairs = []
    tree = _WeightTree(n)

    def add_edge(a, b):
        pairs.append((a, b) if a < b else (b, a))
        adj[a].add(b)
        adj[b].add(a)
        deg[a] += 1
        deg[b] += 1
        tree.set_weight(a, _ig_weight(deg[a], delta))
        tree.set_weight(b, _ig_weight(deg[b], delta))

    # ring seed
    for i in range(_IG_SEED_SIZE):
        add_edge(i, (i + 1) % _IG_SEED_SIZE)
    count = _IG_SEED_SIZE

    def sample_pref(exclude) -> int | None:
        for _ in range(200):
            cand = tree.sample(rng.random() * tree.total)
            if cand not in exclude:
                return cand
        eligible = [i for i in range(count) if i not in exclude]
        if not eligible:
            return None
        eligible.sort(key=lambda i: (-tree.weights[i], i))
        return eligible[0]

    def peers_for(host, needed) -> list[int] | None:
        exclude = set(adj[host])
        exclude.add(host)
        chosen: list[int] = []
        for _ in range(needed):
            peer = sample_pref(exclude)
            if peer is None:
                return None
            chosen.append(peer)
            exclude.add(peer)
        return chosen

    while count < n:
        r = rng.random()
        if r < p:
            n_hosts, n_peer_edges = 1, 2
        elif r < p + q:
            n_hosts, n_peer_edges = 1, 1
        else:
            n_hosts, n_peer_edges = 2, 1
        new = count
        # the first host needs enough non-neighbors to take the peer edges;
        # saturated hosts are excluded and redrawn rather than retried blindly
        failed: set[int] = set()
        first_host = None
        peers: list[int] = []
        while len(failed) < count:
            h = sample_pref(failed)
            if h is None:
                break
            got = peers_for(h, n_peer_edges)
            if got is None:
                failed.add(h)
                continue
            first_host, peers = h, got
            break
        if first_host is None:
            raise GenerationError("every candidate host is saturated; graph too dense")
        hosts = [first_host]
        for _ in range(n_hosts - 1):
            extra = sample_pref(set(hosts))
            if extra is None:
                raise GenerationError("not enough distinct hosts available")
            hosts.append(extra)
        for h in hosts:
            add_edge(new, h)
        for peer in peers:
            add_edge(first_host, peer)
        count += 1
    return pairs
