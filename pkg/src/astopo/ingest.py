"""ASPATH parsing, monthly snapshot series, and persistence fill.

Input is ASPATH text, one path per line (the output of standard MRT
decoders), possibly with a pipe-delimited prefix. Every adjacent pair of
plain ASN tokens becomes an edge observation; pairs touching a
brace-delimited AS-set are skipped and counted. Observations are kept per
calendar month; the fill step extends every node and edge across every
month between its first and last appearance, compensating for sampling
dropout in routing table dumps.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataFormatError, EmptyInputError
from .graph import read_pairs

MONTH_RE = re.compile(r"^(\d{4})-(0[1-9]|1[0-2])$")

PRIVATE_ASN_RANGES = ((64512, 65534), (4200000000, 4294967294))


def month_key(stamp: str) -> int:
    m = MONTH_RE.match(stamp)
    if not m:
        raise ConfigError(f"month stamp must be YYYY-MM, got {stamp!r}")
    return int(m.group(1)) * 12 + int(m.group(2)) - 1


def month_stamp(key: int) -> str:
    return f"{key // 12:04d}-{key % 12 + 1:02d}"


def is_private_asn(asn: int) -> bool:
    return any(lo <= asn <= hi for lo, hi in PRIVATE_ASN_RANGES)


@dataclass
class ParseResult:
    """Edge observations plus parse accounting."""

    observations: Counter = field(default_factory=Counter)
    lines: int = 0
    rejected_lines: int = 0
    skipped_pairs: int = 0
    private_dropped: int = 0

    def merge(self, other: "ParseResult") -> "ParseResult":
        self.observations.update(other.observations)
        self.lines += other.lines
        self.rejected_lines += other.rejected_lines
        self.skipped_pairs += other.skipped_pairs
        self.private_dropped += other.private_dropped
        return self

    @property
    def self_loop_observations(self) -> int:
        return sum(c for (a, b), c in self.observations.items() if a == b)


_AS_SET = object()  # marker for brace-delimited tokens


def _parse_token(tok: str):
    if tok.isdigit():
        return int(tok)
    if tok.startswith("{") and tok.endswith("}"):
        members = [t for t in re.split(r"[,\s]+", tok[1:-1]) if t]
        if all(t.isdigit() for t in members):
            return (_AS_SET, tuple(int(t) for t in members))
    return None


def parse_aspath_stream(stream, filter_private: bool = False,
                        expand_as_sets: bool = False) -> ParseResult:
    """Parse one path per line into unordered adjacent-pair observations.

    Duplicate consecutive ASNs (path prepending) yield self-loop
    observations, passed through for downstream accounting. Lines with a
    non-numeric plain token are rejected and counted. An optional prefix
    up to the first '|' is ignored so pipe-delimited dump exports parse.
    """
    res = ParseResult()
    for raw in stream:
        line = raw.strip()
        if not line:
            continue
        if "|" in line:
            line = line.split("|", 1)[1].strip()
            if not line:
                continue
        res.lines += 1
        tokens = []
        bad = False
        for tok in line.split():
            parsed = _parse_token(tok)
            if parsed is None:
                bad = True
                break
            tokens.append(parsed)
        if bad or not tokens:
            res.rejected_lines += 1
            continue
        for left, right in zip(tokens, tokens[1:]):
            left_set = isinstance(left, tuple) and left[0] is _AS_SET
            right_set = isinstance(right, tuple) and right[0] is _AS_SET
            if left_set or right_set:
                if not expand_as_sets:
                    res.skipped_pairs += 1
                    continue
                lefts = left[1] if left_set else (left,)
                rights = right[1] if right_set else (right,)
                for a in lefts:
                    for b in rights:
                        _add_obs(res, a, b, filter_private)
            else:
                _add_obs(res, left, right, filter_private)
    return res


def _add_obs(res: ParseResult, a: int, b: int, filter_private: bool) -> None:
    if filter_private and (is_private_asn(a) or is_private_asn(b)):
        res.private_dropped += 1
        return
    res.observations[(a, b) if a <= b else (b, a)] += 1


def compile_month(streams, month: str) -> ParseResult:
    """Union of per-stream observations for one month stamp."""
    month_key(month)  # validate
    streams = list(streams)
    if not streams:
        raise EmptyInputError(f"no input streams for month {month}")
    merged = ParseResult()
    for stream in streams:
        merged.merge(parse_aspath_stream(stream))
    return merged


class SnapshotSeries:
    """Date-ordered monthly edge observation multisets.

    Months are YYYY-MM stamps, strictly increasing, no duplicates.
    first/last seen spans for nodes and edges derive from the raw
    observations; fill_series materializes them.
    """

    def __init__(self, filled: bool = False):
        self.observations: dict[str, Counter] = {}
        self.filled = filled
        self._node_spans: dict[int, tuple[int, int]] | None = None

    @property
    def months(self) -> list[str]:
        return sorted(self.observations, key=month_key)

    def add_month(self, month: str, observations) -> None:
        month_key(month)
        if month in self.observations:
            raise ConfigError(f"duplicate month {month}")
        counter = Counter()
        if isinstance(observations, Counter):
            for (a, b), c in observations.items():
                counter[(a, b) if a <= b else (b, a)] += c
        else:
            for a, b in observations:
                counter[(int(a), int(b)) if a <= b else (int(b), int(a))] += 1
        self.observations[month] = counter

    def edge_pairs(self, month: str, include_self_loops: bool = True) -> np.ndarray:
        """Distinct observed pairs for the month as an (k, 2) array."""
        items = self.observations[month].keys()
        if not include_self_loops:
            items = [e for e in items if e[0] != e[1]]
        return np.array(sorted(items), dtype=np.int64).reshape(-1, 2)

    def node_spans(self) -> dict[int, tuple[int, int]]:
        """First/last month key each ASN appears (any observation)."""
        if self._node_spans is not None:
            return self._node_spans
        spans: dict[int, tuple[int, int]] = {}
        for month in self.months:
            k = month_key(month)
            for a, b in self.observations[month]:
                for v in (a, b):
                    f, l = spans.get(v, (k, k))
                    spans[v] = (min(f, k), max(l, k))
        return spans

    def edge_spans(self) -> dict[tuple[int, int], tuple[int, int]]:
        """First/last month key of each distinct non-self edge."""
        spans: dict[tuple[int, int], tuple[int, int]] = {}
        for month in self.months:
            k = month_key(month)
            for e in self.observations[month]:
                if e[0] == e[1]:
                    continue
                f, l = spans.get(e, (k, k))
                spans[e] = (min(f, k), max(l, k))
        return spans

    def alive_nodes(self, month: str) -> set[int]:
        """ASNs present in the month (observed, or span-covered if filled)."""
        if self.filled and self._node_spans is not None:
            k = month_key(month)
            return {v for v, (f, l) in self._node_spans.items() if f <= k <= l}
        present: set[int] = set()
        for a, b in self.observations[month]:
            present.add(a)
            present.add(b)
        return present

    def incident_nodes(self, month: str) -> set[int]:
        present: set[int] = set()
        for a, b in self.observations[month]:
            if a != b:
                present.add(a)
                present.add(b)
        return present

    def isolated_nodes(self, month: str) -> set[int]:
        """Nodes present in the month with no retained (non-self) edge."""
        return self.alive_nodes(month) - self.incident_nodes(month)


def fill_series(series: SnapshotSeries) -> SnapshotSeries:
    """Extend every node and edge across all months between its first and
    last appearance, on a contiguous calendar-month grid.

    Filled-in edges get observation count 1. Node presence is filled
    independently of edges; nodes alive with no edge in a month are
    reported by isolated_nodes, not fabricated into the adjacency.
    Idempotent.
    """
    months = series.months
    if not months:
        raise EmptyInputError("series has no months")
    first, last = month_key(months[0]), month_key(months[-1])
    out = SnapshotSeries(filled=True)
    for k in range(first, last + 1):
        stamp = month_stamp(k)
        src = series.observations.get(stamp)
        out.observations[stamp] = Counter(src) if src else Counter()
    for edge, (f, l) in series.edge_spans().items():
        for k in range(f, l + 1):
            obs = out.observations[month_stamp(k)]
            if edge not in obs:
                obs[edge] = 1
    out._node_spans = series.node_spans()
    return out


def series_counts(series: SnapshotSeries) -> list[dict]:
    """Per-month node/edge counts after simple-graph dedup.

    Nodes counts ASNs incident to at least one retained edge; nodes alive
    without edges are reported in the isolated column.
    """
    rows = []
    for month in series.months:
        incident = series.incident_nodes(month)
        edges = sum(1 for e in series.observations[month] if e[0] != e[1])
        rows.append({
            "month": month,
            "nodes": len(incident),
            "edges": edges,
            "isolated": len(series.isolated_nodes(month)),
            "filled": series.filled,
        })
    return rows


def write_snapshot(path, observations: Counter) -> None:
    """Write distinct observed pairs (self-loops included) sorted, a <= b."""
    with open(path, "w", encoding="utf-8") as fh:
        for a, b in sorted(observations):
            fh.write(f"{a} {b}\n")


def load_index(index_path) -> SnapshotSeries:
    """Load a snapshot series from an index document.

    The index is JSON with fields: "filled" (bool) and "months", a mapping
    of month stamps to {"path": edge-list path relative to the index}.
    """
    index_path = Path(index_path)
    try:
        doc = json.loads(index_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataFormatError(f"cannot read snapshot index {index_path}: {exc}") from exc
    if not isinstance(doc, dict) or "months" not in doc:
        raise DataFormatError(f"snapshot index {index_path} lacks a 'months' field")
    series = SnapshotSeries(filled=bool(doc.get("filled", False)))
    for month, entry in doc["months"].items():
        pairs = read_pairs(index_path.parent / entry["path"])
        series.add_month(month, pairs)
    if series.filled:
        series._node_spans = series.node_spans()
    return series


def new_index() -> dict:
    return {"filled": False, "months": {}}


def read_index_doc(index_path) -> dict:
    index_path = Path(index_path)
    if not index_path.exists():
        return new_index()
    try:
        doc = json.loads(index_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataFormatError(f"cannot read snapshot index {index_path}: {exc}") from exc
    if "months" not in doc:
        raise DataFormatError(f"snapshot index {index_path} lacks a 'months' field")
    return doc


def write_index_doc(index_path, doc: dict) -> None:
    ordered = {
        "filled": bool(doc.get("filled", False)),
        "months": {m: doc["months"][m] for m in sorted(doc["months"], key=month_key)},
    }
    Path(index_path).write_text(json.dumps(ordered, indent=2) + "\n", encoding="utf-8")
