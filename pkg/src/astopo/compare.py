"""Evaluation artifacts: full measure reports, year-over-year change
tables, model-versus-reference comparison matrices, evolution series,
top-k degree tracking, and decline statistics."""

from __future__ import annotations

import csv
import math
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import measures, stats
from .errors import ConfigError, EmptyInputError, UndefinedValueError
from .generators import GeneratorConfig, generate
from .graph import AsGraph, build_graph, largest_connected_component
from .ingest import SnapshotSeries, fill_series, month_key, month_stamp

DISTRIBUTIONAL_COLUMNS = ("Degree", "Betweenness", "Page Rank", "Path Length",
                          "Clustering", "K-Cores")
SCALAR_COLUMNS = ("K-max", "Assortativity", "S-Metric", "Max Degree")
ALL_COLUMNS = DISTRIBUTIONAL_COLUMNS + SCALAR_COLUMNS


@dataclass
class MeasureReport:
    """Per-node measure vectors plus scalar summaries for one graph.

    Path-based vectors (betweenness, path_length) are computed on the
    largest connected component and aligned to lcc_asns; the others cover
    every node in asns order. lcc_coverage is the fraction of nodes in
    the component.
    """

    asns: np.ndarray
    degree: np.ndarray
    pagerank: np.ndarray
    clustering: np.ndarray
    core_number: np.ndarray
    lcc_asns: np.ndarray
    betweenness: np.ndarray
    path_length: np.ndarray
    k_max: int
    assortativity: float  # nan when undefined (regular graph)
    s_metric_raw: float
    s_metric_norm: float
    max_degree: int
    node_count: int
    edge_count: int
    mean_path_length: float
    mean_clustering: float
    lcc_coverage: float
    self_loop_count: int = 0
    notes: dict = field(default_factory=dict)

    def vector(self, column: str) -> np.ndarray:
        return {
            "Degree": self.degree,
            "Betweenness": self.betweenness,
            "Page Rank": self.pagerank,
            "Path Length": self.path_length,
            "Clustering": self.clustering,
            "K-Cores": self.core_number,
        }[column]

    def scalar(self, column: str) -> float:
        return {
            "K-max": float(self.k_max),
            "Assortativity": self.assortativity,
            "S-Metric": self.s_metric_norm,
            "Max Degree": float(self.max_degree),
        }[column]

    def summary(self) -> dict:
        return {
            "nodes": self.node_count,
            "edges": self.edge_count,
            "max_degree": self.max_degree,
            "k_max": self.k_max,
            "assortativity": None if math.isnan(self.assortativity) else self.assortativity,
            "s_metric_raw": self.s_metric_raw,
            "s_metric_norm": self.s_metric_norm,
            "mean_path_length": self.mean_path_length,
            "mean_clustering": self.mean_clustering,
            "lcc_coverage": self.lcc_coverage,
            "self_loops": self.self_loop_count,
        }


def full_report(g: AsGraph) -> MeasureReport:
    """Run every measure; path-based ones on the largest component."""
    deg = g.degrees()
    clus, mean_clus = measures.clustering(g)
    core, k_max = measures.core_numbers(g)
    pr = measures.pagerank(g)
    lcc = largest_connected_component(g)
    btw = measures.betweenness(lcc)
    plen, mean_plen = measures.avg_path_lengths(lcc)
    notes = {
        "betweenness_normalization": "(n-1)(n-2)/2, endpoints excluded",
        "s_metric_normalization": "greedy stub-pairing bound",
        "pagerank_damping": 0.85,
    }
    try:
        assort = measures.assortativity(g)
    except (UndefinedValueError, EmptyInputError):
        assort = float("nan")
        notes["assortativity"] = "undefined (zero endpoint degree variance)"
    s_raw, s_norm = measures.s_metric(g)
    return MeasureReport(
        asns=g.node_ids.copy(),
        degree=deg.astype(np.float64),
        pagerank=pr,
        clustering=clus,
        core_number=core.astype(np.float64),
        lcc_asns=lcc.node_ids.copy(),
        betweenness=btw,
        path_length=plen,
        k_max=k_max,
        assortativity=assort,
        s_metric_raw=s_raw,
        s_metric_norm=s_norm,
        max_degree=int(deg.max()) if deg.size else 0,
        node_count=g.node_count,
        edge_count=g.edge_count,
        mean_path_length=mean_plen,
        mean_clustering=mean_clus,
        lcc_coverage=lcc.node_count / g.node_count if g.node_count else 0.0,
        self_loop_count=g.self_loop_count,
    )


def _column_seed(base_seed: int, row: str, column: str) -> int:
    # stable per-cell child seed; independent of row order and job count
    ss = np.random.SeedSequence([base_seed,
                                 int.from_bytes(row.encode(), "little") % (2**32),
                                 int.from_bytes(column.encode(), "little") % (2**32)])
    return int(ss.generate_state(1)[0])


def _distribution_test(ref_vec, other_vec, column, subsample_size, permutations,
                       base_seed, row_name):
    seed = _column_seed(base_seed, row_name, column)
    size = min(len(ref_vec), len(other_vec), subsample_size)
    a = stats.subsample(ref_vec, size, seed) if len(ref_vec) > size else np.asarray(ref_vec, dtype=np.float64)
    b = stats.subsample(other_vec, size, seed) if len(other_vec) > size else np.asarray(other_vec, dtype=np.float64)
    return stats.cvm_p_value(a, b, method="permutation",
                             permutations=permutations, seed=seed)


@dataclass(frozen=True)
class Cell:
    kind: str  # "stars_scaled" or "relative_error"
    value: float
    band: str | None = None
    p_value: float | None = None
    statistic: float | None = None


@dataclass
class ComparisonMatrix:
    rows: list[str]
    columns: tuple[str, ...]
    cells: dict[tuple[str, str], Cell]
    errors: dict[str, str]
    metadata: dict

    def to_rows(self) -> list[dict]:
        out = []
        for row in self.rows:
            if row in self.errors:
                out.append({"model": row, "error": self.errors[row]})
                continue
            for col in self.columns:
                cell = self.cells[(row, col)]
                out.append({
                    "model": row, "measure": col, "kind": cell.kind,
                    "value": cell.value, "band": cell.band,
                    "p_value": cell.p_value, "statistic": cell.statistic,
                })
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=["model", "measure", "kind", "value",
                                               "band", "p_value", "statistic", "error"])
            w.writeheader()
            for row in self.to_rows():
                w.writerow({k: row.get(k, "") for k in w.fieldnames})


def relative_error(model_value: float, ref_value: float) -> float:
    if math.isnan(model_value) or math.isnan(ref_value):
        return float("nan")
    if ref_value == 0.0:
        return 0.0 if model_value == 0.0 else float("inf")
    return abs(model_value - ref_value) / abs(ref_value)


def compare_models(reference: AsGraph, entries,
                   subsample_size: int = stats.DEFAULT_SUBSAMPLE,
                   permutations: int = stats.DEFAULT_PERMUTATIONS,
                   seed: int = 0, jobs: int = 1,
                   reference_report: MeasureReport | None = None) -> ComparisonMatrix:
    """Compare generated models against a reference graph.

    entries is a sequence of GeneratorConfig or (name, AsGraph) pairs (the
    latter lets callers insert the reference itself or pre-built graphs).
    Distributional columns get a CvM band scaled to stars/4; scalar
    columns get relative errors. Generation failures are recorded per row
    without aborting the rest.
    """
    ref_report = reference_report or full_report(reference)

    named = []
    for entry in entries:
        if isinstance(entry, GeneratorConfig):
            named.append((f"{entry.model.lower()}[seed={entry.seed}]", entry))
        else:
            named.append((entry[0], entry[1]))

    def run_row(item):
        name, payload = item
        try:
            if isinstance(payload, GeneratorConfig):
                if payload.n != reference.node_count:
                    print(f"warning: model {name} has n={payload.n}, reference has "
                          f"n={reference.node_count}", file=sys.stderr)
                g = generate(payload)
            else:
                g = payload
            report = full_report(g)
            cells = {}
            for col in DISTRIBUTIONAL_COLUMNS:
                res = _distribution_test(ref_report.vector(col), report.vector(col),
                                         col, subsample_size, permutations, seed, name)
                cells[col] = Cell(kind="stars_scaled", value=res.stars / 4.0,
                                  band=res.band, p_value=res.p_value,
                                  statistic=res.statistic)
            for col in SCALAR_COLUMNS:
                cells[col] = Cell(kind="relative_error",
                                  value=relative_error(report.scalar(col),
                                                       ref_report.scalar(col)))
            return name, cells, None
        except Exception as exc:  # per-row isolation, deliberate
            return name, None, f"{type(exc).__name__}: {exc}"

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_row, named))
    else:
        results = [run_row(item) for item in named]

    matrix = ComparisonMatrix(
        rows=[name for name, _ in named], columns=ALL_COLUMNS,
        cells={}, errors={},
        metadata={
            "reference_nodes": reference.node_count,
            "reference_edges": reference.edge_count,
            "subsample_size": subsample_size,
            "permutations": permutations,
            "seed": seed,
        })
    for name, cells, err in results:
        if err is not None:
            matrix.errors[name] = err
        else:
            for col, cell in cells.items():
                matrix.cells[(name, col)] = cell
    return matrix


def _month_graph(series: SnapshotSeries, month: str) -> AsGraph:
    return build_graph(series.edge_pairs(month))


def annual_change_table(series: SnapshotSeries, month_of_year: int = 6,
                        subsample_size: int = stats.DEFAULT_SUBSAMPLE,
                        permutations: int = stats.DEFAULT_PERMUTATIONS,
                        seed: int = 0) -> list[dict]:
    """Year-over-year distributional change bands plus scalar tracking.

    Picks the given month of each year present in the series; each year
    after the first is tested against the prior year with the CvM
    criterion for the six distributional measures.
    """
    wanted = {}
    for month in series.months:
        k = month_key(month)
        if k % 12 + 1 == month_of_year:
            wanted[k // 12] = month
    years = sorted(wanted)
    if len(years) < 2:
        raise ConfigError(f"need snapshots for month {month_of_year:02d} in >= 2 years")
    rows = []
    prev_report = None
    for year in years:
        month = wanted[year]
        report = full_report(_month_graph(series, month))
        row = {
            "year": year, "month": month,
            "nodes": report.node_count, "edges": report.edge_count,
            "k_max": report.k_max,
            "assortativity": report.assortativity,
            "s_metric": report.s_metric_norm,
        }
        for col in DISTRIBUTIONAL_COLUMNS:
            if prev_report is None:
                row[col] = ""
            else:
                res = _distribution_test(prev_report.vector(col), report.vector(col),
                                         col, subsample_size, permutations, seed,
                                         f"{year}")
                row[col] = res.band
        rows.append(row)
        prev_report = report
    return rows


def evolution_series(series: SnapshotSeries) -> list[dict]:
    """Monthly scalar series: mean path length (largest component), mean
    clustering, k-max, node and edge counts."""
    rows = []
    for month in series.months:
        pairs = series.edge_pairs(month, include_self_loops=False)
        if pairs.shape[0] == 0:
            rows.append({"month": month, "mean_path_length": float("nan"),
                         "mean_clustering": float("nan"), "k_max": 0,
                         "nodes": 0, "edges": 0})
            continue
        g = build_graph(pairs)
        lcc = largest_connected_component(g)
        _, mean_plen = measures.avg_path_lengths(lcc)
        _, mean_clus = measures.clustering(g)
        _, k_max = measures.core_numbers(g)
        rows.append({"month": month, "mean_path_length": mean_plen,
                     "mean_clustering": mean_clus, "k_max": k_max,
                     "nodes": g.node_count, "edges": g.edge_count})
    return rows


def topk_degree_series(series: SnapshotSeries, k: int = 3) -> list[dict]:
    """Per month, the k highest-degree ASNs; ties broken by smaller ASN."""
    if k < 1:
        raise ConfigError("k must be >= 1")
    rows = []
    for month in series.months:
        degmap = _month_degrees(series, month)
        ranked = sorted(degmap.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
        for rank, (asn, degree) in enumerate(ranked, start=1):
            rows.append({"month": month, "rank": rank, "asn": asn, "degree": degree})
    return rows


def _month_degrees(series: SnapshotSeries, month: str) -> dict[int, int]:
    counts: Counter = Counter()
    for a, b in series.observations[month]:
        if a != b:
            counts[a] += 1
            counts[b] += 1
    return dict(counts)


def decline_statistics(series: SnapshotSeries) -> tuple[float, float]:
    """Fractions of ASes with at least one month-over-month degree decline.

    Returns (fraction over all ASes, fraction over ASes alive >= 60
    months). Computed on the filled series; isolated-but-alive months
    count as degree 0.
    """
    if len(series.months) < 2:
        raise ConfigError("decline statistics need >= 2 months")
    filled = series if series.filled else fill_series(series)
    months = filled.months
    keys = [month_key(m) for m in months]
    spans = filled.node_spans()
    degs = {m: _month_degrees(filled, m) for m in months}
    declined: set[int] = set()
    for idx in range(len(months) - 1):
        k0, k1 = keys[idx], keys[idx + 1]
        if k1 != k0 + 1:
            continue
        d0, d1 = degs[months[idx]], degs[months[idx + 1]]
        for asn, span in spans.items():
            if asn in declined:
                continue
            if span[0] <= k0 and k1 <= span[1]:
                if d1.get(asn, 0) < d0.get(asn, 0):
                    declined.add(asn)
    total = len(spans)
    long_lived = {asn for asn, (f, l) in spans.items() if l - f + 1 >= 60}
    frac_all = len(declined) / total if total else 0.0
    frac_long = (len(declined & long_lived) / len(long_lived)) if long_lived else 0.0
    return frac_all, frac_long


def write_rows_csv(rows: list[dict], path, fieldnames=None) -> None:
    if not rows:
        fieldnames = fieldnames or []
    fieldnames = fieldnames or list(rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=fieldnames)
        w.writeheader()
        for row in rows:
            w.writerow(row)
