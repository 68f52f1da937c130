"""Command-line front door.

Subcommands: ingest, measure, generate, compare, evolve, cvm.
Exit codes: 0 success, 2 data errors, 64 usage errors. Progress goes to
stderr; data goes to files or stdout. Every output directory receives
exactly one manifest.json recording the command line, input digests,
seeds, and tool version, so identical inputs reproduce identical outputs.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, compare, generators, ingest, measures, stats
from .errors import AstopoError, ConfigError
from .graph import build_graph, largest_connected_component, read_edge_list, write_edge_list

EXIT_OK = 0
EXIT_DATA = 2
EXIT_USAGE = 64

MEASURE_NAMES = ("degree", "betweenness", "pagerank", "path_length",
                 "clustering", "core_number")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _write_manifest(out_dir: Path, args_ns, inputs: list[Path], seeds: dict,
                    params: dict) -> None:
    manifest = {
        "tool": "astopo",
        "version": __version__,
        "command": " ".join(sys.argv),
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "inputs": {str(p): _sha256(p) for p in inputs if p.exists()},
        "seeds": seeds,
        "params": params,
        "config_digest": hashlib.sha256(
            json.dumps(params, sort_keys=True, default=str).encode()).hexdigest(),
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                           encoding="utf-8")


def _ensure_out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_ingest(args) -> int:
    index_path = Path(args.index)
    doc = ingest.read_index_doc(index_path)
    if args.month in doc["months"] and not args.force:
        raise ConfigError(f"month {args.month} already ingested; use --force to replace")
    paths = [Path(p) for p in args.paths]
    for p in paths:
        if not p.exists():
            raise FileNotFoundError(f"input file not found: {p}")
    streams = [open(p, "r", encoding="utf-8", errors="replace") for p in paths]
    try:
        result = ingest.compile_month(streams, args.month)
    finally:
        for s in streams:
            s.close()
    if args.filter_private:
        filtered = ingest.ParseResult()
        for p in paths:
            with open(p, "r", encoding="utf-8", errors="replace") as fh:
                filtered.merge(ingest.parse_aspath_stream(fh, filter_private=True))
        result = filtered
    _log(f"parsed {result.lines} paths: {len(result.observations)} distinct pairs, "
         f"{result.self_loop_observations} self-loop observations, "
         f"{result.rejected_lines} rejected lines, "
         f"{result.skipped_pairs} pairs skipped at AS-sets")
    if not result.observations:
        raise ConfigError("no observations parsed; index left untouched")
    index_path.parent.mkdir(parents=True, exist_ok=True)
    edge_file = index_path.parent / f"{args.month}.edges"
    ingest.write_snapshot(edge_file, result.observations)
    doc["months"][args.month] = {"path": edge_file.name}
    ingest.write_index_doc(index_path, doc)
    _log(f"wrote {edge_file} and updated {index_path}")
    return EXIT_OK


def cmd_measure(args) -> int:
    out = _ensure_out_dir(args.out)
    graph_path = Path(args.graph)
    g = read_edge_list(graph_path)
    if args.lcc:
        g = largest_connected_component(g)
    report = compare.full_report(g)
    only = set(args.only.split(",")) if args.only else set(MEASURE_NAMES)
    unknown = only - set(MEASURE_NAMES)
    if unknown:
        raise ConfigError(f"unknown measures: {sorted(unknown)}")
    vector_files = {
        "degree": (report.asns, report.degree),
        "pagerank": (report.asns, report.pagerank),
        "clustering": (report.asns, report.clustering),
        "core_number": (report.asns, report.core_number),
        "betweenness": (report.lcc_asns, report.betweenness),
        "path_length": (report.lcc_asns, report.path_length),
    }
    for name in sorted(only):
        asns, vec = vector_files[name]
        with open(out / f"{name}.csv", "w", encoding="utf-8") as fh:
            fh.write(f"asn,{name}\n")
            for asn, val in zip(asns, vec):
                fh.write(f"{asn},{val:.12g}\n")
        if name in ("degree", "clustering"):
            vals, fracs = measures.ccdf(vec)
            with open(out / f"{name}_ccdf.csv", "w", encoding="utf-8") as fh:
                fh.write("value,fraction\n")
                for v, f in zip(vals, fracs):
                    fh.write(f"{v:.12g},{f:.12g}\n")
    summary = report.summary()
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n",
                                      encoding="utf-8")
    _write_manifest(out, args, [graph_path], {},
                    {"lcc": args.lcc, "only": sorted(only)})
    _log(f"measured {g.node_count} nodes / {g.edge_count} edges "
         f"(lcc coverage {report.lcc_coverage:.3f}) -> {out}")
    return EXIT_OK


def _parse_params(pairs: list[str]) -> dict:
    params = {}
    for item in pairs or []:
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = float(value)
    return params


def cmd_generate(args) -> int:
    params = _parse_params(args.param)
    for key in ("m", "alpha", "p", "q", "beta", "delta", "candidates"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    config = generators.GeneratorConfig(model=args.model, n=args.n,
                                        seed=args.seed, params=params)
    resolved = config.resolved_params()
    g = generators.generate(config)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_edge_list(g, out_path)
    budget = generators.edge_budget(config)
    sidecar = {
        "model": args.model, "n": args.n, "seed": args.seed,
        "params": resolved, "nodes": g.node_count, "edges": g.edge_count,
        "edge_budget": budget.value, "edge_budget_exact": budget.exact,
        "version": __version__,
    }
    Path(str(out_path) + ".meta.json").write_text(
        json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    _log(f"generated {args.model} n={g.node_count} m={g.edge_count} -> {out_path}")
    return EXIT_OK


def _model_entries(args, reference):
    entries = []
    if args.config:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        for spec_entry in doc.get("models", []):
            name = spec_entry["model"].lower()
            if name in ("self", "reference"):
                entries.append(("reference", reference))
                continue
            entries.append(generators.GeneratorConfig(
                model=name, n=int(spec_entry.get("n", args.n or reference.node_count)),
                seed=int(spec_entry.get("seed", args.seed)),
                params=spec_entry.get("params", {})))
    if args.models:
        for name in args.models.split(","):
            name = name.strip().lower()
            if not name:
                continue
            if name in ("self", "reference"):
                entries.append(("reference", reference))
            else:
                entries.append(generators.GeneratorConfig(
                    model=name, n=args.n or reference.node_count, seed=args.seed))
    if not entries:
        raise ConfigError("no models given; use --models and/or --config")
    return entries


def cmd_compare(args) -> int:
    out = _ensure_out_dir(args.out)
    ref_path = Path(args.reference)
    reference = read_edge_list(ref_path)
    known = set(generators.MODEL_NAMES) | {"self", "reference"}
    if args.models:
        for name in args.models.split(","):
            if name.strip().lower() not in known:
                raise ConfigError(f"unknown model {name.strip()!r}")
    entries = _model_entries(args, reference)
    matrix = compare.compare_models(reference, entries,
                                    subsample_size=args.subsample,
                                    permutations=args.permutations,
                                    seed=args.seed, jobs=args.jobs)
    matrix.write_csv(out / "comparison.csv")
    doc = {"metadata": matrix.metadata, "rows": matrix.to_rows()}
    (out / "comparison.json").write_text(json.dumps(doc, indent=2, default=str) + "\n",
                                         encoding="utf-8")
    _write_manifest(out, args, [ref_path], {"seed": args.seed},
                    {"models": args.models, "subsample": args.subsample,
                     "permutations": args.permutations, "jobs": args.jobs})
    for row, err in matrix.errors.items():
        _log(f"model {row} failed: {err}")
    _log(f"compared {len(matrix.rows)} models -> {out}")
    return EXIT_OK


def cmd_evolve(args) -> int:
    out = _ensure_out_dir(args.out)
    index_path = Path(args.index)
    series = ingest.load_index(index_path)
    if args.fill and not series.filled:
        series = ingest.fill_series(series)
    rows = compare.evolution_series(series)
    compare.write_rows_csv(rows, out / "evolution.csv")
    if args.topk > 0:
        topk = compare.topk_degree_series(series, args.topk)
        compare.write_rows_csv(topk, out / "topk.csv",
                               fieldnames=["month", "rank", "asn", "degree"])
    if len(series.months) >= 2:
        frac_all, frac_long = compare.decline_statistics(series)
        (out / "declines.json").write_text(json.dumps({
            "fraction_with_decline": frac_all,
            "fraction_with_decline_alive_60_months": frac_long,
        }, indent=2) + "\n", encoding="utf-8")
    else:
        _log("skipping decline statistics: need >= 2 months")
    if args.annual:
        table = compare.annual_change_table(series, month_of_year=args.month_of_year,
                                            subsample_size=args.subsample,
                                            permutations=args.permutations,
                                            seed=args.seed)
        compare.write_rows_csv(table, out / "annual.csv")
    counts = ingest.series_counts(series)
    compare.write_rows_csv(counts, out / "counts.csv")
    _write_manifest(out, args, [index_path], {"seed": args.seed},
                    {"fill": args.fill, "topk": args.topk, "annual": args.annual,
                     "month_of_year": args.month_of_year})
    _log(f"evolution over {len(series.months)} months -> {out}")
    return EXIT_OK


def _read_values(path: Path) -> np.ndarray:
    try:
        vals = np.loadtxt(path, ndmin=1)
    except ValueError as exc:
        raise ConfigError(f"cannot parse values from {path}: {exc}") from exc
    return np.asarray(vals, dtype=np.float64)


def cmd_cvm(args) -> int:
    a = _read_values(Path(args.a))
    b = _read_values(Path(args.b))
    if args.subsample:
        size = min(a.size, b.size, args.subsample)
        a = stats.subsample(a, size, args.seed)
        b = stats.subsample(b, size, args.seed)
    res = stats.cvm_p_value(a, b, method=args.method,
                            permutations=args.permutations, seed=args.seed)
    print(json.dumps({
        "statistic": res.statistic, "p_value": res.p_value, "band": res.band,
        "method": res.method, "n": res.n, "m": res.m, "seed": res.seed,
        "permutations": res.permutations,
    }, indent=2))
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="astopo",
                     description="AS-level Internet topology toolkit")
    parser.add_argument("--version", action="version", version=f"astopo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse ASPATH files into a monthly snapshot")
    p.add_argument("paths", nargs="+", help="ASPATH text files (one path per line)")
    p.add_argument("--index", required=True, help="snapshot index JSON to update")
    p.add_argument("--month", required=True, help="month stamp YYYY-MM")
    p.add_argument("--force", action="store_true", help="replace an existing month")
    p.add_argument("--filter-private", action="store_true",
                   help="drop observations touching private ASNs")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("measure", help="compute topological measures of a graph")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--lcc", action="store_true",
                   help="restrict all measures to the largest component")
    p.add_argument("--only", help="comma-separated subset of measures")
    p.add_argument("--jobs", type=int, default=1, help="worker bound (reserved)")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("generate", help="generate a model topology")
    p.add_argument("model", choices=sorted(generators.MODEL_NAMES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="edge-list output path")
    p.add_argument("--m", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--candidates", type=int)
    p.add_argument("--param", action="append", help="extra key=value parameter")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("compare", help="compare models against a reference graph")
    p.add_argument("--reference", required=True, help="reference edge-list file")
    p.add_argument("--models", help="comma-separated model names; 'self' adds "
                                    "the reference as its own row")
    p.add_argument("--config", help="JSON batch file: {\"models\": [{\"model\": ...}]}")
    p.add_argument("--n", type=int, help="override node count (defaults to reference)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subsample", type=int, default=stats.DEFAULT_SUBSAMPLE)
    p.add_argument("--permutations", type=int, default=stats.DEFAULT_PERMUTATIONS)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("evolve", help="evolution series, top-k, declines, annual table")
    p.add_argument("--index", required=True, help="snapshot index JSON")
    p.add_argument("--out", required=True)
    p.add_argument("--fill", dest="fill", action="store_true", default=True,
                   help="apply first-to-last persistence fill (default)")
    p.add_argument("--no-fill", dest="fill", action="store_false")
    p.add_argument("--topk", type=int, default=3)
    p.add_argument("--annual", action="store_true", help="emit year-over-year table")
    p.add_argument("--month-of-year", type=int, default=6, choices=range(1, 13),
                   metavar="M")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subsample", type=int, default=stats.DEFAULT_SUBSAMPLE)
    p.add_argument("--permutations", type=int, default=stats.DEFAULT_PERMUTATIONS)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("cvm", help="two-sample Cramér-von Mises test on value files")
    p.add_argument("a", help="first sample, one value per line")
    p.add_argument("b", help="second sample, one value per line")
    p.add_argument("--method", choices=("permutation", "asymptotic"),
                   default="permutation")
    p.add_argument("--permutations", type=int, default=stats.DEFAULT_PERMUTATIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subsample", type=int)
    p.set_defaults(func=cmd_cvm)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AstopoError, FileNotFoundError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
