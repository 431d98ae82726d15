"""Command-line pipeline: ingest -> rank / paths -> compare.

Every subcommand writes its outputs plus one JSON run manifest. Everything
that can differ between two runs on the same inputs (timings, thread count,
kernel backend) lives under the manifest's ``runtime`` key.

Exit codes: 0 success, 1 computation failure, 2 input error.
"""
import argparse
import difflib
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__, _backend
from .audit import ValidationOptions
from .compare import comparison_curves, rank_change_table, rank_change_tsv
from .errors import ComputationError, ConvergenceError, DomainError, InputError
from .graph import PaperGraph
from .ingest import corpus_stats, load_corpus
from .paths import focal_path_flows, path_census
from .projection import project, transition_matrix
from .ranking import (PageRankConfig, ScoreVector, citation_count_baseline, pagerank_journal,
                      pagerank_paths)

DEFAULTS = {
    "damping": 0.5,
    "tolerance": 1e-12,
    "max_iters": 1000,
    "forward_citations": "drop",
    "exclude_self_loops": False,
    "k_grid": None,
    "threads": 1,
    "seed": 0,
    "top_k": 45,
    "table_k": 20,
    "walkers": 10_000,
    "steps": 1_000,
}


class CliError(Exception):
    def __init__(self, message, code=2, **extra):
        super().__init__(message)
        self.code = code
        self.extra = extra


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _require(path):
    p = Path(path)
    if not p.is_file():
        raise CliError(f"no such file: {path}", path=str(path))
    return p


class Run:
    """Collects config, digests and timings for the manifest of one command."""

    def __init__(self, command, args, config):
        self.command = command
        self.args = args
        self.config = config
        self.inputs = {}
        self.outputs = {}
        self.result = {}
        self.timings = {}
        self._t = time.perf_counter()

    def input(self, path):
        path = _require(path)
        self.inputs[path.name] = sha256(path)
        return path

    def write(self, path, data):
        path = Path(path)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        self.outputs[path.name] = hashlib.sha256(data).hexdigest()
        return path

    def lap(self, stage):
        now = time.perf_counter()
        self.timings[stage] = round(now - self._t, 6)
        self._t = now

    def manifest(self):
        return {
            "tool": "citepaths",
            "version": __version__,
            "command": self.command,
            "inputs": self.inputs,
            "config": self.config,
            "outputs": self.outputs,
            "result": self.result,
            "runtime": {
                "threads": self.args.threads,
                "backend": _backend.name,
                "timings": self.timings,
            },
        }

    def finish(self, default_path):
        path = Path(self.args.manifest or default_path)
        data = json.dumps(self.manifest(), indent=2, sort_keys=True) + "\n"
        path.write_text(data, encoding="utf-8")
        return path


def resolve(args, keys):
    """Flags > config file > defaults."""
    config = {}
    if getattr(args, "config", None):
        try:
            config = json.loads(_require(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CliError(f"invalid config file {args.config}: {exc}") from exc
        if not isinstance(config, dict):
            raise CliError(f"config file {args.config} must hold a JSON object")
    resolved = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is None:
            value = config.get(key, config.get(key.replace("_", "-"), DEFAULTS[key]))
        resolved[key] = value
        setattr(args, key, value)
    return resolved


def _pagerank_config(cfg):
    try:
        return PageRankConfig(damping=float(cfg["damping"]), tolerance=float(cfg["tolerance"]),
                              max_iter=int(cfg["max_iters"]))
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _load_graph(run, path):
    path = run.input(path)
    return PaperGraph.load(path)


# -- subcommands -----------------------------------------------------------

def cmd_ingest(args):
    cfg = resolve(args, ["forward_citations", "threads"])
    cfg.pop("threads")
    cfg["allow_same_year"] = not args.disallow_same_year
    cfg["year_range"] = list(args.year_range) if args.year_range else None
    run = Run("ingest", args, cfg)
    meta = run.input(args.metadata)
    cites = run.input(args.citations)
    options = ValidationOptions(forward_citation_policy=args.forward_citations,
                                allow_same_year=not args.disallow_same_year,
                                year_range=tuple(args.year_range) if args.year_range else None)
    g = load_corpus(meta, cites, options=options)
    run.lap("parse_and_build")
    out = Path(args.output)
    run.write(out, g.to_bytes())
    audit_path = Path(args.audit) if args.audit else out.with_suffix(".audit.json")
    run.write(audit_path, options.report_sink.to_json().encode("utf-8"))
    run.result = {"n_papers": g.n_papers, "n_journals": g.n_journals, "n_edges": g.n_edges,
                  "anomalies": options.report_sink.to_dict()}
    run.lap("write")
    run.finish(out.with_suffix(".manifest.json"))
    return 0


def cmd_rank(args):
    cfg = resolve(args, ["damping", "tolerance", "max_iters", "exclude_self_loops", "threads"])
    cfg.pop("threads")
    cfg["method"] = args.method
    run = Run("rank", args, cfg)
    g = _load_graph(run, args.graph)
    run.lap("load")
    pr_cfg = _pagerank_config(cfg)
    if args.method == "pr":
        jg = project(g, self_loops=not args.exclude_self_loops)
        scores = pagerank_journal(transition_matrix(jg), pr_cfg, threads=args.threads)
    elif args.method == "prc":
        papers, scores = pagerank_paths(g, pr_cfg, threads=args.threads)
        if args.paper_scores:
            run.write(args.paper_scores, papers.to_tsv())
    else:
        scores = citation_count_baseline(project(g, self_loops=not args.exclude_self_loops))
    run.lap("rank")
    out = run.write(args.output, scores.to_tsv())
    run.result = {"n": len(scores), **{k: v for k, v in scores.meta.items()}}
    run.finish(out.with_suffix(".manifest.json"))
    return 0


def cmd_paths(args):
    cfg = resolve(args, ["top_k", "threads"])
    cfg.pop("threads")
    cfg["focal"] = args.focal
    run = Run("paths", args, cfg)
    g = _load_graph(run, args.graph)
    if args.focal is None:
        census = path_census(g)
        out = run.write(args.output, census.to_json().encode("utf-8"))
        run.result = census.to_dict()
    else:
        try:
            focal = g.journal_index(args.focal)
        except KeyError:
            lowered = {name.lower(): name for name in g.journal_names}
            close = [lowered[m] for m in
                     difflib.get_close_matches(args.focal.lower(), list(lowered), n=5)]
            raise CliError(f"unknown journal {args.focal!r}", nearest=close) from None
        table = focal_path_flows(g, focal, int(args.top_k))
        out = run.write(args.output, table.to_tsv())
        run.result = {"focal": args.focal, "total": table.total, "other": table.other,
                      "rows": len(table.rows)}
    run.lap("paths")
    run.finish(Path(out).with_suffix(".manifest.json"))
    return 0


def _parse_grid(value):
    if value is None or isinstance(value, list):
        return value
    try:
        return [int(k) for k in str(value).split(",") if k.strip()]
    except ValueError as exc:
        raise CliError(f"invalid --k-grid {value!r}") from exc


def cmd_compare(args):
    cfg = resolve(args, ["k_grid", "table_k", "threads"])
    cfg.pop("threads")
    run = Run("compare", args, cfg)
    a = ScoreVector.from_tsv(run.input(args.scores_a).read_bytes())
    b = ScoreVector.from_tsv(run.input(args.scores_b).read_bytes())
    grid = _parse_grid(cfg["k_grid"])
    if grid is not None:
        grid = sorted({min(max(k, 1), len(a)) for k in grid})
    cfg["k_grid"] = grid
    try:
        comparison = comparison_curves(a, b, grid)
    except DomainError as exc:
        raise CliError(str(exc)) from exc
    curves = run.write(args.curves, comparison.to_csv())
    k = min(int(cfg["table_k"]), len(a))
    run.write(args.changes, rank_change_tsv(rank_change_table(a, b, k)))
    run.result = comparison.summary()
    run.lap("compare")
    run.finish(curves.with_suffix(".manifest.json"))
    return 0


def cmd_project(args):
    cfg = resolve(args, ["exclude_self_loops", "threads"])
    cfg.pop("threads")
    run = Run("project", args, cfg)
    g = _load_graph(run, args.graph)
    jg = project(g, self_loops=not args.exclude_self_loops)
    out = run.write(args.output, jg.to_tsv())
    run.result = {"n_journals": jg.n_journals, "n_edges": jg.n_edges,
                  "total_weight": jg.total_weight, "has_cycle": jg.has_cycle()}
    run.lap("project")
    run.finish(out.with_suffix(".manifest.json"))
    return 0


def cmd_stats(args):
    resolve(args, ["threads"])
    run = Run("stats", args, {})
    g = _load_graph(run, args.graph)
    stats = corpus_stats(g)
    out = run.write(args.output, (json.dumps(stats.to_dict(), indent=2) + "\n").encode())
    run.result = {"n_papers": g.n_papers, "n_journals": g.n_journals}
    run.finish(out.with_suffix(".manifest.json"))
    return 0


def cmd_verify(args):
    from .verify import simulate_walk
    cfg = resolve(args, ["damping", "tolerance", "max_iters", "seed", "walkers", "steps",
                         "threads"])
    cfg.pop("threads")
    run = Run("verify", args, cfg)
    g = _load_graph(run, args.graph)
    _, journals = pagerank_paths(g, _pagerank_config(cfg), threads=args.threads)
    mc = simulate_walk(g, damping=float(cfg["damping"]), walkers=int(cfg["walkers"]),
                       steps=int(cfg["steps"]), seed=int(cfg["seed"]))
    z = mc.z_scores(journals.scores)
    worst = float(abs(z).max()) if len(z) else 0.0
    report = {
        "steps": mc.steps,
        "max_abs_z": worst,
        "within_3_se": bool(worst <= 3.0),
        "journals": [{"journal": lab, "power_iteration": float(s), "monte_carlo": float(m),
                      "stderr": float(e)}
                     for lab, s, m, e in zip(journals.labels, journals.scores, mc.mean,
                                             mc.stderr)],
    }
    out = run.write(args.output, (json.dumps(report, indent=2) + "\n").encode())
    run.result = {"max_abs_z": worst, "within_3_se": report["within_3_se"]}
    run.lap("verify")
    run.finish(out.with_suffix(".manifest.json"))
    return 0 if report["within_3_se"] else 1


def cmd_synth(args):
    from .synth import preferential_corpus
    cfg = resolve(args, ["seed", "threads"])
    cfg.pop("threads")
    cfg.update(papers=args.papers, journals=args.journals, refs=args.refs)
    run = Run("synth", args, cfg)
    corpus = preferential_corpus(n_papers=args.papers, n_journals=args.journals,
                                 refs=args.refs, seed=int(cfg["seed"]))
    out = Path(args.outdir)
    mpath, cpath = corpus.write(out, prefix=args.prefix)
    for p in (mpath, cpath):
        run.outputs[p.name] = sha256(p)
    run.result = {"n_papers": corpus.n_papers, "n_citations": len(corpus.citing)}
    run.lap("synth")
    run.finish(out / f"{args.prefix}.manifest.json")
    return 0


# -- parser -----------------------------------------------------------------

def _common(p):
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("--threads", type=int, default=None,
                   help="parallelism bound for compiled kernels (results do not depend on it)")
    p.add_argument("--manifest", help="manifest path (default: next to the main output)")


def _pagerank_flags(p):
    p.add_argument("--damping", type=float, default=None, help="damping factor d (0.5)")
    p.add_argument("--tolerance", type=float, default=None,
                   help="L1 convergence tolerance (1e-12)")
    p.add_argument("--max-iters", dest="max_iters", type=int, default=None,
                   help="iteration cap (1000)")


def build_parser():
    parser = argparse.ArgumentParser(prog="citepaths", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse TSV files into a graph cache")
    p.add_argument("metadata")
    p.add_argument("citations")
    p.add_argument("-o", "--output", required=True, help="graph cache path")
    p.add_argument("--audit", help="audit JSON path (default: <output>.audit.json)")
    p.add_argument("--forward-citations", dest="forward_citations", choices=("drop", "reject"),
                   default=None)
    p.add_argument("--disallow-same-year", action="store_true")
    p.add_argument("--year-range", nargs=2, type=int, metavar=("FIRST", "LAST"))
    _common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("rank", help="rank journals")
    p.add_argument("graph")
    p.add_argument("--method", choices=("pr", "prc", "counts"), required=True)
    p.add_argument("-o", "--output", required=True, help="scores TSV path")
    p.add_argument("--paper-scores", help="also write paper scores (prc only)")
    p.add_argument("--exclude-self-loops", dest="exclude_self_loops", action="store_const",
                   const=True, default=None)
    _pagerank_flags(p)
    _common(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("paths", help="length-two path census or focal path flows")
    p.add_argument("graph")
    p.add_argument("--focal", help="journal name; emits a flow table instead of the census")
    p.add_argument("--top-k", dest="top_k", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    _common(p)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("compare", help="compare two score files")
    p.add_argument("scores_a", help="reference ranking (e.g. pr)")
    p.add_argument("scores_b", help="other ranking (e.g. prc)")
    p.add_argument("--curves", required=True, help="output CSV k,overlap,kendall")
    p.add_argument("--changes", required=True, help="output rank-change TSV")
    p.add_argument("--k-grid", dest="k_grid", default=None, help="comma-separated cutoffs")
    p.add_argument("--table-k", dest="table_k", type=int, default=None,
                   help="rows in the rank-change table (20)")
    _common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("project", help="export the journal citation graph")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--exclude-self-loops", dest="exclude_self_loops", action="store_const",
                   const=True, default=None)
    _common(p)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("stats", help="corpus statistics JSON")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True)
    _common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="Monte-Carlo check of the path-respecting walk")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--walkers", type=int, default=None)
    p.add_argument("--steps", type=int, default=None)
    _pagerank_flags(p)
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synth", help="write a synthetic preferential-attachment corpus")
    p.add_argument("outdir")
    p.add_argument("--papers", type=int, default=100_000)
    p.add_argument("--journals", type=int, default=1000)
    p.add_argument("--refs", type=float, default=5.0)
    p.add_argument("--prefix", default="corpus")
    p.add_argument("--seed", type=int, default=None)
    _common(p)
    p.set_defaults(func=cmd_synth)
    return parser


def _fail(code, kind, message, **extra):
    print(json.dumps({"error": kind, "message": message, **extra}, sort_keys=True),
          file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        return _fail(exc.code, "input", str(exc), **exc.extra)
    except ConvergenceError as exc:
        return _fail(1, "convergence", str(exc), residual=exc.residual)
    except ComputationError as exc:
        return _fail(1, type(exc).__name__, str(exc))
    except InputError as exc:
        return _fail(2, type(exc).__name__, str(exc))
    except OSError as exc:
        return _fail(2, "io", str(exc), path=exc.filename)


if __name__ == "__main__":
    sys.exit(main())
