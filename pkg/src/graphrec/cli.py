"""Command-line interface.

Four subcommands share one engine core:

  build      tokenize, index, and persist a corpus directory
  recommend  rank related documents for one seed document
  evaluate   run the seed-based benchmark protocol and render reports
  serve      expose the JSON API (optionally with the bundled web UI)
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
import time
from pathlib import Path

from .corpus import load_corpus, load_filter_file, load_taxonomy
from .engine import RecommendationEngine
from .errors import GraphRecError
from .evalkit import RunList, benchmark_driver, load_qrels, pairwise_jaccard, save_run
from .explain import explanation_records
from .firststage import CutoffMode, Strategy
from .indexes import IndexConfig
from .recommend import RecommendationConfig, format_run_lines
from . import report as report_mod

log = logging.getLogger(__name__)

DEFAULT_EVAL_RUNS = (
    {"name": "fused", "w_graph": 0.6, "w_text": 0.4},
    {"name": "graph-only", "w_graph": 1.0, "w_text": 0.0},
    {"name": "text-only", "w_graph": 0.0, "w_text": 1.0},
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphrec",
        description="Graph-based related-document recommendation over annotated corpora.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build and persist indexes")
    p_build.add_argument("--corpus", required=True, help="corpus .jsonl file")
    p_build.add_argument("--taxonomy", required=True, help="predicate taxonomy .tsv file")
    p_build.add_argument("--out", required=True, help="output index directory")
    p_build.add_argument("--df-filter", type=float, default=None, metavar="R",
                         help="generic-concept document-frequency ratio (default 0.027)")
    p_build.add_argument("--force-df-filter", action="store_true",
                         help="apply the generic-concept filter even on small corpora")
    p_build.add_argument("--stemming", action="store_true",
                         help="stem tokens when building the text index")
    p_build.add_argument("--force", action="store_true",
                         help="overwrite an existing index directory")

    p_rec = sub.add_parser("recommend", help="recommend related documents")
    p_rec.add_argument("--index", required=True, help="index directory")
    p_rec.add_argument("--doc", required=True, type=int, help="seed document id")
    p_rec.add_argument("--top", type=int, default=100)
    p_rec.add_argument("--first-stage", choices=[s.value for s in Strategy],
                       default=Strategy.CONCEPT.value)
    p_rec.add_argument("--cutoff", choices=[m.value for m in CutoffMode],
                       default=CutoffMode.FLEXIBLE.value)
    p_rec.add_argument("--k", type=int, default=1000)
    p_rec.add_argument("--w-graph", type=float, default=0.6)
    p_rec.add_argument("--w-text", type=float, default=0.4)
    p_rec.add_argument("--explain", action="store_true",
                       help="print the shared/new statement breakdown per candidate")
    p_rec.add_argument("--l", dest="budget", type=int, default=6,
                       help="max shared statements per explanation (2x total)")
    p_rec.add_argument("--trec", metavar="TAG", default=None,
                       help="emit a TREC run file to stdout with this tag")
    p_rec.add_argument("--filter", default=None,
                       help="file of allowed candidate doc ids, one per line")

    p_eval = sub.add_parser("evaluate", help="run the benchmark protocol")
    p_eval.add_argument("--index", required=True)
    p_eval.add_argument("--qrels", required=True)
    p_eval.add_argument("--config", default=None, help="JSON evaluation config")
    p_eval.add_argument("--report", default=None, metavar="PREFIX",
                        help="write PREFIX.txt/.tsv and PNG figures")

    p_serve = sub.add_parser("serve", help="serve the JSON API")
    p_serve.add_argument("--index", required=True)
    p_serve.add_argument("--port", type=int, required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", default=None, help="static web UI directory")

    return parser


def _cmd_build(args) -> int:
    out_dir = Path(args.out)
    if out_dir.exists() and any(out_dir.iterdir()) and not args.force:
        print(f"error: {out_dir} exists and is not empty (use --force to overwrite)",
              file=sys.stderr)
        return 1
    taxonomy = load_taxonomy(args.taxonomy)
    started = time.perf_counter()
    corpus = load_corpus(args.corpus, taxonomy)
    config = IndexConfig(
        stemming=args.stemming,
        force_df_filter=args.force_df_filter,
        **({"df_filter_ratio": args.df_filter} if args.df_filter is not None else {}),
    )
    indexes = RecommendationEngine.build_index_dir(corpus, out_dir, config)
    elapsed = time.perf_counter() - started
    print(f"indexed {indexes.stats.corpus_size} documents")
    print(f"  concepts:       {len(indexes.stats.df)}")
    print(f"  graph edges:    {len(indexes.edges)}")
    print(f"  graph nodes:    {len(indexes.nodes)}")
    print(f"  blocked generic:{len(indexes.generic_filter.blocked):>6}")
    print(f"build time: {elapsed:.2f} s")
    return 0


def _render_candidates(engine: RecommendationEngine, seed: int, candidates,
                       explain_flag: bool, budget: int) -> None:
    seed_doc = engine.document(seed)
    print(f"seed {seed}: {seed_doc.title}")
    print(f"{'rank':>4}  {'doc':>8}  {'fused':>8}  {'graph':>8}  {'text':>8}  title")
    for rank, candidate in enumerate(candidates, start=1):
        title = engine.document(candidate.doc_id).title
        if len(title) > 60:
            title = title[:57] + "..."
        print(f"{rank:>4}  {candidate.doc_id:>8}  {candidate.fused:>8.4f}  "
              f"{candidate.core_overlap_norm:>8.4f}  {candidate.bm25_norm:>8.4f}  {title}")
        if explain_flag:
            explanation = engine.explain_pair(seed, candidate.doc_id, budget)
            for entry in explanation_records(explanation):
                print(f"      [{entry['status']}] {entry['subject']} "
                      f"-{entry['predicate']}-> {entry['object']} ({entry['score']:.4f})")


def _cmd_recommend(args) -> int:
    engine = RecommendationEngine.from_index_dir(args.index)
    universe = load_filter_file(args.filter) if args.filter else None
    config = RecommendationConfig(
        w_graph=args.w_graph, w_text=args.w_text,
        strategy=Strategy(args.first_stage), k=args.k,
        cutoff=CutoffMode(args.cutoff), top_n=args.top)
    started = time.perf_counter()
    candidates = engine.recommend(args.doc, config, universe=universe)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    if not candidates:
        print(f"warning: no candidates for document {args.doc} "
              f"(first stage '{config.strategy.value}')", file=sys.stderr)
    if args.trec is not None:
        for line in format_run_lines(str(args.doc), candidates, args.trec):
            print(line)
    else:
        _render_candidates(engine, args.doc, candidates, args.explain, args.budget)
    print(f"retrieved {len(candidates)} candidates in {elapsed_ms:.1f} ms", file=sys.stderr)
    return 0


def _load_eval_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as handle:
        loaded = json.load(handle)
    if not isinstance(loaded, dict):
        raise ValueError("evaluation config must be a JSON object")
    return loaded


def _cmd_evaluate(args) -> int:
    engine = RecommendationEngine.from_index_dir(args.index)
    qrels = load_qrels(args.qrels)
    options = _load_eval_config(args.config)

    strategy = Strategy(options.get("strategy", Strategy.CONCEPT.value))
    cutoff = CutoffMode(options.get("cutoff", CutoffMode.FLEXIBLE.value))
    k = int(options.get("k", 1000))
    seed_grade = int(options.get("seed_grade", 2))
    jaccard_k = int(options.get("jaccard_k", 20))
    runs = options.get("runs", [dict(run) for run in DEFAULT_EVAL_RUNS])
    if "filter" in options:
        universe = load_filter_file(options["filter"])
    else:
        universe = qrels.doc_ids()

    macro_rows = []
    run_lists: list[tuple[str, RunList]] = []
    for run_spec in runs:
        name = run_spec["name"]
        config = RecommendationConfig(
            w_graph=float(run_spec.get("w_graph", 0.6)),
            w_text=float(run_spec.get("w_text", 0.4)),
            strategy=strategy, k=k, cutoff=cutoff,
            top_n=None)  # full lists: recall must not depend on the weights
        started = time.perf_counter()
        outcome = benchmark_driver(
            qrels,
            lambda seed: [(c.doc_id, c.fused) for c in engine.recommend(seed, config,
                                                                        universe=universe)],
            seed_grade=seed_grade)
        elapsed = time.perf_counter() - started
        print(f"run '{name}': {len(outcome.topic_rows)} topics in {elapsed:.1f} s",
              file=sys.stderr)
        macro_rows.append(dataclasses.replace(outcome.macro, label=name))
        run_lists.append((name, outcome.runs))

    table = report_mod.format_table(macro_rows, title="macro-averaged metrics")
    print(table)

    if args.report:
        prefix = Path(args.report)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        with open(f"{prefix}.txt", "w", encoding="utf-8") as handle:
            handle.write(table + "\n")
        report_mod.write_tsv(macro_rows, f"{prefix}.tsv")
        report_mod.write_metric_figure(macro_rows, f"{prefix}_metrics.png")
        labels = [name for name, _ in run_lists]
        matrix = [[pairwise_jaccard(a, b, jaccard_k) for _, b in run_lists]
                  for _, a in run_lists]
        report_mod.write_overlap_figure(matrix, labels, jaccard_k, f"{prefix}_overlap.png")
        for name, run_list in run_lists:
            save_run(run_list, f"{prefix}_{name}.run", tag=name)
        print(f"report written to {prefix}.txt/.tsv and figures", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.index, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


_COMMANDS = {
    "build": _cmd_build,
    "recommend": _cmd_recommend,
    "evaluate": _cmd_evaluate,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (GraphRecError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
