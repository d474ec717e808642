"""Command-line surface: build databases, query them, evaluate, and serve.

Exit codes: 0 success, 1 usage/config error, 2 data error (unreadable or
corrupt inputs).
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import database, extraction
from .config import ConfigError, load_config, provider_from_config
from .database import DatabaseLoadError
from .embeddings import EmbeddingUnavailableError
from .evaluation import evaluate, filter_eval_candidates, format_report, load_eval_file
from .recommend import payload, run_query, to_json
from .rerank import Strategy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise SystemExit2(message)


class SystemExit2(Exception):
    """Usage error carrying its message to main()'s handler."""


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a key=value config file")
    parser.add_argument("--k1", type=float, help="BM25 k1")
    parser.add_argument("--b", type=float, help="BM25 b")
    parser.add_argument("--delta", type=float, help="BM25 floor term")
    parser.add_argument("--cutoff", type=int, dest="per_scorer_cutoff",
                        help="spans pre-fetched per scorer")
    parser.add_argument("--threshold", type=int, dest="length_threshold",
                        help="query token count above which the semantic route engages")
    parser.add_argument("--provider",
                        help="embedding provider: an http(s) URL, cache:<path>, or disabled")
    parser.add_argument("--no-fallback", action="store_true",
                        help="fail instead of falling back to lexical ranks when embeddings are unavailable")


def _config_from_args(args) -> "AppConfig":
    overrides = {
        "db_path": getattr(args, "db", None),
        "k1": getattr(args, "k1", None),
        "b": getattr(args, "b", None),
        "delta": getattr(args, "delta", None),
        "per_scorer_cutoff": getattr(args, "per_scorer_cutoff", None),
        "length_threshold": getattr(args, "length_threshold", None),
        "strategy": getattr(args, "ablate", None),
    }
    provider = getattr(args, "provider", None)
    if provider:
        if provider.startswith("http://") or provider.startswith("https://"):
            overrides["provider_mode"] = "http"
            overrides["provider_url"] = provider
        elif provider.startswith("cache:"):
            overrides["provider_mode"] = "cache"
            overrides["provider_cache"] = provider.split(":", 1)[1]
        elif provider == "disabled":
            overrides["provider_mode"] = "disabled"
        else:
            raise ConfigError(f"unrecognized provider {provider!r}")
    if getattr(args, "no_fallback", False):
        overrides["semantic_fallback"] = False
    return load_config(getattr(args, "config", None), **overrides)


def _load_db(path):
    try:
        return database.load(path)
    except FileNotFoundError:
        raise DatabaseLoadError(f"database file not found: {path}")


def cmd_extract(args) -> int:
    report = extraction.ExtractionReport()
    spans = extraction.extract_corpus(extraction.read_sentences(args.sentences), report=report)
    n = extraction.write_spans(args.out, spans)
    print(f"wrote {n} spans to {args.out}")
    print(f"sentences: {report.sentences_seen}, skipped: {report.sentences_skipped}, "
          f"without refs: {report.sentences_without_refs}")
    return EXIT_OK


def cmd_build_db(args) -> int:
    papers = database.read_papers(args.papers)
    if args.spans:
        stream = database.read_span_records(args.spans)
    else:
        report = extraction.ExtractionReport()
        stream = (
            span.to_record()
            for span in extraction.extract_corpus(
                extraction.read_sentences(args.sentences), report=report
            )
        )
    db = database.build(stream, papers)
    database.save(db, args.out)
    r = db.build_report
    print(f"wrote {args.out}")
    print(f"spans: {r.spans}")
    print(f"cited papers: {r.cited_papers}")
    print(f"avg tokens per span: {r.avg_span_tokens:.2f}")
    print(f"citation occurrences: {r.citation_occurrences} (dropped: {r.dropped_citations})")
    if r.spans == 0:
        print("warning: database is empty", file=sys.stderr)
    return EXIT_OK


def cmd_recommend(args) -> int:
    config = _config_from_args(args)
    db = _load_db(args.db)
    provider = provider_from_config(config)
    result = run_query(db, config, args.query, k=args.k, provider=provider)
    if args.json:
        print(to_json(payload(result)))
        return EXIT_OK
    print(f"query: {args.query}")
    print(f"route: {result.ranked.route_label()}")
    if not result.recommendations:
        print("no recommendations")
        return EXIT_OK
    for rec in result.recommendations:
        meta = rec.paper
        year = meta.year if meta.year else "????"
        print(f"{rec.rank:3d}. [{year}] {meta.title or meta.paper_id}")
        print(f"     evidence: {rec.evidence_span}")
        print(f"     best rank {rec.explain['p_r']}, support {rec.explain['p_s']}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    config = _config_from_args(args)
    db = _load_db(args.db)
    provider = provider_from_config(config)
    datapoints = load_eval_file(args.eval_file)
    kept = filter_eval_candidates(datapoints, db)
    if len(kept) < len(datapoints):
        print(f"filtered {len(datapoints) - len(kept)} datapoints with no paper in the database",
              file=sys.stderr)
    report = evaluate(db, config, kept, provider=provider)
    if args.json:
        print(to_json(report.to_dict()))
    else:
        print(f"strategy: {config.strategy.value}")
        print(format_report(report))
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    config = _config_from_args(args)
    db = _load_db(args.db)
    serve(db, config, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evicite", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract evidence spans from parsed sentences")
    p.add_argument("--sentences", required=True, help="parsed-sentence file (jsonl)")
    p.add_argument("--out", required=True, help="output span file (jsonl)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("build-db", help="build an evidence database")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--sentences", help="parsed-sentence file (jsonl)")
    src.add_argument("--spans", help="pre-extracted span file (jsonl)")
    p.add_argument("--papers", required=True, help="paper metadata file (jsonl)")
    p.add_argument("--out", required=True, help="database file to write")
    p.set_defaults(func=cmd_build_db)

    p = sub.add_parser("recommend", help="rank citation recommendations for a query")
    p.add_argument("query")
    p.add_argument("--db", required=True, help="database file")
    p.add_argument("-k", type=int, default=None, help="number of results")
    p.add_argument("--json", action="store_true", help="emit the wire-format payload")
    p.add_argument("--ablate", type=Strategy, choices=list(Strategy),
                   help="candidate-ordering strategy override")
    _add_config_flags(p)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("evaluate", help="compute MRR and Recall@N over an eval set")
    p.add_argument("--db", required=True, help="database file")
    p.add_argument("--eval-file", required=True, help="eval set (jsonl)")
    p.add_argument("--json", action="store_true", help="emit the machine-readable report")
    p.add_argument("--ablate", type=Strategy, choices=list(Strategy),
                   help="candidate-ordering strategy to evaluate")
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--db", required=True, help="database file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8040)
    _add_config_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DatabaseLoadError, EmbeddingUnavailableError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
