"""Ingestion commands: filter a dump by topic, parse it into sentence and
paper files, build embedding caches, and serve embeddings over HTTP."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .cache import embed_spans, write_binary, write_jsonl
from .encoder import EncoderUnavailableError, make_encoder
from .parse import read_dump, write_outputs
from .topic_filter import filter_by_topic


def cmd_filter(args) -> int:
    kept = 0
    with open(args.out, "w", encoding="utf-8") as fh:
        for paper in filter_by_topic(read_dump(args.dump), args.topic, args.abbrev):
            record = {
                "paper_id": paper.paper_id,
                "title": paper.title,
                "abstract": paper.abstract,
                "year": paper.year,
                "venue": paper.venue,
                "authors": paper.authors,
                "body_sentences": paper.body_sentences,
                "bibliography": paper.bibliography,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            kept += 1
    print(f"kept {kept} papers for topic {args.topic!r}")
    return 0


def cmd_parse(args) -> int:
    diagnostics = write_outputs(read_dump(args.dump), args.out_sentences, args.out_papers)
    print(f"sentences: {diagnostics.sentences_emitted} emitted "
          f"({diagnostics.sentences_without_citations} without citations, "
          f"{diagnostics.sentences_failed} failed)")
    print(f"unresolved marker ids: {diagnostics.marker_ids_unresolved}")
    if args.diagnostics:
        with open(args.diagnostics, "w", encoding="utf-8") as fh:
            json.dump(diagnostics.to_dict(), fh, indent=2)
        print(f"diagnostics written to {args.diagnostics}")
    return 0


def _iter_texts(args):
    if args.spans:
        with open(args.spans, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)["span_text"]
    else:
        with open(args.texts, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield line


def cmd_embed(args) -> int:
    encoder = make_encoder(args.encoder)
    entries = embed_spans(_iter_texts(args), encoder)
    if args.binary:
        write_binary(args.out, entries)
    else:
        write_jsonl(args.out, entries)
    print(f"wrote {len(entries)} embeddings to {args.out}")
    return 0


def cmd_serve(args) -> int:
    from .provider import serve

    serve(make_encoder(args.encoder), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evicite-ingest", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="keep papers whose abstract mentions a topic")
    p.add_argument("--dump", required=True, help="raw paper dump (jsonl)")
    p.add_argument("--topic", required=True)
    p.add_argument("--abbrev", action="append", default=[],
                   help="topic abbreviation (repeatable)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("parse", help="dump -> parsed sentences + cited-paper table")
    p.add_argument("--dump", required=True)
    p.add_argument("--out-sentences", required=True)
    p.add_argument("--out-papers", required=True)
    p.add_argument("--diagnostics", help="write run counters to this JSON file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("embed", help="build an embedding cache file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spans", help="extracted-span file (jsonl with span_text)")
    src.add_argument("--texts", help="plain text file, one span per line")
    p.add_argument("--out", required=True)
    p.add_argument("--encoder", default="hashing",
                   help="hashing | hashing:<seed> | transformer:<model-path>")
    p.add_argument("--binary", action="store_true", help="write the binary cache form")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("serve", help="serve embeddings over HTTP")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8041)
    p.add_argument("--encoder", default="hashing")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EncoderUnavailableError as exc:
        print(f"provider unavailable: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
