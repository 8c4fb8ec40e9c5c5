"""Command line: finetune the generator, sample queries, export embeddings.

Outputs are the retrieval engine's interchange artifacts (genq JSONL and
binary embedding stores), so everything written here feeds straight into
the ``xqg`` pipeline.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import FinetuneConfig, GenerationConfig, normalize_code
from .demo import QUERY_WORDS, build_demo_corpus, build_demo_pairs
from .export import export_embeddings
from .finetune import finetune_xqg
from .generate import generate_queries
from .io import (
    read_corpus,
    read_eval_queries,
    read_train_pairs,
    write_corpus,
    write_train_pairs,
)
from .model import load_checkpoint


def _langs(raw: str) -> tuple[str, ...]:
    return tuple(normalize_code(c) for c in raw.split(",") if c.strip())


def _cmd_finetune(args) -> None:
    pairs = read_train_pairs(args.pairs)
    config = FinetuneConfig(
        languages=_langs(args.langs),
        steps=args.steps,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        d_model=args.d_model,
        seed=args.seed,
    )
    out = finetune_xqg(pairs, config, args.out)
    print(f"checkpoint -> {out}")


def _cmd_generate(args) -> None:
    model = load_checkpoint(args.checkpoint)
    corpus = read_corpus(args.corpus)
    config = GenerationConfig(
        languages=_langs(args.langs),
        samples_per_language=args.n,
        top_k=args.top_k,
        seed=args.seed,
    )
    records = generate_queries(model, corpus, config, args.out)
    print(f"{len(records)} generated queries -> {args.out}")


def _cmd_export(args) -> None:
    if args.kind == "passage":
        docs = read_corpus(args.input)
        items = [(d.id, f"{d.title} {d.text}" if d.title else d.text) for d in docs]
    elif args.kind == "genq":
        import json

        items = []
        with open(args.input, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                obj = json.loads(line)
                eid = f"genq::{obj['passage_id']}::{obj['lang']}::{obj['sample_index']}"
                items.append((eid, obj["query"]))
    elif args.kind == "query":
        items = [(f"evalq::{qid}", text) for qid, _lang, text in read_eval_queries(args.input)]
    else:
        raise ValueError(f"unknown --kind {args.kind!r}")
    count = export_embeddings(args.encoder, items, args.out, seed=args.seed)
    print(f"{count} embeddings -> {args.out}")


def _cmd_demo_data(args) -> None:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    corpus = build_demo_corpus(args.passages, seed=args.seed)
    langs = _langs(args.langs)
    for lang in langs:
        if lang not in QUERY_WORDS:
            raise ValueError(f"no demo word pool for language {lang!r}")
    pairs = build_demo_pairs(corpus, langs, args.pairs_per_lang, seed=args.seed)
    write_corpus(corpus, outdir / "corpus.jsonl")
    write_train_pairs(pairs, outdir / "pairs.jsonl")
    print(f"{len(corpus)} passages, {len(pairs)} pairs -> {outdir}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="genkit", description="query generation and embedding export"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("finetune", help="train the query generator on labelled pairs")
    p.add_argument("--pairs", required=True, help="JSONL with query/lang/passage fields")
    p.add_argument("--out", required=True, help="checkpoint directory")
    p.add_argument("--langs", default="Ar,Bn,Fi,Ja,Ko,Ru,Te")
    p.add_argument("--steps", type=int, default=400)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--lr", type=float, default=3e-3)
    p.add_argument("--d-model", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_finetune)

    p = sub.add_parser("generate", help="sample queries per passage and language")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--langs", default="Ar,Bn,Fi,Ja,Ko,Ru,Te")
    p.add_argument("--n", type=int, default=5, help="samples per language")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_generate)

    p = sub.add_parser("export", help="export embeddings to a binary store")
    p.add_argument("--encoder", required=True,
                   help="checkpoint dir, 'tiny', or a cached pretrained name")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("passage", "genq", "query"), default="passage")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_export)

    p = sub.add_parser("demo-data", help="write a desk-scale corpus and training pairs")
    p.add_argument("--outdir", required=True)
    p.add_argument("--passages", type=int, default=50)
    p.add_argument("--langs", default="Ja,Ru,Ar")
    p.add_argument("--pairs-per-lang", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_demo_data)

    args = parser.parse_args(argv)
    try:
        args.run(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
