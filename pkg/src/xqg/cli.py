"""Command-line pipeline: encode, augment, index, search, eval, sweep, matrix, synth.

All commands are deterministic given their inputs and flags; every source
of randomness takes an explicit seed. Options may also be supplied through
a JSON config file (``xqg.json`` in the working directory, or ``--config``)
with one section per subcommand; explicit flags win over config values and
unknown config keys are rejected before any work starts. ``XQG_THREADS``
serves as the fallback for ``--threads``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import formats
from .augment import augment_corpus
from .core import (
    AugmentationConfig,
    LanguageTag,
    genq_embedding_id,
    query_embedding_id,
)
from .encoder import EmbeddingStore, HashEncoderConfig, encode_text
from .evaluation import (
    SignificanceReport,
    recall_at_kilotokens,
    render_table,
    write_report_json,
)
from .experiments import (
    SweepSpec,
    SyntheticWorldSpec,
    cross_language_matrix,
    generate_synthetic_world,
    run_sweep,
    write_world,
)
from .index import build_exact, build_ivf, read_index, search, write_index

CONFIG_FILE = "xqg.json"
THREADS_ENV = "XQG_THREADS"


class CliError(Exception):
    """Invalid invocation or configuration; maps to exit code 1."""


def _parse_bool(raw: object) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("true", "1", "yes", "on"):
        return True
    if text in ("false", "0", "no", "off"):
        return False
    raise CliError(f"expected a boolean, got {raw!r}")


def _parse_float_list(raw: object) -> tuple[float, ...]:
    if isinstance(raw, (list, tuple)):
        return tuple(float(v) for v in raw)
    parts = [p.strip() for p in str(raw).split(",") if p.strip() != ""]
    return tuple(float(p) for p in parts)


def _parse_int_list(raw: object) -> tuple[int, ...]:
    if isinstance(raw, (list, tuple)):
        return tuple(int(v) for v in raw)
    return tuple(int(p.strip()) for p in str(raw).split(",") if p.strip() != "")


def _parse_str_list(raw: object) -> tuple[str, ...]:
    """Comma-separated list; an empty string yields the empty tuple."""
    if isinstance(raw, (list, tuple)):
        return tuple(str(v) for v in raw)
    text = str(raw)
    if text.strip() == "":
        return ()
    return tuple(p.strip() for p in text.split(","))


@dataclass(frozen=True)
class Option:
    name: str  # flag without leading dashes; dest uses underscores
    convert: Callable[[object], object]
    default: object = None
    required: bool = False
    help: str = ""
    is_flag: bool = False  # boolean option rendered as --name / --no-name

    @property
    def dest(self) -> str:
        return self.name.replace("-", "_")


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    options: tuple[Option, ...]
    run: Callable[[argparse.Namespace], None] = field(compare=False, default=None)  # type: ignore[assignment]


def _opt_str(name: str, **kw) -> Option:
    return Option(name=name, convert=str, **kw)


def _opt_int(name: str, **kw) -> Option:
    return Option(name=name, convert=lambda v: int(str(v)), **kw)


def _opt_float(name: str, **kw) -> Option:
    return Option(name=name, convert=lambda v: float(str(v)), **kw)


def _opt_flag(name: str, default: bool, help: str = "") -> Option:
    return Option(name=name, convert=_parse_bool, default=default, help=help, is_flag=True)


_THREADS_OPT = _opt_int("threads", default=None, help="worker threads (default: XQG_THREADS or logical cores)")


def _resolve_threads(value: object) -> int:
    if value is None:
        env = os.environ.get(THREADS_ENV)
        if env is not None:
            try:
                value = int(env)
            except ValueError:
                raise CliError(f"{THREADS_ENV} must be an integer, got {env!r}")
        else:
            value = os.cpu_count() or 1
    threads = int(value)  # type: ignore[arg-type]
    if threads < 1:
        raise CliError(f"threads must be >= 1, got {threads}")
    return threads


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{what} not found: {path}")
    return p


def _load_stores(paths: Sequence[str]) -> EmbeddingStore:
    """Read and merge stores; duplicate paths are read once."""
    unique: list[str] = []
    for p in paths:
        if p and p not in unique:
            unique.append(p)
    if not unique:
        raise CliError("no embedding store given")
    stores = [formats.read_embeddings(_require_file(p, "embedding store")) for p in unique]
    return stores[0] if len(stores) == 1 else EmbeddingStore.merge(stores)


def _parse_languages(raw: tuple[str, ...]) -> tuple[LanguageTag, ...]:
    return tuple(LanguageTag.parse(code) for code in raw)


# --- commands ---------------------------------------------------------------


def _cmd_encode(args: argparse.Namespace) -> None:
    cfg = HashEncoderConfig(dim=args.dim, seed=args.seed, lowercase=args.lowercase)
    path = _require_file(args.input, "input file")
    store = EmbeddingStore(cfg.dim)
    if args.kind == "passage":
        for p in formats.read_corpus(path):
            text = f"{p.title} {p.text}" if p.title else p.text
            store.add(p.id, encode_text(cfg, text))
    elif args.kind == "genq":
        corpus_ids = None
        if args.corpus:
            corpus_ids = {p.id for p in formats.read_corpus(_require_file(args.corpus, "corpus"))}
        for gq in formats.read_generated_queries(path, corpus_ids):
            store.add(
                genq_embedding_id(gq.passage_id, gq.lang, gq.sample_index),
                encode_text(cfg, gq.text),
            )
    elif args.kind == "query":
        for q in formats.read_eval_queries(path):
            store.add(query_embedding_id(q.qid), encode_text(cfg, q.text))
    else:
        raise CliError(f"unknown --kind {args.kind!r} (expected passage, genq or query)")
    formats.write_embeddings(store, args.out)
    formats.read_embeddings(args.out)  # validate what we wrote
    print(f"encoded {len(store)} texts (dim {cfg.dim}) -> {args.out}")


def _cmd_augment(args: argparse.Namespace) -> None:
    corpus = formats.read_corpus(_require_file(args.corpus, "corpus"))
    genq = formats.read_generated_queries(
        _require_file(args.genq, "generated queries"), {p.id for p in corpus}
    )
    store = _load_stores([args.passage_store, args.genq_store])
    if args.normalize_stores:
        store = store.normalized()
    cfg = AugmentationConfig(
        alpha=args.alpha,
        languages=_parse_languages(args.langs),
        queries_per_language=args.n,
    )
    augmented = augment_corpus(
        corpus, store, genq, cfg,
        renormalize=args.renormalize, threads=_resolve_threads(args.threads),
    )
    formats.write_embeddings(augmented.to_store(), args.out)
    formats.read_embeddings(args.out)
    if augmented.unaugmented_count:
        print(
            f"warning: {augmented.unaugmented_count} passages had no selected "
            f"generated queries (scaled by 1 - alpha)",
            file=sys.stderr,
        )
    print(f"augmented {len(corpus)} passages (alpha={cfg.alpha}) -> {args.out}")


def _cmd_index(args: argparse.Namespace) -> None:
    store = formats.read_embeddings(_require_file(args.store, "embedding store"))
    if args.normalize:
        store = store.normalized()  # inner product over unit vectors = cosine
    if args.variant == "exact":
        index = build_exact(store)
    elif args.variant == "ivf":
        if args.nlist is None:
            raise CliError("--nlist is required for the ivf variant")
        index = build_ivf(
            store, nlist=args.nlist, kmeans_iters=args.kmeans_iters,
            seed=args.seed, default_nprobe=args.nprobe_default,
        )
    else:
        raise CliError(f"unknown --variant {args.variant!r} (expected exact or ivf)")
    write_index(index, args.out)
    read_index(args.out)
    print(f"built {args.variant} index over {len(index)} vectors -> {args.out}")


def _cmd_search(args: argparse.Namespace) -> None:
    index = read_index(_require_file(args.index, "index"))
    queries = formats.read_eval_queries(_require_file(args.queries, "eval queries"))
    qstore = formats.read_embeddings(_require_file(args.query_store, "query store"))
    runs = [
        search(index, qstore.get(query_embedding_id(q.qid)), args.k,
               nprobe=args.nprobe, qid=q.qid)
        for q in queries
    ]
    formats.write_run(runs, args.tag, args.out)
    formats.read_run(args.out)
    print(f"searched {len(queries)} queries (k={args.k}) -> {args.out}")


def _cmd_eval(args: argparse.Namespace) -> None:
    corpus = formats.read_corpus(_require_file(args.corpus, "corpus"))
    queries = formats.read_eval_queries(_require_file(args.queries, "eval queries"))
    run = formats.read_run(_require_file(args.run, "run file"))
    report = recall_at_kilotokens(run, corpus, queries, args.m)
    rows = [(args.label, report)]
    significance = None
    if args.baseline_run:
        base = formats.read_run(_require_file(args.baseline_run, "baseline run"))
        base_report = recall_at_kilotokens(base, corpus, queries, args.m)
        rows.insert(0, (args.baseline_label, base_report))
        langs = sorted(report.per_language)
        significance = SignificanceReport.from_pairs(
            (
                (lang.code, report.successes_for(lang), base_report.successes_for(lang))
                for lang in langs
            ),
            num_comparisons=len(langs),
        )
    print(render_table(rows), end="")
    if significance is not None:
        for c in significance.comparisons:
            marker = "*" if c.significant else " "
            print(f"{c.label}: t={c.t_statistic:+.4f} p={c.p_raw:.6f} "
                  f"corrected={c.p_corrected:.6f} {marker}")
    if args.report:
        write_report_json(args.report, [r for _, r in rows], significance)
        print(f"report -> {args.report}")


def _sweep_spec_from_args(args: argparse.Namespace) -> SweepSpec:
    fixed = AugmentationConfig(
        alpha=args.alpha,
        languages=_parse_languages(args.langs),
        queries_per_language=args.n,
    )
    if args.variable == "alpha":
        grid: tuple = _parse_float_list(args.grid)
    elif args.variable == "n_queries":
        grid = _parse_int_list(args.grid)
    elif args.variable == "source_language":
        codes = _parse_str_list(args.grid)
        if "" not in codes:
            codes = ("",) + codes  # baseline row is implicit for language sweeps
        grid = codes
    else:
        raise CliError(f"unknown --variable {args.variable!r}")
    return SweepSpec(
        variable=args.variable, grid=grid, fixed=fixed,
        m_tokens_list=_parse_int_list(args.m_list), k=args.k,
    )


def _cmd_sweep(args: argparse.Namespace) -> None:
    corpus = formats.read_corpus(_require_file(args.corpus, "corpus"))
    genq = formats.read_generated_queries(
        _require_file(args.genq, "generated queries"), {p.id for p in corpus}
    )
    store = _load_stores([args.passage_store, args.genq_store, args.query_store])
    queries = formats.read_eval_queries(_require_file(args.queries, "eval queries"))
    spec = _sweep_spec_from_args(args)
    result = run_sweep(spec, corpus, genq, store, queries,
                       threads=_resolve_threads(args.threads))
    out = Path(args.out) if args.out else Path(f"sweep_{spec.variable}.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(
        json.dumps(result.to_json_dict(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    print(f"sweep over {spec.variable} ({len(spec.grid)} points) -> {out}")
    if args.figure:
        from .plots import plot_sweep

        fig_path = out.with_suffix(".png")
        plot_sweep(result, fig_path)
        print(f"figure -> {fig_path}")


def _cmd_matrix(args: argparse.Namespace) -> None:
    corpus = formats.read_corpus(_require_file(args.corpus, "corpus"))
    genq = formats.read_generated_queries(
        _require_file(args.genq, "generated queries"), {p.id for p in corpus}
    )
    store = _load_stores([args.passage_store, args.genq_store, args.query_store])
    queries = formats.read_eval_queries(_require_file(args.queries, "eval queries"))
    matrix = cross_language_matrix(
        corpus, genq, store, queries,
        alpha_grid=_parse_float_list(args.alpha_grid),
        queries_per_language=args.n,
        m_tokens=args.m, k=args.k, threads=_resolve_threads(args.threads),
    )
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = "matrix_" + matrix.metric.lower().replace("@", "")
    (outdir / f"{stem}.json").write_text(
        json.dumps(matrix.to_json_dict(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    for alpha in matrix.alpha_grid:
        (outdir / f"{stem}_alpha{alpha:g}.csv").write_text(
            matrix.csv_for_alpha(alpha), encoding="utf-8"
        )
    print(f"matrix ({len(matrix.targets)}x{len(matrix.sources)}, "
          f"{len(matrix.alpha_grid)} alphas) -> {outdir}")
    if args.figure:
        from .plots import plot_matrix

        plot_matrix(matrix, outdir / f"{stem}.png")
        print(f"figure -> {outdir / (stem + '.png')}")


def _cmd_synth(args: argparse.Namespace) -> None:
    spec = SyntheticWorldSpec(
        num_passages=args.passages,
        vocab_per_language=args.vocab,
        languages=_parse_languages(args.languages),
        query_noise=args.noise,
        offset_scale=args.offset,
        seed=args.seed,
        dim=args.dim,
        encoder_seed=args.encoder_seed,
        passage_tokens=args.passage_tokens,
        query_tokens=args.query_tokens,
        samples_per_language=args.samples,
        queries_per_language=args.queries_per_lang,
        num_topics=args.topics,
        topic_vocab=args.topic_vocab,
        topic_fraction=args.topic_fraction,
        gap_heterogeneity=args.gap_heterogeneity,
        hallucination_per_noise=args.hallucination_per_noise,
        genq_norm=args.genq_norm,
    )
    world = generate_synthetic_world(spec)
    paths = write_world(world, args.outdir)
    for name, path in paths.items():
        print(f"{name} -> {path}")


COMMANDS: tuple[Command, ...] = (
    Command(
        "encode",
        "embed a corpus, generated-query or eval-query file with the hashing encoder",
        (
            _opt_str("input", required=True, help="corpus.jsonl, genq.jsonl or eval_queries.jsonl"),
            _opt_str("out", required=True, help="output .xqge store"),
            _opt_int("dim", default=64, help="embedding dimension"),
            _opt_int("seed", default=0, help="hashing seed"),
            _opt_str("kind", default="passage", help="passage, genq or query"),
            _opt_str("corpus", default="", help="corpus for genq membership checking"),
            _opt_flag("lowercase", True, "lowercase before tokenizing"),
        ),
        _cmd_encode,
    ),
    Command(
        "augment",
        "aggregate passage embeddings with generated-query embeddings",
        (
            _opt_str("corpus", required=True, help="corpus.jsonl"),
            _opt_str("genq", required=True, help="generated queries jsonl"),
            _opt_str("passage-store", required=True, help=".xqge with passage embeddings"),
            _opt_str("genq-store", required=True, help=".xqge with generated-query embeddings"),
            _opt_float("alpha", required=True, help="augmentation ratio in [0, 1]"),
            Option("langs", _parse_str_list, default=(), help="comma-separated source languages"),
            _opt_int("n", default=0, help="generated queries per language"),
            _opt_str("out", required=True, help="output .xqge store"),
            _opt_flag("renormalize", False, "L2-normalize augmented vectors"),
            _opt_flag("normalize-stores", False, "L2-normalize input vectors before aggregating"),
            _THREADS_OPT,
        ),
        _cmd_augment,
    ),
    Command(
        "index",
        "build a search index from an embedding store",
        (
            _opt_str("store", required=True, help=".xqge embeddings to index"),
            _opt_str("out", required=True, help="output .xqgi index"),
            _opt_str("variant", default="exact", help="exact or ivf"),
            _opt_int("nlist", default=None, help="ivf: number of clusters"),
            _opt_int("kmeans-iters", default=10, help="ivf: Lloyd iterations"),
            _opt_int("seed", default=0, help="ivf: clustering seed"),
            _opt_int("nprobe-default", default=None, help="ivf: default probe count"),
            _opt_flag("normalize", False, "L2-normalize vectors before indexing (cosine ranking)"),
        ),
        _cmd_index,
    ),
    Command(
        "search",
        "run queries against an index, writing a TREC run file",
        (
            _opt_str("index", required=True, help=".xqgi index"),
            _opt_str("queries", required=True, help="eval_queries.jsonl"),
            _opt_str("query-store", required=True, help=".xqge with evalq:: embeddings"),
            _opt_int("k", default=100, help="results per query"),
            _opt_int("nprobe", default=None, help="ivf probe count"),
            _opt_str("tag", default="xqg", help="run tag"),
            _opt_str("out", required=True, help="output run file"),
        ),
        _cmd_search,
    ),
    Command(
        "eval",
        "score a run file with recall at m tokens",
        (
            _opt_str("run", required=True, help="run file to score"),
            _opt_str("corpus", required=True, help="corpus.jsonl"),
            _opt_str("queries", required=True, help="eval_queries.jsonl"),
            _opt_int("m", default=2000, help="token budget"),
            _opt_str("label", default="run", help="row label for the table"),
            _opt_str("baseline-run", default="", help="optional baseline run for significance"),
            _opt_str("baseline-label", default="baseline", help="baseline row label"),
            _opt_str("report", default="", help="optional JSON report path"),
        ),
        _cmd_eval,
    ),
    Command(
        "sweep",
        "sweep alpha, query count or source language and test against baseline",
        (
            _opt_str("variable", required=True, help="alpha, n_queries or source_language"),
            _opt_str("grid", required=True, help="comma-separated grid values"),
            _opt_str("corpus", required=True, help="corpus.jsonl"),
            _opt_str("genq", required=True, help="generated queries jsonl"),
            _opt_str("queries", required=True, help="eval_queries.jsonl"),
            _opt_str("passage-store", required=True, help=".xqge with passage embeddings"),
            _opt_str("genq-store", required=True, help=".xqge with genq:: embeddings"),
            _opt_str("query-store", required=True, help=".xqge with evalq:: embeddings"),
            _opt_float("alpha", default=0.01, help="fixed alpha when not swept"),
            Option("langs", _parse_str_list, default=(), help="fixed source languages"),
            _opt_int("n", default=5, help="fixed queries per language"),
            _opt_int("k", default=100, help="search depth"),
            _opt_str("m-list", default="2000,5000", help="token budgets"),
            _opt_str("out", default="", help="output JSON (default sweep_<variable>.json)"),
            _opt_flag("figure", True, "render a PNG next to the JSON"),
            _THREADS_OPT,
        ),
        _cmd_sweep,
    ),
    Command(
        "matrix",
        "source-by-target language matrix of recall over an alpha grid",
        (
            _opt_str("corpus", required=True, help="corpus.jsonl"),
            _opt_str("genq", required=True, help="generated queries jsonl"),
            _opt_str("queries", required=True, help="eval_queries.jsonl"),
            _opt_str("passage-store", required=True, help=".xqge with passage embeddings"),
            _opt_str("genq-store", required=True, help=".xqge with genq:: embeddings"),
            _opt_str("query-store", required=True, help=".xqge with evalq:: embeddings"),
            Option("alpha-grid", _parse_float_list,
                   default=(0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1),
                   help="alpha grid starting at 0"),
            _opt_int("n", default=5, help="queries per language"),
            _opt_int("k", default=100, help="search depth"),
            _opt_int("m", default=2000, help="token budget"),
            _opt_str("outdir", required=True, help="output directory"),
            _opt_flag("figure", True, "render a PNG grid"),
            _THREADS_OPT,
        ),
        _cmd_matrix,
    ),
    Command(
        "synth",
        "generate the seeded synthetic cross-lingual world",
        (
            _opt_str("outdir", required=True, help="output directory"),
            _opt_int("passages", default=1000, help="corpus size"),
            _opt_int("vocab", default=200, help="vocabulary size per language"),
            Option("languages", _parse_str_list, default=("Ar", "Ja", "Ru"),
                   help="comma-separated query languages"),
            _opt_float("noise", default=0.1, help="query noise scale"),
            _opt_float("offset", default=2.0, help="language offset scale"),
            _opt_int("seed", default=7, help="world seed"),
            _opt_int("dim", default=64, help="embedding dimension"),
            _opt_int("encoder-seed", default=0, help="hashing encoder seed"),
            _opt_int("passage-tokens", default=120, help="tokens per passage"),
            _opt_int("query-tokens", default=8, help="tokens per query text"),
            _opt_int("samples", default=5, help="generated queries per language"),
            _opt_int("queries-per-lang", default=100, help="eval queries per language"),
            _opt_int("topics", default=100, help="topic clusters"),
            _opt_int("topic-vocab", default=50, help="tokens per topic vocabulary"),
            _opt_float("topic-fraction", default=0.7, help="topical token fraction"),
            _opt_float("gap-heterogeneity", default=1.0, help="topic tilt of the language gap"),
            _opt_float("hallucination-per-noise", default=4.0,
                       help="off-target generation rate per unit noise"),
            _opt_float("genq-norm", default=4.0, help="generated-query embedding norm"),
        ),
        _cmd_synth,
    ),
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xqg",
        description="cross-lingual dense retrieval with generated-query augmentation",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for cmd in COMMANDS:
        p = sub.add_parser(cmd.name, help=cmd.help)
        p.add_argument("--config", default=None, help=f"JSON config file (default: ./{CONFIG_FILE} if present)")
        for opt in cmd.options:
            flag = f"--{opt.name}"
            if opt.is_flag:
                p.add_argument(flag, dest=opt.dest, action="store_true", default=argparse.SUPPRESS,
                               help=opt.help)
                p.add_argument(f"--no-{opt.name}", dest=opt.dest, action="store_false",
                               default=argparse.SUPPRESS, help=f"disable {flag}")
            else:
                p.add_argument(flag, dest=opt.dest, default=argparse.SUPPRESS, help=opt.help)
    return parser


def _load_config(path: str | None, command: str) -> dict:
    """Read the config section for a command, validating keys."""
    explicit = path is not None
    cfg_path = Path(path) if explicit else Path(CONFIG_FILE)
    if not cfg_path.is_file():
        if explicit:
            raise CliError(f"config file not found: {cfg_path}")
        return {}
    try:
        data = json.loads(cfg_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"{cfg_path}: invalid JSON ({exc.msg})")
    if not isinstance(data, dict):
        raise CliError(f"{cfg_path}: top level must be an object of command sections")
    known_commands = {c.name for c in COMMANDS}
    for key in data:
        if key not in known_commands:
            raise CliError(f"{cfg_path}: unknown section {key!r}")
    section = data.get(command, {})
    if not isinstance(section, dict):
        raise CliError(f"{cfg_path}: section {command!r} must be an object")
    return section


def _resolve_args(cmd: Command, argv_ns: argparse.Namespace) -> argparse.Namespace:
    """Merge defaults, config-file values and explicit flags (flags win)."""
    section = _load_config(getattr(argv_ns, "config", None), cmd.name)
    by_dest = {opt.dest: opt for opt in cmd.options}
    unknown = [k for k in section if k.replace("-", "_") not in by_dest]
    if unknown:
        raise CliError(f"config section {cmd.name!r}: unknown keys {sorted(unknown)}")

    resolved = argparse.Namespace()
    for opt in cmd.options:
        if hasattr(argv_ns, opt.dest):
            raw = getattr(argv_ns, opt.dest)
            value = raw if opt.is_flag else opt.convert(raw)
        else:
            in_config = [k for k in section if k.replace("-", "_") == opt.dest]
            if in_config:
                value = opt.convert(section[in_config[0]])
            elif opt.required:
                raise CliError(f"missing required option --{opt.name}")
            else:
                value = opt.default
        setattr(resolved, opt.dest, value)
    return resolved


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    cmd = next(c for c in COMMANDS if c.name == ns.command)
    try:
        args = _resolve_args(cmd, ns)
        cmd.run(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
