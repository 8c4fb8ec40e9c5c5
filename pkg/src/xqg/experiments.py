"""Scripted experiments: parameter sweeps, the source-by-target language
matrix, and a fully seeded synthetic cross-lingual world.

The synthetic world models the cross-lingual retrieval problem at desk
scale: an English-like corpus with topical clusters, evaluation queries
whose embeddings sit away from their passages along per-(topic, language)
gap directions, and generated-query embeddings near those same gap images
(with sample noise and occasional off-target generations). A fixed seed
pins every byte of it, so measured recall gains are frozen as regression
thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .augment import augment_corpus
from .core import (
    AugmentationConfig,
    EvalQuery,
    GeneratedQuery,
    GeneratedQuerySet,
    LanguageTag,
    Passage,
    genq_embedding_id,
    query_embedding_id,
)
from .encoder import EmbeddingStore, HashEncoderConfig, encode_text
from .evaluation import MetricReport, SignificanceReport, recall_at_kilotokens
from .index import build_exact, search

__all__ = [
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "run_sweep",
    "CrossLanguageMatrix",
    "cross_language_matrix",
    "SyntheticWorldSpec",
    "SyntheticWorld",
    "generate_synthetic_world",
    "write_world",
]

SWEEP_VARIABLES = ("alpha", "n_queries", "source_language")


@dataclass(frozen=True)
class SweepSpec:
    """One swept knob over a grid, all other knobs fixed.

    The grid must contain the no-augmentation baseline (0 for numeric
    variables, "" for source_language) and be strictly increasing for
    numeric variables.
    """

    variable: str
    grid: tuple
    fixed: AugmentationConfig
    m_tokens_list: tuple[int, ...] = (2000, 5000)
    k: int = 100

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(
                f"SweepSpec.variable: must be one of {SWEEP_VARIABLES}, got {self.variable!r}"
            )
        object.__setattr__(self, "grid", tuple(self.grid))
        if not self.grid:
            raise ValueError("SweepSpec.grid: must be non-empty")
        if self.variable in ("alpha", "n_queries"):
            if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
                raise ValueError("SweepSpec.grid: must be strictly increasing")
            if self.grid[0] != 0:
                raise ValueError("SweepSpec.grid: must include the baseline value 0")
        else:
            if "" not in self.grid:
                raise ValueError('SweepSpec.grid: must include the baseline value ""')
            codes = [v for v in self.grid if v != ""]
            if len(set(codes)) != len(codes):
                raise ValueError("SweepSpec.grid: duplicate language codes")
        object.__setattr__(self, "m_tokens_list", tuple(self.m_tokens_list))
        if not self.m_tokens_list or any(m < 1 for m in self.m_tokens_list):
            raise ValueError("SweepSpec.m_tokens_list: requires positive token budgets")
        if len(set(self.m_tokens_list)) != len(self.m_tokens_list):
            raise ValueError("SweepSpec.m_tokens_list: duplicate budgets")
        if self.k < 1:
            raise ValueError(f"SweepSpec.k: must be >= 1, got {self.k}")

    def config_for(self, value) -> AugmentationConfig:
        if self.variable == "alpha":
            return replace(self.fixed, alpha=float(value))
        if self.variable == "n_queries":
            return replace(self.fixed, queries_per_language=int(value))
        if value == "":
            return replace(self.fixed, languages=())
        return replace(self.fixed, languages=(LanguageTag.parse(value),))

    @property
    def baseline_value(self):
        return "" if self.variable == "source_language" else type(self.grid[0])(0)


@dataclass(frozen=True)
class SweepRow:
    value: object
    metrics: Mapping[int, MetricReport]
    significance: Mapping[int, SignificanceReport]


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]

    def row_for(self, value) -> SweepRow:
        for row in self.rows:
            if row.value == value:
                return row
        raise KeyError(f"no sweep row for grid value {value!r}")

    def to_json_dict(self) -> dict:
        return {
            "variable": self.spec.variable,
            "grid": list(self.spec.grid),
            "m_tokens": list(self.spec.m_tokens_list),
            "k": self.spec.k,
            "fixed": {
                "alpha": self.spec.fixed.alpha,
                "languages": [lang.code for lang in self.spec.fixed.languages],
                "queries_per_language": self.spec.fixed.queries_per_language,
            },
            "rows": [
                {
                    "value": row.value,
                    "metrics": {
                        report.name: report.to_json_dict()
                        for report in row.metrics.values()
                    },
                    "significance": {
                        row.metrics[m].name: sig.to_json_dict()
                        for m, sig in row.significance.items()
                    },
                }
                for row in self.rows
            ],
        }


def _evaluate_config(
    corpus: Sequence[Passage],
    lookup: Mapping[str, Passage],
    store: EmbeddingStore,
    genq: GeneratedQuerySet,
    cfg: AugmentationConfig,
    queries: Sequence[EvalQuery],
    m_tokens_list: Sequence[int],
    k: int,
    threads: int,
) -> dict[int, MetricReport]:
    augmented = augment_corpus(corpus, store, genq, cfg, threads=threads)
    index = build_exact(augmented)
    run = [
        search(index, store.get(query_embedding_id(q.qid)), k, qid=q.qid)
        for q in queries
    ]
    return {
        m: recall_at_kilotokens(run, lookup, queries, m) for m in m_tokens_list
    }


def run_sweep(
    spec: SweepSpec,
    corpus: Sequence[Passage],
    genq: GeneratedQuerySet,
    store: EmbeddingStore,
    queries: Sequence[EvalQuery],
    threads: int = 1,
) -> SweepResult:
    """Evaluate every grid point and test each against the baseline point.

    Significance is computed per language on paired per-query success bits;
    the Bonferroni family is (non-baseline grid points) x (languages).
    """
    if not queries:
        raise ValueError("run_sweep: no evaluation queries")
    lookup = {p.id: p for p in corpus}
    languages = sorted({q.lang for q in queries})
    num_comparisons = (len(spec.grid) - 1) * len(languages)

    baseline = _evaluate_config(
        corpus, lookup, store, genq, spec.config_for(spec.baseline_value),
        queries, spec.m_tokens_list, spec.k, threads,
    )

    rows: list[SweepRow] = []
    for value in spec.grid:
        if value == spec.baseline_value:
            rows.append(SweepRow(value=value, metrics=baseline, significance={}))
            continue
        metrics = _evaluate_config(
            corpus, lookup, store, genq, spec.config_for(value),
            queries, spec.m_tokens_list, spec.k, threads,
        )
        significance = {
            m: SignificanceReport.from_pairs(
                (
                    (lang.code, metrics[m].successes_for(lang), baseline[m].successes_for(lang))
                    for lang in languages
                ),
                num_comparisons=num_comparisons,
            )
            for m in spec.m_tokens_list
        }
        rows.append(SweepRow(value=value, metrics=metrics, significance=significance))
    return SweepResult(spec=spec, rows=tuple(rows))


@dataclass(frozen=True)
class MatrixCell:
    alpha: float
    recall: float
    t_statistic: float | None
    p_corrected: float | None
    significant: bool | None


@dataclass(frozen=True)
class CrossLanguageMatrix:
    """Recall curves per (target language, source language) over alpha."""

    metric: str
    sources: tuple[LanguageTag, ...]
    targets: tuple[LanguageTag, ...]
    alpha_grid: tuple[float, ...]
    cells: Mapping[tuple[str, str], tuple[MatrixCell, ...]]  # (target, source)

    def cell(self, target: LanguageTag, source: LanguageTag) -> tuple[MatrixCell, ...]:
        return self.cells[(target.code, source.code)]

    def csv_for_alpha(self, alpha: float) -> str:
        """Rows are target languages, columns source languages."""
        if alpha not in self.alpha_grid:
            raise KeyError(f"alpha {alpha} not in grid {self.alpha_grid}")
        idx = self.alpha_grid.index(alpha)
        lines = ["target," + ",".join(s.code for s in self.sources)]
        for t in self.targets:
            cells = [f"{self.cells[(t.code, s.code)][idx].recall:.6f}" for s in self.sources]
            lines.append(t.code + "," + ",".join(cells))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "metric": self.metric,
            "sources": [s.code for s in self.sources],
            "targets": [t.code for t in self.targets],
            "alpha_grid": list(self.alpha_grid),
            "cells": {
                f"{t}|{s}": [
                    {
                        "alpha": c.alpha,
                        "recall": c.recall,
                        "t_statistic": c.t_statistic,
                        "p_corrected": c.p_corrected,
                        "significant": c.significant,
                    }
                    for c in curve
                ]
                for (t, s), curve in sorted(self.cells.items())
            },
        }


def cross_language_matrix(
    corpus: Sequence[Passage],
    genq: GeneratedQuerySet,
    store: EmbeddingStore,
    queries: Sequence[EvalQuery],
    alpha_grid: Sequence[float],
    queries_per_language: int,
    m_tokens: int = 2000,
    k: int = 100,
    threads: int = 1,
) -> CrossLanguageMatrix:
    """Augment with one source language at a time, evaluate per target language.

    Each (source, target) cell sweeps the alpha grid; significance inside a
    cell is Bonferroni-corrected over its non-baseline grid points.
    """
    alpha_grid = tuple(float(a) for a in alpha_grid)
    if not alpha_grid or alpha_grid[0] != 0.0 or any(
        b <= a for a, b in zip(alpha_grid, alpha_grid[1:])
    ):
        raise ValueError("alpha_grid: must start at 0 and increase strictly")
    sources = genq.languages()
    targets = tuple(sorted({q.lang for q in queries}))
    if len(sources) < 2 or len(targets) < 2:
        raise ValueError(
            f"cross_language_matrix: needs >= 2 source and target languages, "
            f"got {len(sources)} sources / {len(targets)} targets"
        )
    lookup = {p.id: p for p in corpus}
    by_target: dict[LanguageTag, list[EvalQuery]] = {}
    for q in queries:
        by_target.setdefault(q.lang, []).append(q)

    def evaluate(cfg: AugmentationConfig) -> dict[LanguageTag, MetricReport]:
        augmented = augment_corpus(corpus, store, genq, cfg, threads=threads)
        index = build_exact(augmented)
        out = {}
        for t in targets:
            subset = by_target[t]
            run = [
                search(index, store.get(query_embedding_id(q.qid)), k, qid=q.qid)
                for q in subset
            ]
            out[t] = recall_at_kilotokens(run, lookup, subset, m_tokens)
        return out

    base_cfg = AugmentationConfig(alpha=0.0, languages=(), queries_per_language=0)
    baseline = evaluate(base_cfg)
    num_comparisons = len(alpha_grid) - 1

    cells: dict[tuple[str, str], list[MatrixCell]] = {
        (t.code, s.code): [] for t in targets for s in sources
    }
    for s in sources:
        for alpha in alpha_grid:
            if alpha == 0.0:
                per_target = baseline
            else:
                cfg = AugmentationConfig(
                    alpha=alpha, languages=(s,), queries_per_language=queries_per_language
                )
                per_target = evaluate(cfg)
            for t in targets:
                report = per_target[t]
                if alpha == 0.0 or num_comparisons == 0:
                    cell = MatrixCell(alpha, report.per_language[t].recall, None, None, None)
                else:
                    sig = SignificanceReport.from_pairs(
                        [(t.code, report.successes_for(t), baseline[t].successes_for(t))],
                        num_comparisons=num_comparisons,
                    )
                    c = sig.comparisons[0]
                    cell = MatrixCell(
                        alpha,
                        report.per_language[t].recall,
                        c.t_statistic,
                        c.p_corrected,
                        c.significant,
                    )
                cells[(t.code, s.code)].append(cell)

    from .evaluation import metric_name

    return CrossLanguageMatrix(
        metric=metric_name(m_tokens),
        sources=sources,
        targets=targets,
        alpha_grid=alpha_grid,
        cells={key: tuple(curve) for key, curve in cells.items()},
    )


_WORLD_LANGUAGES = (LanguageTag("Ar"), LanguageTag("Ja"), LanguageTag("Ru"))


@dataclass(frozen=True)
class SyntheticWorldSpec:
    """Fully seeded description of the synthetic cross-lingual world.

    ``offset_scale`` sets the size of the language gap; ``query_noise``
    controls both per-sample jitter and (scaled by
    ``hallucination_per_noise``) the rate of off-target generations, so a
    zero-noise zero-offset world is perfectly aligned.
    """

    num_passages: int = 1000
    vocab_per_language: int = 200
    languages: tuple[LanguageTag, ...] = _WORLD_LANGUAGES
    query_noise: float = 0.1
    offset_scale: float = 2.0
    seed: int = 7
    dim: int = 64
    encoder_seed: int = 0
    passage_tokens: int = 120
    query_tokens: int = 8
    samples_per_language: int = 5
    queries_per_language: int = 100
    num_topics: int = 100
    topic_vocab: int = 50
    topic_fraction: float = 0.7
    gap_heterogeneity: float = 1.0
    hallucination_per_noise: float = 4.0
    genq_norm: float = 4.0

    def __post_init__(self) -> None:
        for name in (
            "num_passages",
            "vocab_per_language",
            "passage_tokens",
            "query_tokens",
            "queries_per_language",
            "num_topics",
            "topic_vocab",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"SyntheticWorldSpec.{name}: must be positive")
        if not self.languages:
            raise ValueError("SyntheticWorldSpec.languages: at least one language")
        if self.samples_per_language < 0:
            raise ValueError("SyntheticWorldSpec.samples_per_language: must be >= 0")
        if self.query_noise < 0 or self.offset_scale < 0:
            raise ValueError("SyntheticWorldSpec: noise and offset must be >= 0")
        if self.queries_per_language > self.num_passages:
            raise ValueError(
                "SyntheticWorldSpec.queries_per_language: cannot exceed num_passages"
            )
        if not (0.0 <= self.topic_fraction <= 1.0):
            raise ValueError("SyntheticWorldSpec.topic_fraction: must be in [0, 1]")
        if self.passage_tokens < 2:
            raise ValueError("SyntheticWorldSpec.passage_tokens: must be >= 2")


@dataclass(frozen=True, eq=False)
class SyntheticWorld:
    spec: SyntheticWorldSpec
    corpus: tuple[Passage, ...]
    genq: GeneratedQuerySet
    store: EmbeddingStore
    queries: tuple[EvalQuery, ...]


def _unit(v: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    return v / norm if norm > 0.0 else v


def generate_synthetic_world(spec: SyntheticWorldSpec) -> SyntheticWorld:
    """Build corpus, generated queries, embeddings and eval queries.

    Passage texts are topic-clustered token bags, each carrying one unique
    answer token. Query embeddings (both generated and evaluation) sit near
    the passage's gap image: the passage embedding shifted by
    ``offset_scale`` along a per-(topic, language) direction, then
    normalized. Generated-query embeddings add per-sample noise, are scaled
    by ``genq_norm`` and hallucinate (borrow another passage's image) at
    rate ``hallucination_per_noise * query_noise``. The draw order of the
    seeded generator is part of the contract: identical specs produce
    byte-identical worlds.
    """
    rng = np.random.default_rng(spec.seed)
    enc = HashEncoderConfig(dim=spec.dim, seed=spec.encoder_seed)
    langs = spec.languages

    # passages
    passages: list[Passage] = []
    topic_of: list[int] = []
    for i in range(spec.num_passages):
        topic = i % spec.num_topics
        topic_of.append(topic)
        tokens: list[str] = []
        for _ in range(spec.passage_tokens - 1):
            if rng.random() < spec.topic_fraction:
                tokens.append(f"c{topic}w{int(rng.integers(spec.topic_vocab))}")
            else:
                tokens.append(f"w{int(rng.integers(spec.vocab_per_language))}")
        pos = int(rng.integers(spec.passage_tokens))
        tokens.insert(pos, f"ans{i:04d}")
        passages.append(Passage(id=f"p{i:04d}", title="", text=" ".join(tokens)))

    p_vecs = np.stack([encode_text(enc, p.text) for p in passages]).astype(np.float64)

    # per-(topic, language) gap directions: the global language direction
    # tilted by a topic-specific unit vector from the same hashing scheme
    gap_dirs = np.zeros((spec.num_topics, len(langs), spec.dim))
    if spec.offset_scale > 0.0:
        for c in range(spec.num_topics):
            for ti, lang in enumerate(langs):
                u = encode_text(enc, lang.code).astype(np.float64)
                w = encode_text(enc, f"gap::c{c}::{lang.code}").astype(np.float64)
                gap_dirs[c, ti] = _unit(u + spec.gap_heterogeneity * w)

    def gap_image(i: int, ti: int) -> np.ndarray:
        if spec.offset_scale == 0.0:
            return p_vecs[i]
        return _unit(p_vecs[i] + spec.offset_scale * gap_dirs[topic_of[i], ti])

    # generated queries and their embeddings
    hallu_rate = min(1.0, spec.hallucination_per_noise * spec.query_noise)
    genq_items: list[GeneratedQuery] = []
    genq_vecs: list[tuple[str, np.ndarray]] = []
    for i, p in enumerate(passages):
        for ti, lang in enumerate(langs):
            for s in range(spec.samples_per_language):
                words = [
                    f"{lang.code.lower()}w{int(rng.integers(spec.vocab_per_language))}"
                    for _ in range(spec.query_tokens)
                ]
                base_row = i
                if rng.random() < hallu_rate:
                    base_row = int(rng.integers(spec.num_passages))
                noise = spec.query_noise * rng.standard_normal(spec.dim)
                vec = spec.genq_norm * (gap_image(base_row, ti) + noise)
                genq_items.append(
                    GeneratedQuery(
                        passage_id=p.id, lang=lang, text=" ".join(words), sample_index=s
                    )
                )
                genq_vecs.append((genq_embedding_id(p.id, lang, s), vec))

    # evaluation queries near their passage's gap image
    queries: list[EvalQuery] = []
    query_vecs: list[tuple[str, np.ndarray]] = []
    for ti, lang in enumerate(langs):
        chosen = rng.choice(spec.num_passages, size=spec.queries_per_language, replace=False)
        for serial, row in enumerate(chosen):
            row = int(row)
            words = [
                f"{lang.code.lower()}w{int(rng.integers(spec.vocab_per_language))}"
                for _ in range(spec.query_tokens)
            ]
            noise = spec.query_noise * rng.standard_normal(spec.dim)
            vec = gap_image(row, ti) + noise
            qid = f"{lang.code.lower()}{serial:04d}"
            queries.append(
                EvalQuery(
                    qid=qid,
                    lang=lang,
                    text=" ".join(words),
                    answers=(f"ans{row:04d}",),
                )
            )
            query_vecs.append((query_embedding_id(qid), vec))

    store = EmbeddingStore(spec.dim)
    for pid, vec in zip((p.id for p in passages), p_vecs):
        store.add(pid, vec)
    for eid, vec in genq_vecs:
        store.add(eid, vec)
    for eid, vec in query_vecs:
        store.add(eid, vec)

    return SyntheticWorld(
        spec=spec,
        corpus=tuple(passages),
        genq=GeneratedQuerySet(genq_items, corpus_ids=[p.id for p in passages]),
        store=store,
        queries=tuple(queries),
    )


def write_world(world: SyntheticWorld, outdir: str | Path) -> dict[str, Path]:
    """Write the world through the standard file formats."""
    from . import formats

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "corpus": outdir / "corpus.jsonl",
        "queries": outdir / "eval_queries.jsonl",
        "genq": outdir / "genq.jsonl",
        "store": outdir / "store.xqge",
    }
    formats.write_corpus(world.corpus, paths["corpus"])
    formats.write_eval_queries(world.queries, paths["queries"])
    formats.write_generated_queries(world.genq, paths["genq"])
    formats.write_embeddings(world.store, paths["store"])
    return paths
