"""Indexing-time augmentation of passage embeddings with generated queries.

The aggregation blends the original passage vector with the *sum* of its
generated-query vectors: ``(1 - alpha) * p + alpha * sum(q)``. The sum (not
the mean) is deliberate; useful alpha values are correspondingly small.
Accumulation runs in float64, left to right, and is rounded to float32 once,
so results are bit-reproducible at any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    AugmentationConfig,
    GeneratedQuerySet,
    Passage,
    as_embedding,
    genq_embedding_id,
)
from .encoder import EmbeddingStore

__all__ = ["AugmentedCorpusEmbeddings", "aggregate", "augment_corpus"]


@dataclass(frozen=True, eq=False)
class AugmentedCorpusEmbeddings:
    """Augmented vectors for a whole corpus, in corpus order.

    ``unaugmented_count`` reports how many passages had no selected
    generated queries (those are scaled by ``1 - alpha`` per the formula's
    empty-sum reading).
    """

    ids: tuple[str, ...]
    matrix: np.ndarray  # (N, dim) float32, read-only
    config: AugmentationConfig
    unaugmented_count: int = 0

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.ids):
            raise ValueError(
                f"AugmentedCorpusEmbeddings: matrix shape {self.matrix.shape} does not "
                f"match {len(self.ids)} ids"
            )
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("AugmentedCorpusEmbeddings: duplicate passage ids")
        if not np.isfinite(self.matrix).all():
            raise ValueError("AugmentedCorpusEmbeddings: non-finite vector components")
        m = np.ascontiguousarray(self.matrix, dtype=np.float32)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(
            self, "_row_of", {pid: i for i, pid in enumerate(self.ids)}
        )

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def vector(self, passage_id: str) -> np.ndarray:
        row = self._row_of.get(passage_id)  # type: ignore[attr-defined]
        if row is None:
            raise KeyError(f"no augmented embedding for passage {passage_id!r}")
        return self.matrix[row]

    def to_store(self) -> EmbeddingStore:
        return EmbeddingStore(self.dim, zip(self.ids, self.matrix))


def aggregate(
    p_emb: np.ndarray, q_embs: Sequence[np.ndarray], alpha: float
) -> np.ndarray:
    """Blend a passage embedding with the sum of query embeddings.

    At alpha 0 the passage embedding is returned bit-exactly; an empty
    query list yields ``(1 - alpha) * p_emb``.
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha: must be in [0, 1], got {alpha}")
    p = as_embedding(p_emb, what="passage embedding")
    if alpha == 0.0:
        return p
    dim = p.size
    acc = np.zeros(dim, dtype=np.float64)
    for i, q in enumerate(q_embs):
        q = np.asarray(q)
        if q.shape != (dim,):
            raise ValueError(
                f"query embedding {i}: dimension {q.shape} does not match passage dimension {dim}"
            )
        acc += q
    out = (1.0 - alpha) * p.astype(np.float64) + alpha * acc
    return as_embedding(out, dim, "aggregated embedding")


def _select_query_ids(
    pid: str, genq: GeneratedQuerySet, cfg: AugmentationConfig
) -> list[str]:
    """Embedding ids of the selected generated queries for one passage.

    For each configured language, the first ``queries_per_language`` samples
    (ascending sample_index) are taken. A (passage, language) pair with no
    samples at all contributes nothing; a pair with some but fewer than
    requested is a data inconsistency and fails.
    """
    ids: list[str] = []
    n = cfg.queries_per_language
    if n == 0:
        return ids
    for lang in cfg.languages:
        samples = genq.get(pid, lang)
        if not samples:
            continue
        if len(samples) < n:
            raise ValueError(
                f"passage {pid!r}, language {lang}: {len(samples)} generated queries "
                f"available but {n} requested"
            )
        ids.extend(genq_embedding_id(pid, lang, s.sample_index) for s in samples[:n])
    return ids


def augment_corpus(
    corpus: Sequence[Passage],
    store: EmbeddingStore,
    genq: GeneratedQuerySet,
    cfg: AugmentationConfig,
    renormalize: bool = False,
    threads: int = 1,
) -> AugmentedCorpusEmbeddings:
    """Aggregate every passage with its selected generated-query embeddings.

    The store must hold a vector for each passage id and each selected
    query id (``genq::<passage_id>::<lang>::<sample_index>``). Queries are
    flattened in (language-set order, then sample_index) order so the
    floating-point result is deterministic. Passages in the generated-query
    set but not in the store fail fast with the missing id named.
    """
    if threads < 1:
        raise ValueError(f"threads: must be >= 1, got {threads}")

    def one(p: Passage) -> tuple[np.ndarray, bool]:
        p_emb = store.get(p.id)
        q_ids = _select_query_ids(p.id, genq, cfg)
        q_embs = [store.get(qid) for qid in q_ids]
        vec = aggregate(p_emb, q_embs, cfg.alpha)
        if renormalize:
            v = vec.astype(np.float64)
            norm = float(np.linalg.norm(v))
            if norm > 0.0:
                vec = as_embedding(v / norm, store.dim, "renormalized embedding")
        return vec, not q_embs

    if threads == 1:
        results = [one(p) for p in corpus]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, corpus))

    vectors = np.stack([vec for vec, _ in results]) if results else np.zeros((0, store.dim), np.float32)
    unaugmented = sum(1 for _, empty in results if empty)
    return AugmentedCorpusEmbeddings(
        ids=tuple(p.id for p in corpus),
        matrix=vectors,
        config=cfg,
        unaugmented_count=unaugmented,
    )
