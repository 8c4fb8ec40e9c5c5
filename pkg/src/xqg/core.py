"""Domain types shared across the retrieval pipeline.

Pure data: no I/O and no model logic lives here. Every type validates its
invariants on construction, so a value that exists is a value that is valid.
All types are immutable and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "DEFAULT_LANGUAGES",
    "TARGET_LANGUAGES",
    "LanguageTag",
    "Passage",
    "EvalQuery",
    "GeneratedQuery",
    "GeneratedQuerySet",
    "AugmentationConfig",
    "RankedList",
    "as_embedding",
    "genq_embedding_id",
    "query_embedding_id",
]

# The seven typologically diverse query languages used throughout, plus the
# passage language. The set is configuration, not a closed enum: any parser
# accepts an explicit ``allowed`` collection.
TARGET_LANGUAGES: tuple[str, ...] = ("Ar", "Bn", "Fi", "Ja", "Ko", "Ru", "Te")
DEFAULT_LANGUAGES: tuple[str, ...] = TARGET_LANGUAGES + ("En",)


@dataclass(frozen=True, order=True)
class LanguageTag:
    """A short language code in capitalized-first form (e.g. ``Ja``)."""

    code: str

    def __post_init__(self) -> None:
        if not self.code:
            raise ValueError("LanguageTag.code: must be non-empty")
        if self.code != self.code.capitalize():
            raise ValueError(
                f"LanguageTag.code: {self.code!r} is not case-normalized "
                f"(expected {self.code.capitalize()!r})"
            )

    @classmethod
    def parse(cls, code: str, allowed: Iterable[str] | None = None) -> "LanguageTag":
        """Normalize case and validate membership in the configured set."""
        if not code or not code.strip():
            raise ValueError("LanguageTag.code: must be non-empty")
        normalized = code.strip().capitalize()
        allowed_set = {c.capitalize() for c in (allowed if allowed is not None else DEFAULT_LANGUAGES)}
        if normalized not in allowed_set:
            raise ValueError(
                f"LanguageTag.code: unknown language {code!r} "
                f"(configured set: {', '.join(sorted(allowed_set))})"
            )
        return cls(normalized)

    def __str__(self) -> str:
        return self.code


@dataclass(frozen=True)
class Passage:
    """A corpus document: unique id, optional title, non-empty body text."""

    id: str
    title: str
    text: str

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("Passage.id: must be non-empty")
        if not self.text.strip():
            raise ValueError(f"Passage.text: must be non-empty (passage {self.id!r})")


@dataclass(frozen=True)
class EvalQuery:
    """An evaluation query with its language and gold answer strings."""

    qid: str
    lang: LanguageTag
    text: str
    answers: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.qid:
            raise ValueError("EvalQuery.qid: must be non-empty")
        if not self.text.strip():
            raise ValueError(f"EvalQuery.text: must be non-empty (query {self.qid!r})")
        object.__setattr__(self, "answers", tuple(self.answers))
        if not self.answers:
            raise ValueError(f"EvalQuery.answers: at least one answer required (query {self.qid!r})")
        for a in self.answers:
            if not a.strip():
                raise ValueError(f"EvalQuery.answers: empty answer string (query {self.qid!r})")


@dataclass(frozen=True)
class GeneratedQuery:
    """One sampled synthetic query for a (passage, language) pair."""

    passage_id: str
    lang: LanguageTag
    text: str
    sample_index: int

    def __post_init__(self) -> None:
        if not self.passage_id:
            raise ValueError("GeneratedQuery.passage_id: must be non-empty")
        if not self.text.strip():
            raise ValueError(
                f"GeneratedQuery.text: must be non-empty "
                f"(passage {self.passage_id!r}, lang {self.lang})"
            )
        if self.sample_index < 0:
            raise ValueError(
                f"GeneratedQuery.sample_index: must be non-negative, got {self.sample_index}"
            )


class GeneratedQuerySet:
    """Generated queries grouped by passage and language.

    Per (passage, language) the sample lists are ordered by ascending
    sample_index with no duplicates. When a corpus id set is supplied,
    membership of every passage_id is checked.
    """

    def __init__(
        self,
        queries: Iterable[GeneratedQuery] = (),
        corpus_ids: Iterable[str] | None = None,
    ) -> None:
        known = set(corpus_ids) if corpus_ids is not None else None
        grouped: dict[str, dict[LanguageTag, list[GeneratedQuery]]] = {}
        for q in queries:
            if known is not None and q.passage_id not in known:
                raise ValueError(
                    f"GeneratedQuerySet: unknown passage_id {q.passage_id!r} (not in corpus)"
                )
            grouped.setdefault(q.passage_id, {}).setdefault(q.lang, []).append(q)
        for pid, by_lang in grouped.items():
            for lang, items in by_lang.items():
                items.sort(key=lambda g: g.sample_index)
                seen: set[int] = set()
                for g in items:
                    if g.sample_index in seen:
                        raise ValueError(
                            f"GeneratedQuerySet: duplicate sample_index {g.sample_index} "
                            f"for passage {pid!r}, lang {lang}"
                        )
                    seen.add(g.sample_index)
        self._grouped: dict[str, dict[LanguageTag, tuple[GeneratedQuery, ...]]] = {
            pid: {lang: tuple(items) for lang, items in by_lang.items()}
            for pid, by_lang in grouped.items()
        }

    def get(self, passage_id: str, lang: LanguageTag) -> tuple[GeneratedQuery, ...]:
        """Samples for a (passage, language) pair; empty tuple if absent."""
        return self._grouped.get(passage_id, {}).get(lang, ())

    def passage_ids(self) -> tuple[str, ...]:
        return tuple(self._grouped)

    def languages(self) -> tuple[LanguageTag, ...]:
        langs = {lang for by_lang in self._grouped.values() for lang in by_lang}
        return tuple(sorted(langs))

    def __len__(self) -> int:
        return sum(
            len(items) for by_lang in self._grouped.values() for items in by_lang.values()
        )

    def __iter__(self) -> Iterator[GeneratedQuery]:
        """All queries: passages in first-seen order, languages sorted, samples ascending."""
        for by_lang in self._grouped.values():
            for lang in sorted(by_lang):
                yield from by_lang[lang]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratedQuerySet):
            return NotImplemented
        return self._grouped == other._grouped


@dataclass(frozen=True)
class AugmentationConfig:
    """Knobs of the augmentation stage: ratio, source languages, query count.

    ``languages`` is stored sorted and deduplicated; an empty tuple means no
    augmentation. ``queries_per_language`` is validated against the actual
    generated-query set at use time.
    """

    alpha: float
    languages: tuple[LanguageTag, ...] = ()
    queries_per_language: int = 0

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha <= 1.0) or math.isnan(self.alpha):
            raise ValueError(f"AugmentationConfig.alpha: must be in [0, 1], got {self.alpha}")
        object.__setattr__(self, "languages", tuple(sorted(set(self.languages))))
        if self.queries_per_language < 0:
            raise ValueError(
                f"AugmentationConfig.queries_per_language: must be non-negative, "
                f"got {self.queries_per_language}"
            )


@dataclass(frozen=True)
class RankedList:
    """A retrieval result: entries sorted by descending score, then id."""

    qid: str
    entries: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        if not self.qid:
            raise ValueError("RankedList.qid: must be non-empty")
        object.__setattr__(
            self, "entries", tuple((pid, float(score)) for pid, score in self.entries)
        )
        seen: set[str] = set()
        prev: tuple[str, float] | None = None
        for pid, score in self.entries:
            if pid in seen:
                raise ValueError(f"RankedList.entries: duplicate passage_id {pid!r}")
            seen.add(pid)
            if prev is not None:
                prev_pid, prev_score = prev
                if score > prev_score or (score == prev_score and pid < prev_pid):
                    raise ValueError(
                        f"RankedList.entries: out of order at {pid!r} "
                        "(scores must be non-increasing, ties id-ascending)"
                    )
            prev = (pid, score)

    @classmethod
    def from_scores(cls, qid: str, pairs: Iterable[tuple[str, float]]) -> "RankedList":
        """Build a canonically ordered list from unordered (id, score) pairs."""
        ordered = sorted(pairs, key=lambda e: (-e[1], e[0]))
        return cls(qid, tuple(ordered))


def as_embedding(
    values: Sequence[float] | np.ndarray,
    dim: int | None = None,
    what: str = "embedding",
) -> np.ndarray:
    """Validate and freeze a vector as a read-only float32 embedding.

    Rejects non-1D shapes, NaN/Inf components and, when ``dim`` is given,
    length mismatches.
    """
    arr = np.asarray(values, dtype=np.float32)
    if arr.ndim != 1:
        raise ValueError(f"{what}: expected a 1-D vector, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{what}: must be non-empty")
    if dim is not None and arr.size != dim:
        raise ValueError(f"{what}: length {arr.size} does not match dimension {dim}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{what}: contains NaN or Inf components")
    if arr is values and isinstance(values, np.ndarray) and values.flags.writeable:
        arr = arr.copy()
    arr.flags.writeable = False
    return arr


def genq_embedding_id(passage_id: str, lang: LanguageTag, sample_index: int) -> str:
    """Store key for a generated-query embedding."""
    return f"genq::{passage_id}::{lang.code}::{sample_index}"


def query_embedding_id(qid: str) -> str:
    """Store key for an evaluation-query embedding."""
    return f"evalq::{qid}"
