"""Readers and writers for every on-disk artifact.

Text artifacts (corpus, eval queries, generated queries) are UTF-8 JSON
lines; embeddings use a flat little-endian binary layout so stores remain
cheap to parse at corpus scale; runs use the classic 6-column TREC layout.
Readers are strict: they fail with the offending line, id or byte region
named, and binary readers reject any header corruption or trailing bytes.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import (
    EvalQuery,
    GeneratedQuery,
    GeneratedQuerySet,
    LanguageTag,
    Passage,
    RankedList,
)
from .encoder import EmbeddingStore

__all__ = [
    "FormatError",
    "read_corpus",
    "write_corpus",
    "read_eval_queries",
    "write_eval_queries",
    "read_generated_queries",
    "write_generated_queries",
    "read_embeddings",
    "write_embeddings",
    "read_run",
    "write_run",
]

EMBEDDING_MAGIC = b"XQGE"
EMBEDDING_VERSION = 1
MAX_DIM = 65536

_HEADER = struct.Struct("<4sIIQ")  # magic, version, dim, count
_ID_LEN = struct.Struct("<H")


class FormatError(ValueError):
    """A file does not conform to its declared format."""


def _jsonl_records(path: str | Path) -> Iterable[tuple[int, dict]]:
    """Yield (line_number, object) for each non-blank line; 1-based numbering."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise FormatError(f"{path}: line {lineno}: expected a JSON object")
            yield lineno, obj


def _require(obj: dict, key: str, path: str | Path, lineno: int, kind: type) -> object:
    if key not in obj:
        raise FormatError(f"{path}: line {lineno}: missing field {key}")
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise FormatError(f"{path}: line {lineno}: field {key} must be an integer")
    if not isinstance(value, kind):
        raise FormatError(
            f"{path}: line {lineno}: field {key} must be {kind.__name__}, "
            f"got {type(value).__name__}"
        )
    return value


def read_corpus(path: str | Path) -> list[Passage]:
    """Read a JSONL corpus; fields ``id``, ``title`` (optional), ``text``."""
    passages: list[Passage] = []
    seen: set[str] = set()
    for lineno, obj in _jsonl_records(path):
        pid = _require(obj, "id", path, lineno, str)
        title = obj.get("title", "")
        if not isinstance(title, str):
            raise FormatError(f"{path}: line {lineno}: field title must be str")
        text = _require(obj, "text", path, lineno, str)
        if pid in seen:
            raise FormatError(f"{path}: line {lineno}: duplicate passage id {pid!r}")
        seen.add(pid)
        try:
            passages.append(Passage(id=pid, title=title, text=text))
        except ValueError as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from exc
    return passages


def write_corpus(passages: Sequence[Passage], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in passages:
            fh.write(
                json.dumps(
                    {"id": p.id, "title": p.title, "text": p.text},
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                + "\n"
            )


def read_eval_queries(
    path: str | Path, allowed_langs: Iterable[str] | None = None
) -> list[EvalQuery]:
    """Read JSONL evaluation queries; fields ``qid``, ``lang``, ``text``, ``answers``."""
    queries: list[EvalQuery] = []
    seen: set[str] = set()
    for lineno, obj in _jsonl_records(path):
        qid = _require(obj, "qid", path, lineno, str)
        lang_code = _require(obj, "lang", path, lineno, str)
        text = _require(obj, "text", path, lineno, str)
        answers = _require(obj, "answers", path, lineno, list)
        if qid in seen:
            raise FormatError(f"{path}: line {lineno}: duplicate qid {qid!r}")
        seen.add(qid)
        if not all(isinstance(a, str) for a in answers):
            raise FormatError(f"{path}: line {lineno}: field answers must be a list of strings")
        try:
            lang = LanguageTag.parse(lang_code, allowed_langs)
            queries.append(EvalQuery(qid=qid, lang=lang, text=text, answers=tuple(answers)))
        except ValueError as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from exc
    return queries


def write_eval_queries(queries: Sequence[EvalQuery], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for q in queries:
            fh.write(
                json.dumps(
                    {
                        "qid": q.qid,
                        "lang": q.lang.code,
                        "text": q.text,
                        "answers": list(q.answers),
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                + "\n"
            )


def read_generated_queries(
    path: str | Path,
    corpus_ids: Iterable[str] | None,
    allowed_langs: Iterable[str] | None = None,
) -> GeneratedQuerySet:
    """Read JSONL generated queries; fields ``passage_id``, ``lang``, ``query``, ``sample_index``.

    Queries are grouped per (passage, language) and ordered by sample_index.
    Passage ids absent from ``corpus_ids`` are rejected; pass ``None`` to
    skip the membership check.
    """
    known = set(corpus_ids) if corpus_ids is not None else None
    items: list[GeneratedQuery] = []
    seen: set[tuple[str, LanguageTag, int]] = set()
    for lineno, obj in _jsonl_records(path):
        pid = _require(obj, "passage_id", path, lineno, str)
        lang_code = _require(obj, "lang", path, lineno, str)
        text = _require(obj, "query", path, lineno, str)
        sample_index = _require(obj, "sample_index", path, lineno, int)
        try:
            lang = LanguageTag.parse(lang_code, allowed_langs)
            gq = GeneratedQuery(passage_id=pid, lang=lang, text=text, sample_index=sample_index)
        except ValueError as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from exc
        if known is not None and pid not in known:
            raise FormatError(f"{path}: line {lineno}: unknown passage_id {pid!r}")
        key = (pid, lang, sample_index)
        if key in seen:
            raise FormatError(
                f"{path}: line {lineno}: duplicate (passage_id, lang, sample_index) "
                f"({pid!r}, {lang}, {sample_index})"
            )
        seen.add(key)
        items.append(gq)
    return GeneratedQuerySet(items)


def write_generated_queries(genq: GeneratedQuerySet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for gq in genq:
            fh.write(
                json.dumps(
                    {
                        "passage_id": gq.passage_id,
                        "lang": gq.lang.code,
                        "query": gq.text,
                        "sample_index": gq.sample_index,
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                + "\n"
            )


def write_embeddings(store: EmbeddingStore, path: str | Path) -> None:
    """Write a store in the flat binary layout; read_embeddings inverts it bit-exactly."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(EMBEDDING_MAGIC, EMBEDDING_VERSION, store.dim, len(store)))
        for eid, vec in store.items():
            raw = eid.encode("utf-8")
            if not raw:
                raise FormatError("embedding id must be non-empty")
            if len(raw) > 0xFFFF:
                raise FormatError(f"embedding id too long ({len(raw)} bytes): {eid[:40]!r}...")
            fh.write(_ID_LEN.pack(len(raw)))
            fh.write(raw)
            fh.write(vec.astype("<f4").tobytes())


def read_embeddings(path: str | Path) -> EmbeddingStore:
    """Read a binary embedding store, validating header, finiteness and length."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: truncated file (no header)")
    magic, version, dim, count = _HEADER.unpack_from(data, 0)
    if magic != EMBEDDING_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r} (expected {EMBEDDING_MAGIC!r})")
    if version != EMBEDDING_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if not (1 <= dim <= MAX_DIM):
        raise FormatError(f"{path}: dimension {dim} out of range [1, {MAX_DIM}]")
    offset = _HEADER.size
    vec_bytes = 4 * dim
    entries: list[tuple[str, np.ndarray]] = []
    seen: set[str] = set()
    for _ in range(count):
        if offset + _ID_LEN.size > len(data):
            raise FormatError(f"{path}: truncated file (record {len(entries)})")
        (id_len,) = _ID_LEN.unpack_from(data, offset)
        offset += _ID_LEN.size
        if id_len == 0:
            raise FormatError(f"{path}: empty id in record {len(entries)}")
        if offset + id_len + vec_bytes > len(data):
            raise FormatError(f"{path}: truncated file (record {len(entries)})")
        try:
            eid = data[offset : offset + id_len].decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"{path}: invalid UTF-8 id in record {len(entries)}") from exc
        offset += id_len
        vec = np.frombuffer(data, dtype="<f4", count=dim, offset=offset).astype(np.float32)
        offset += vec_bytes
        if eid in seen:
            raise FormatError(f"{path}: duplicate id {eid!r}")
        seen.add(eid)
        if not np.isfinite(vec).all():
            raise FormatError(f"{path}: non-finite component in record {eid!r}")
        entries.append((eid, vec))
    if offset != len(data):
        raise FormatError(f"{path}: {len(data) - offset} trailing bytes after last record")
    return EmbeddingStore(dim, entries)


def write_run(ranked_lists: Sequence[RankedList], tag: str, path: str | Path) -> None:
    """Write runs in the 6-column TREC layout, scores with 6 decimal places."""
    if not tag or any(c.isspace() for c in tag):
        raise FormatError(f"run tag must be non-empty and whitespace-free, got {tag!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rl in ranked_lists:
            for rank, (pid, score) in enumerate(rl.entries, start=1):
                fh.write(f"{rl.qid} Q0 {pid} {rank} {score:.6f} {tag}\n")


def read_run(path: str | Path) -> list[RankedList]:
    """Read a TREC run file back into ranked lists.

    Entries are grouped by qid in file order and re-ranked canonically
    (score descending, ties by passage_id): 6-decimal score printing can
    reorder exact ties, so the canonical order is restored on read.
    """
    groups: dict[str, list[tuple[str, float]]] = {}
    order: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 6:
                raise FormatError(f"{path}: line {lineno}: expected 6 columns, got {len(parts)}")
            qid, _q0, pid, _rank, score_s, _tag = parts
            try:
                score = float(score_s)
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno}: bad score {score_s!r}") from exc
            if qid not in groups:
                groups[qid] = []
                order.append(qid)
            groups[qid].append((pid, score))
    out: list[RankedList] = []
    for qid in order:
        try:
            out.append(RankedList.from_scores(qid, groups[qid]))
        except ValueError as exc:
            raise FormatError(f"{path}: qid {qid!r}: {exc}") from exc
    return out
