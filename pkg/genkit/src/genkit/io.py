"""File I/O for the interchange formats shared with the retrieval engine.

The JSONL schemas and the flat binary embedding layout are implemented here
independently; the engine's readers are the contract, and the contract tests
load everything written here through them.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

EMBEDDING_MAGIC = b"XQGE"
EMBEDDING_VERSION = 1
_HEADER = struct.Struct("<4sIIQ")
_ID_LEN = struct.Struct("<H")


@dataclass(frozen=True)
class CorpusDoc:
    id: str
    title: str
    text: str


@dataclass(frozen=True)
class TrainPair:
    query: str
    lang: str
    passage: str


def _jsonl(path: str | Path) -> Iterable[tuple[int, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            yield lineno, obj


def read_corpus(path: str | Path) -> list[CorpusDoc]:
    docs: list[CorpusDoc] = []
    seen: set[str] = set()
    for lineno, obj in _jsonl(path):
        try:
            doc = CorpusDoc(id=obj["id"], title=obj.get("title", ""), text=obj["text"])
        except KeyError as exc:
            raise ValueError(f"{path}: line {lineno}: missing field {exc.args[0]}") from None
        if not doc.id or not doc.text.strip():
            raise ValueError(f"{path}: line {lineno}: id and text must be non-empty")
        if doc.id in seen:
            raise ValueError(f"{path}: line {lineno}: duplicate id {doc.id!r}")
        seen.add(doc.id)
        docs.append(doc)
    return docs


def read_eval_queries(path: str | Path) -> list[tuple[str, str, str]]:
    """(qid, lang, text) triples from an eval-query file."""
    out = []
    for lineno, obj in _jsonl(path):
        try:
            out.append((obj["qid"], obj["lang"], obj["text"]))
        except KeyError as exc:
            raise ValueError(f"{path}: line {lineno}: missing field {exc.args[0]}") from None
    return out


def read_train_pairs(path: str | Path) -> list[TrainPair]:
    """Labelled (query, language, passage) training pairs."""
    pairs = []
    for lineno, obj in _jsonl(path):
        try:
            pairs.append(
                TrainPair(query=obj["query"], lang=obj["lang"], passage=obj["passage"])
            )
        except KeyError as exc:
            raise ValueError(f"{path}: line {lineno}: missing field {exc.args[0]}") from None
    return pairs


def write_train_pairs(pairs: Sequence[TrainPair], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in pairs:
            fh.write(
                json.dumps(
                    {"query": p.query, "lang": p.lang, "passage": p.passage},
                    ensure_ascii=False, separators=(",", ":"),
                )
                + "\n"
            )


def write_corpus(docs: Sequence[CorpusDoc], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for d in docs:
            fh.write(
                json.dumps(
                    {"id": d.id, "title": d.title, "text": d.text},
                    ensure_ascii=False, separators=(",", ":"),
                )
                + "\n"
            )


def write_generated_queries(
    records: Sequence[tuple[str, str, str, int]], path: str | Path
) -> None:
    """Write (passage_id, lang, query, sample_index) rows in the genq schema."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for passage_id, lang, query, sample_index in records:
            fh.write(
                json.dumps(
                    {
                        "passage_id": passage_id,
                        "lang": lang,
                        "query": query,
                        "sample_index": sample_index,
                    },
                    ensure_ascii=False, separators=(",", ":"),
                )
                + "\n"
            )


def write_embeddings(
    dim: int, items: Sequence[tuple[str, np.ndarray]], path: str | Path
) -> None:
    """Write the flat binary embedding store layout."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(EMBEDDING_MAGIC, EMBEDDING_VERSION, dim, len(items)))
        for eid, vec in items:
            arr = np.asarray(vec, dtype="<f4")
            if arr.shape != (dim,):
                raise ValueError(f"embedding {eid!r}: expected {dim} components, got {arr.shape}")
            if not np.isfinite(arr).all():
                raise ValueError(f"embedding {eid!r}: non-finite components")
            raw = eid.encode("utf-8")
            if not raw or len(raw) > 0xFFFF:
                raise ValueError(f"bad embedding id {eid!r}")
            fh.write(_ID_LEN.pack(len(raw)))
            fh.write(raw)
            fh.write(arr.tobytes())
