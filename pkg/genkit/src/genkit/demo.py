"""Desk-scale demo data: a small English corpus and labelled query pairs.

The pairs use small pools of real words per language so the fine-tuned
generator has script-correct targets to learn from. Queries are bags of
question words, which is all the tiny model needs at this scale.
"""

from __future__ import annotations

import random
from typing import Sequence

from .io import CorpusDoc, TrainPair

QUERY_WORDS: dict[str, tuple[str, ...]] = {
    "Ar": ("أين", "ما", "من", "متى", "لماذا", "عاصمة", "مدينة", "بلد", "تاريخ", "لغة", "كيف"),
    "Bn": ("কোথায়", "কি", "কে", "কখন", "কেন", "রাজধানী", "শহর", "দেশ", "ইতিহাস", "ভাষা"),
    "Fi": ("missä", "mikä", "kuka", "milloin", "miksi", "pääkaupunki", "kaupunki", "maa", "historia"),
    "Ja": ("どこ", "です", "か", "首都", "日本", "何", "誰", "いつ", "なぜ", "場所", "歴史", "都市"),
    "Ko": ("어디", "무엇", "누구", "언제", "왜", "수도", "도시", "나라", "역사", "언어"),
    "Ru": ("где", "что", "кто", "когда", "почему", "столица", "город", "страна", "история", "язык"),
    "Te": ("ఎక్కడ", "ఏమి", "ఎవరు", "ఎప్పుడు", "ఎందుకు", "రాజధాని", "నగరం", "దేశం", "చరిత్ర", "భాష"),
}

_TOPICS = (
    "river", "harbor", "mountains", "old town", "university", "markets",
    "railway", "coastline", "festival", "bridges", "museums", "forests",
)
_TRAITS = (
    "its long trading history", "a famous winter festival", "early printing works",
    "a deep natural harbor", "centuries of glass making", "its medieval walls",
    "a renowned observatory", "terraced gardens", "its shipbuilding yards",
)


def build_demo_corpus(num_passages: int, seed: int = 0) -> list[CorpusDoc]:
    rng = random.Random(seed)
    docs = []
    for i in range(num_passages):
        text = (
            f"The city of Veldar{i} lies near the {rng.choice(_TOPICS)} and is "
            f"known for {rng.choice(_TRAITS)}. Records mention it first in "
            f"{rng.randint(900, 1800)}."
        )
        docs.append(CorpusDoc(id=f"p{i:04d}", title=f"Veldar{i}", text=text))
    return docs


def build_demo_pairs(
    corpus: Sequence[CorpusDoc],
    languages: Sequence[str],
    pairs_per_language: int = 2,
    seed: int = 0,
) -> list[TrainPair]:
    rng = random.Random(seed)
    pairs = []
    for doc in corpus:
        for lang in languages:
            pool = QUERY_WORDS[lang]
            for _ in range(pairs_per_language):
                query = " ".join(rng.choice(pool) for _ in range(rng.randint(3, 5))) + "?"
                pairs.append(TrainPair(query=query, lang=lang, passage=doc.text))
    return pairs
