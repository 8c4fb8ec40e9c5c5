"""Sampled query generation over a corpus."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import torch
from transformers import T5ForConditionalGeneration

from .config import GenerationConfig
from .io import CorpusDoc, write_generated_queries
from .model import build_tokenizer
from .prompts import build_prompt


def generate_queries(
    model: T5ForConditionalGeneration,
    corpus: Sequence[CorpusDoc],
    config: GenerationConfig,
    out_path: str | Path,
) -> list[tuple[str, str, str, int]]:
    """Sample queries per (passage, language) and write the genq JSONL file.

    Emits exactly ``len(corpus) * len(languages) * samples_per_language``
    rows with sample_index 0..n-1. The sampling seed is derived per
    (passage, language), so output is reproducible and independent of any
    corpus sharding; shards concatenated in passage order equal a single
    run. Blank generations are replaced with "?" to keep rows valid.
    """
    tokenizer = build_tokenizer()
    model.eval()
    records: list[tuple[str, str, str, int]] = []
    n_langs = len(config.languages)
    for doc_index, doc in enumerate(corpus):
        for lang_index, lang in enumerate(config.languages):
            prompt = build_prompt(lang, doc.text)
            enc = tokenizer(
                prompt, return_tensors="pt",
                truncation=True, max_length=config.max_input_tokens,
            )
            torch.manual_seed(config.seed + doc_index * n_langs + lang_index)
            with torch.no_grad():
                out = model.generate(
                    enc["input_ids"],
                    attention_mask=enc["attention_mask"],
                    do_sample=True,
                    top_k=config.top_k,
                    max_new_tokens=config.max_output_tokens,
                    num_return_sequences=config.samples_per_language,
                )
            texts = tokenizer.batch_decode(out, skip_special_tokens=True)
            for sample_index, text in enumerate(texts):
                text = text.strip() or "?"
                records.append((doc.id, lang, text, sample_index))
    write_generated_queries(records, out_path)
    return records
