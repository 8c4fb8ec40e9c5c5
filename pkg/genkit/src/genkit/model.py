"""Tiny byte-level seq2seq model construction and checkpoint handling.

The generator is a T5-style encoder-decoder over raw UTF-8 bytes (ByT5
tokenizer: 256 byte tokens plus specials), small enough to fine-tune on a
CPU in seconds. No pretrained weights are downloaded; the desk-scale model
starts from a seeded random initialization and learns everything it needs
from the provided pairs.
"""

from __future__ import annotations

from pathlib import Path

import torch
from transformers import ByT5Tokenizer, T5Config, T5ForConditionalGeneration
from transformers.utils import logging as hf_logging

hf_logging.set_verbosity_error()
hf_logging.disable_progress_bar()

VOCAB_SIZE = 384  # 256 bytes + 125 sentinel tokens + pad/eos/unk


def build_tokenizer() -> ByT5Tokenizer:
    return ByT5Tokenizer()


def build_model(d_model: int = 64, num_layers: int = 2, num_heads: int = 4,
                seed: int = 0) -> T5ForConditionalGeneration:
    """A fresh, seeded tiny T5; deterministic for a fixed seed."""
    torch.manual_seed(seed)
    config = T5Config(
        vocab_size=VOCAB_SIZE,
        d_model=d_model,
        d_kv=max(4, d_model // num_heads),
        d_ff=4 * d_model,
        num_layers=num_layers,
        num_decoder_layers=num_layers,
        num_heads=num_heads,
        dropout_rate=0.0,
        decoder_start_token_id=0,
        pad_token_id=0,
        eos_token_id=1,
    )
    return T5ForConditionalGeneration(config)


def save_checkpoint(model: T5ForConditionalGeneration, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    return out_dir


def load_checkpoint(path: str | Path) -> T5ForConditionalGeneration:
    model = T5ForConditionalGeneration.from_pretrained(str(path))
    model.eval()
    return model
