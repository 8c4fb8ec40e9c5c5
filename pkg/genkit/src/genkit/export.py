"""Real-encoder embedding export into the engine's binary store format."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np
import torch

from .io import write_embeddings
from .model import build_model, build_tokenizer, load_checkpoint

TINY_ENCODER = "tiny"


def _resolve_encoder(encoder_ref: str, seed: int):
    """An encoder module plus its hidden size.

    ``encoder_ref`` is a checkpoint directory (its encoder tower is used),
    the literal ``tiny`` for a fresh seeded tiny encoder, or a pretrained
    model name resolvable from the local cache.
    """
    if encoder_ref == TINY_ENCODER:
        model = build_model(seed=seed)
        return model.get_encoder(), model.config.d_model
    if Path(encoder_ref).is_dir():
        model = load_checkpoint(encoder_ref)
        return model.get_encoder(), model.config.d_model
    from transformers import AutoModel

    model = AutoModel.from_pretrained(encoder_ref)
    model.eval()
    hidden = getattr(model.config, "hidden_size", None) or model.config.d_model
    return model, hidden


def export_embeddings(
    encoder_ref: str,
    items: Sequence[tuple[str, str]],
    out_path: str | Path,
    batch_size: int = 16,
    max_tokens: int = 64,
    seed: int = 0,
) -> int:
    """Embed (id, text) pairs and write a binary embedding store.

    Texts are mean-pooled over the encoder's final hidden states (padding
    masked out). The written dimension equals the encoder hidden size.
    A non-finite embedding aborts the export naming the offending id.
    """
    if not items:
        raise ValueError("export_embeddings: nothing to export")
    encoder, dim = _resolve_encoder(encoder_ref, seed)
    tokenizer = build_tokenizer()
    vectors: list[tuple[str, np.ndarray]] = []
    with torch.no_grad():
        for start in range(0, len(items), batch_size):
            batch = items[start : start + batch_size]
            enc = tokenizer(
                [text for _, text in batch], return_tensors="pt",
                padding=True, truncation=True, max_length=max_tokens,
            )
            hidden = encoder(
                input_ids=enc["input_ids"], attention_mask=enc["attention_mask"]
            ).last_hidden_state
            mask = enc["attention_mask"].unsqueeze(-1).to(hidden.dtype)
            summed = (hidden * mask).sum(dim=1)
            counts = mask.sum(dim=1).clamp(min=1.0)
            pooled = (summed / counts).to(torch.float32).numpy()
            for (eid, _), vec in zip(batch, pooled):
                if not np.isfinite(vec).all():
                    raise ValueError(f"encoder produced non-finite embedding for id {eid!r}")
                vectors.append((eid, vec))
    write_embeddings(dim, vectors, out_path)
    return len(vectors)
