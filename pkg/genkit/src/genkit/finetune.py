"""Fine-tuning of the query generator on labelled (query, language, passage) pairs."""

from __future__ import annotations

import json
import warnings
from pathlib import Path
from typing import Sequence

import torch

from .config import FinetuneConfig
from .io import TrainPair
from .model import build_model, build_tokenizer, save_checkpoint
from .prompts import build_prompt

LOG_NAME = "training_log.json"
_WINDOW = 20


def finetune_xqg(
    pairs: Sequence[TrainPair], config: FinetuneConfig, out_dir: str | Path
) -> Path:
    """Train the generator with a seq2seq objective and save a checkpoint.

    Inputs are the language-specific prompts over the passage text, targets
    the labelled queries. Pairs in languages outside the configured target
    set are retained with a warning. The training log (per-step losses) is
    written next to the checkpoint, and training fails if the loss did not
    decrease from the first to the last window of steps.
    """
    if not pairs:
        raise ValueError("finetune_xqg: no training pairs")
    outside = sorted({p.lang for p in pairs} - set(config.languages))
    if outside:
        warnings.warn(
            f"training pairs contain languages outside the target set: {outside}; retained",
            stacklevel=2,
        )

    tokenizer = build_tokenizer()
    model = build_model(
        d_model=config.d_model, num_layers=config.num_layers,
        num_heads=config.num_heads, seed=config.seed,
    )
    sources = [build_prompt(p.lang, p.passage) for p in pairs]
    targets = [p.query for p in pairs]

    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    sampler = torch.Generator().manual_seed(config.seed)
    losses: list[float] = []
    model.train()
    for _ in range(config.steps):
        idx = torch.randint(len(pairs), (config.batch_size,), generator=sampler)
        batch_src = [sources[i] for i in idx]
        batch_tgt = [targets[i] for i in idx]
        enc = tokenizer(
            batch_src, return_tensors="pt", padding=True,
            truncation=True, max_length=config.max_input_tokens,
        )
        tgt = tokenizer(
            batch_tgt, return_tensors="pt", padding=True,
            truncation=True, max_length=config.max_output_tokens,
        )
        labels = tgt["input_ids"].masked_fill(tgt["attention_mask"] == 0, -100)
        out = model(
            input_ids=enc["input_ids"], attention_mask=enc["attention_mask"], labels=labels
        )
        out.loss.backward()
        optimizer.step()
        optimizer.zero_grad()
        losses.append(out.loss.detach().item())

    window = min(_WINDOW, max(1, len(losses) // 2))
    initial = sum(losses[:window]) / window
    final = sum(losses[-window:]) / window

    out_dir = save_checkpoint(model, out_dir)
    log = {
        "steps": config.steps,
        "batch_size": config.batch_size,
        "learning_rate": config.learning_rate,
        "seed": config.seed,
        "num_pairs": len(pairs),
        "losses": losses,
        "initial_window_loss": initial,
        "final_window_loss": final,
    }
    (out_dir / LOG_NAME).write_text(json.dumps(log, indent=2) + "\n", encoding="utf-8")

    if final >= initial:
        raise RuntimeError(
            f"training loss did not decrease ({initial:.4f} -> {final:.4f}); "
            f"see {out_dir / LOG_NAME}"
        )
    return out_dir
