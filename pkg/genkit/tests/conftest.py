from __future__ import annotations

import pytest

from genkit.config import FinetuneConfig, GenerationConfig
from genkit.demo import build_demo_corpus, build_demo_pairs
from genkit.finetune import finetune_xqg
from genkit.generate import generate_queries
from genkit.model import load_checkpoint

DEMO_LANGS = ("Ja", "Ru", "Ar")


@pytest.fixture(scope="session")
def demo_corpus():
    return build_demo_corpus(50, seed=0)


@pytest.fixture(scope="session")
def demo_pairs(demo_corpus):
    return build_demo_pairs(demo_corpus, DEMO_LANGS, pairs_per_language=2, seed=0)


@pytest.fixture(scope="session")
def checkpoint_dir(tmp_path_factory, demo_pairs):
    """One trained tiny generator shared across the test session."""
    out = tmp_path_factory.mktemp("ckpt") / "xqg-tiny"
    config = FinetuneConfig(languages=DEMO_LANGS, steps=400, seed=0)
    return finetune_xqg(demo_pairs, config, out)


@pytest.fixture(scope="session")
def trained_model(checkpoint_dir):
    return load_checkpoint(checkpoint_dir)


@pytest.fixture(scope="session")
def genq_path(tmp_path_factory, trained_model, demo_corpus):
    """Generated queries for the full 50-passage demo corpus."""
    out = tmp_path_factory.mktemp("genq") / "genq.jsonl"
    config = GenerationConfig(languages=DEMO_LANGS, samples_per_language=1, seed=0)
    generate_queries(trained_model, demo_corpus, config, out)
    return out
