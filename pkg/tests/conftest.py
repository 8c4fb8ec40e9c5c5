from __future__ import annotations

import pytest

from xqg.core import LanguageTag
from xqg.experiments import SyntheticWorld, SyntheticWorldSpec, generate_synthetic_world

# Tuned so the no-augmentation baseline has headroom at SMALL_M: augmentation
# gains are visible but the fixture stays fast.
SMALL_WORLD_SPEC = SyntheticWorldSpec(
    num_passages=80,
    vocab_per_language=60,
    languages=(LanguageTag("Ja"), LanguageTag("Ru")),
    queries_per_language=20,
    samples_per_language=3,
    passage_tokens=40,
    num_topics=8,
    topic_vocab=10,
    seed=11,
)
SMALL_M = 160


@pytest.fixture(scope="session")
def small_world() -> SyntheticWorld:
    """A fast synthetic world shared by experiment and CLI tests."""
    return generate_synthetic_world(SMALL_WORLD_SPEC)
