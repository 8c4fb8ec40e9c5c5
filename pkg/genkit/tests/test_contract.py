"""Cross-package contract: every artifact loads through the retrieval engine.

These tests read generated files with the engine's strict readers and drive
its CLI end to end over them; zero validation errors is the contract.
"""

from __future__ import annotations

import subprocess
import sys

import pytest

from genkit.export import export_embeddings
from genkit.io import write_corpus

import xqg.formats as xf

from conftest import DEMO_LANGS


@pytest.fixture(scope="module")
def artifact_dir(tmp_path_factory, demo_corpus, genq_path, checkpoint_dir):
    """Corpus, generated queries and embedding exports for the 50-passage demo."""
    d = tmp_path_factory.mktemp("artifacts")
    write_corpus(demo_corpus, d / "corpus.jsonl")
    (d / "genq.jsonl").write_bytes(genq_path.read_bytes())

    passage_items = [(doc.id, f"{doc.title} {doc.text}") for doc in demo_corpus]
    export_embeddings(str(checkpoint_dir), passage_items, d / "passages.xqge", seed=0)

    genq_items = []
    for gq in xf.read_generated_queries(genq_path, None):
        eid = f"genq::{gq.passage_id}::{gq.lang.code}::{gq.sample_index}"
        genq_items.append((eid, gq.text))
    export_embeddings(str(checkpoint_dir), genq_items, d / "genq.xqge", seed=0)
    return d


def _xqg(*argv: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "xqg.cli", *map(str, argv)],
        capture_output=True, text=True,
    )


class TestReadersAcceptEverything:
    def test_corpus_loads(self, artifact_dir, demo_corpus):
        passages = xf.read_corpus(artifact_dir / "corpus.jsonl")
        assert len(passages) == len(demo_corpus)

    def test_genq_loads_with_membership_check(self, artifact_dir, demo_corpus):
        genq = xf.read_generated_queries(
            artifact_dir / "genq.jsonl", {d.id for d in demo_corpus}
        )
        assert len(genq) == len(demo_corpus) * len(DEMO_LANGS) * 1

    def test_embedding_stores_load(self, artifact_dir, demo_corpus):
        passages = xf.read_embeddings(artifact_dir / "passages.xqge")
        genq = xf.read_embeddings(artifact_dir / "genq.xqge")
        assert len(passages) == len(demo_corpus)
        assert passages.dim == genq.dim
        assert all(eid.startswith("genq::") for eid in genq.ids())


class TestPrimaryCliOverGenkitArtifacts:
    def test_augment_index_pipeline(self, artifact_dir, tmp_path):
        aug = tmp_path / "aug.xqge"
        result = _xqg(
            "augment", "--corpus", artifact_dir / "corpus.jsonl",
            "--genq", artifact_dir / "genq.jsonl",
            "--passage-store", artifact_dir / "passages.xqge",
            "--genq-store", artifact_dir / "genq.xqge",
            "--alpha", "0.01", "--langs", ",".join(DEMO_LANGS), "--n", "1",
            "--out", aug,
        )
        assert result.returncode == 0, result.stderr
        assert "warning" not in result.stderr.lower()

        index = tmp_path / "exact.xqgi"
        result = _xqg("index", "--store", aug, "--out", index)
        assert result.returncode == 0, result.stderr

    def test_encode_command_accepts_genq_file(self, artifact_dir, tmp_path):
        # the engine's own hashing encoder also ingests the generated file
        out = tmp_path / "hashed.xqge"
        result = _xqg(
            "encode", "--input", artifact_dir / "genq.jsonl", "--out", out,
            "--kind", "genq", "--corpus", artifact_dir / "corpus.jsonl",
        )
        assert result.returncode == 0, result.stderr
