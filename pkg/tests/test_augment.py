from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xqg.augment import aggregate, augment_corpus
from xqg.core import (
    AugmentationConfig,
    GeneratedQuery,
    GeneratedQuerySet,
    LanguageTag,
    Passage,
    genq_embedding_id,
)
from xqg.encoder import EmbeddingStore

JA, RU = LanguageTag("Ja"), LanguageTag("Ru")


def _vec(*values) -> np.ndarray:
    return np.array(values, dtype=np.float32)


class TestAggregate:
    def test_half_blend(self):
        out = aggregate(_vec(1, 0), [_vec(0, 1)], 0.5)
        assert np.array_equal(out, _vec(0.5, 0.5))

    def test_sum_not_mean(self):
        # two identical queries double the query term: sum, not average
        out = aggregate(_vec(1, 0), [_vec(0, 1), _vec(0, 1)], 0.01)
        assert np.array_equal(out, _vec(0.99, 0.02))

    def test_alpha_zero_is_bit_exact(self):
        rng = np.random.default_rng(5)
        p = rng.standard_normal(33).astype(np.float32)
        qs = [rng.standard_normal(33).astype(np.float32) for _ in range(4)]
        out = aggregate(p, qs, 0.0)
        assert out.tobytes() == p.tobytes()

    def test_alpha_one_single_query_returns_query(self):
        rng = np.random.default_rng(6)
        p = rng.standard_normal(16).astype(np.float32)
        q = rng.standard_normal(16).astype(np.float32)
        assert aggregate(p, [q], 1.0).tobytes() == q.tobytes()

    def test_empty_query_list_scales_passage(self):
        out = aggregate(_vec(2, -4), [], 0.25)
        assert np.array_equal(out, _vec(1.5, -3.0))

    def test_dimension_mismatch_names_offender(self):
        with pytest.raises(ValueError, match="query embedding 1"):
            aggregate(_vec(1, 0), [_vec(0, 1), _vec(1, 2, 3)], 0.5)

    def test_alpha_out_of_range(self):
        with pytest.raises(ValueError, match="alpha"):
            aggregate(_vec(1, 0), [], 1.5)

    @settings(max_examples=60, deadline=None)
    @given(
        a=st.floats(0, 1, allow_nan=False),
        b=st.floats(0, 1, allow_nan=False),
        seed=st.integers(0, 2**16),
    )
    def test_affinity_in_alpha(self, a, b, seed):
        rng = np.random.default_rng(seed)
        p = rng.standard_normal(12).astype(np.float32)
        qs = [rng.standard_normal(12).astype(np.float32) for _ in range(3)]
        mid = aggregate(p, qs, (a + b) / 2.0).astype(np.float64)
        mean = (
            aggregate(p, qs, a).astype(np.float64) + aggregate(p, qs, b).astype(np.float64)
        ) / 2.0
        scale = np.maximum(np.abs(mean), 1.0)
        assert np.all(np.abs(mid - mean) / scale < 1e-6)

    @settings(max_examples=60, deadline=None)
    @given(alpha=st.floats(0, 1, allow_nan=False), seed=st.integers(0, 2**16))
    def test_monotone_interpolation(self, alpha, seed):
        rng = np.random.default_rng(seed)
        p = rng.standard_normal(12).astype(np.float32)
        qs = [rng.standard_normal(12).astype(np.float32) for _ in range(3)]
        out = aggregate(p, qs, alpha).astype(np.float64)
        qsum = np.sum([q.astype(np.float64) for q in qs], axis=0)
        expected_delta = alpha * (qsum - p.astype(np.float64))
        scale = np.maximum(np.abs(expected_delta), 1.0)
        assert np.all(np.abs((out - p) - expected_delta) / scale < 1e-6)

    def test_fixed_order_is_bit_reproducible(self):
        rng = np.random.default_rng(7)
        p = rng.standard_normal(20).astype(np.float32)
        qs = [rng.standard_normal(20).astype(np.float32) for _ in range(10)]
        assert aggregate(p, qs, 0.3).tobytes() == aggregate(p, qs, 0.3).tobytes()

    def test_permutation_changes_at_most_fp_noise(self):
        rng = np.random.default_rng(8)
        p = rng.standard_normal(20).astype(np.float32)
        qs = [rng.standard_normal(20).astype(np.float32) for _ in range(10)]
        a = aggregate(p, qs, 0.3).astype(np.float64)
        b = aggregate(p, list(reversed(qs)), 0.3).astype(np.float64)
        assert np.allclose(a, b, rtol=1e-6, atol=1e-6)


def _fixture_world():
    """3 passages x 2 languages x 2 samples with distinct seeded vectors."""
    rng = np.random.default_rng(42)
    corpus = [Passage(id=f"p{i}", title="", text=f"text {i}") for i in range(3)]
    store = EmbeddingStore(4)
    genq_items = []
    for p in corpus:
        store.add(p.id, rng.standard_normal(4).astype(np.float32))
        for lang in (JA, RU):
            for s in range(2):
                genq_items.append(
                    GeneratedQuery(passage_id=p.id, lang=lang, text=f"g{s}", sample_index=s)
                )
                store.add(
                    genq_embedding_id(p.id, lang, s),
                    rng.standard_normal(4).astype(np.float32),
                )
    genq = GeneratedQuerySet(genq_items, corpus_ids=[p.id for p in corpus])
    return corpus, store, genq


def brute_force_expected(corpus, store, cfg):
    """Independent evaluation of the aggregation formula in pure Python."""
    expected = {}
    for p in corpus:
        pvec = [float(x) for x in store.get(p.id)]
        total = [0.0, 0.0, 0.0, 0.0]
        for lang in cfg.languages:
            for s in range(cfg.queries_per_language):
                q = store.get(genq_embedding_id(p.id, lang, s))
                for d in range(4):
                    total[d] += float(q[d])
        expected[p.id] = np.array(
            [(1.0 - cfg.alpha) * pvec[d] + cfg.alpha * total[d] for d in range(4)],
            dtype=np.float32,
        )
    return expected


class TestAugmentCorpus:
    def test_matches_brute_force_oracle(self):
        corpus, store, genq = _fixture_world()
        cfg = AugmentationConfig(alpha=0.02, languages=(JA, RU), queries_per_language=2)
        result = augment_corpus(corpus, store, genq, cfg)
        expected = brute_force_expected(corpus, store, cfg)
        for p in corpus:
            assert result.vector(p.id).tobytes() == expected[p.id].tobytes()
        assert result.unaugmented_count == 0

    def test_alpha_zero_identity(self):
        corpus, store, genq = _fixture_world()
        cfg = AugmentationConfig(alpha=0.0, languages=(JA, RU), queries_per_language=2)
        result = augment_corpus(corpus, store, genq, cfg)
        for p in corpus:
            assert result.vector(p.id).tobytes() == store.get(p.id).tobytes()

    def test_minimal_composition(self):
        corpus, store, genq = _fixture_world()
        cfg = AugmentationConfig(alpha=0.5, languages=(JA,), queries_per_language=1)
        result = augment_corpus(corpus, store, genq, cfg)
        p = corpus[0]
        expected = aggregate(
            store.get(p.id), [store.get(genq_embedding_id(p.id, JA, 0))], 0.5
        )
        assert result.vector(p.id).tobytes() == expected.tobytes()

    def test_id_set_equals_corpus(self):
        corpus, store, genq = _fixture_world()
        cfg = AugmentationConfig(alpha=0.1, languages=(JA,), queries_per_language=1)
        result = augment_corpus(corpus, store, genq, cfg)
        assert result.ids == tuple(p.id for p in corpus)

    def test_missing_pair_contributes_nothing_and_is_counted(self):
        corpus, store, genq = _fixture_world()
        # p0 has Ja queries; strip all queries for p1/p2 by using a new set
        only_p0 = GeneratedQuerySet(
            [g for g in genq if g.passage_id == "p0"], corpus_ids=[p.id for p in corpus]
        )
        cfg = AugmentationConfig(alpha=0.2, languages=(JA,), queries_per_language=2)
        result = augment_corpus(corpus, store, only_p0, cfg)
        assert result.unaugmented_count == 2
        for pid in ("p1", "p2"):
            expected = (0.8 * store.get(pid).astype(np.float64)).astype(np.float32)
            assert result.vector(pid).tobytes() == expected.tobytes()

    def test_partial_pair_is_an_error(self):
        corpus, store, genq = _fixture_world()
        cfg = AugmentationConfig(alpha=0.1, languages=(JA,), queries_per_language=3)
        with pytest.raises(ValueError, match="p0.*Ja.*2 generated queries"):
            augment_corpus(corpus, store, genq, cfg)

    def test_missing_passage_embedding_fails_fast(self):
        corpus, store, genq = _fixture_world()
        corpus = corpus + [Passage(id="p9", title="", text="unseen")]
        genq = GeneratedQuerySet(list(genq), corpus_ids=[p.id for p in corpus])
        cfg = AugmentationConfig(alpha=0.1, languages=(JA,), queries_per_language=1)
        with pytest.raises(KeyError, match="p9"):
            augment_corpus(corpus, store, genq, cfg)

    def test_missing_query_embedding_fails_fast(self):
        corpus, store, genq = _fixture_world()
        extra = GeneratedQuerySet(
            list(genq) + [GeneratedQuery("p0", JA, "extra", 2)],
            corpus_ids=[p.id for p in corpus],
        )
        cfg = AugmentationConfig(alpha=0.1, languages=(JA,), queries_per_language=3)
        with pytest.raises(KeyError, match="genq::p0::Ja::2"):
            augment_corpus(corpus, store, extra, cfg)

    def test_thread_count_does_not_change_bits(self):
        corpus, store, genq = _fixture_world()
        cfg = AugmentationConfig(alpha=0.03, languages=(JA, RU), queries_per_language=2)
        a = augment_corpus(corpus, store, genq, cfg, threads=1)
        b = augment_corpus(corpus, store, genq, cfg, threads=4)
        assert a.matrix.tobytes() == b.matrix.tobytes()

    def test_renormalize_flag(self):
        corpus, store, genq = _fixture_world()
        cfg = AugmentationConfig(alpha=0.3, languages=(JA,), queries_per_language=2)
        result = augment_corpus(corpus, store, genq, cfg, renormalize=True)
        norms = np.linalg.norm(result.matrix.astype(np.float64), axis=1)
        assert np.allclose(norms, 1.0, atol=1e-6)

    def test_empty_language_set_scales_everything(self):
        corpus, store, genq = _fixture_world()
        cfg = AugmentationConfig(alpha=0.4, languages=(), queries_per_language=2)
        result = augment_corpus(corpus, store, genq, cfg)
        assert result.unaugmented_count == len(corpus)
        for p in corpus:
            expected = (0.6 * store.get(p.id).astype(np.float64)).astype(np.float32)
            assert result.vector(p.id).tobytes() == expected.tobytes()
