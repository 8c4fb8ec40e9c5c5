from __future__ import annotations

import numpy as np
import pytest

from xqg.encoder import EmbeddingStore
from xqg.formats import FormatError
from xqg.index import build_exact, build_ivf, read_index, search, write_index


def _random_store(n: int, dim: int, seed: int) -> EmbeddingStore:
    rng = np.random.default_rng(seed)
    store = EmbeddingStore(dim)
    for i in range(n):
        store.add(f"p{i:04d}", rng.standard_normal(dim).astype(np.float32))
    return store


def brute_force_topk(store: EmbeddingStore, q: np.ndarray, k: int) -> list[str]:
    """Independent O(N*d) scan: float64 dots, sort by (-score, id)."""
    scored = []
    for eid in store.ids():
        vec = store.get(eid).astype(np.float64)
        score = float(np.dot(vec, q.astype(np.float64)))
        scored.append((eid, score))
    scored.sort(key=lambda e: (-e[1], e[0]))
    return [eid for eid, _ in scored[:k]]


class TestExact:
    def test_singleton(self):
        store = EmbeddingStore(2, [("p1", np.array([3.0, 4.0], np.float32))])
        index = build_exact(store)
        rl = search(index, np.array([1.0, 1.0]), k=5, qid="q")
        assert rl.entries == (("p1", 7.0),)

    def test_build_is_deterministic(self):
        store = _random_store(50, 8, 1)
        a, b = build_exact(store), build_exact(store)
        assert a.ids == b.ids
        assert a.matrix.tobytes() == b.matrix.tobytes()

    def test_matches_brute_force_on_1000x64(self):
        store = _random_store(1000, 64, 2)
        index = build_exact(store)
        rng = np.random.default_rng(3)
        for _ in range(50):
            q = rng.standard_normal(64)
            got = [pid for pid, _ in search(index, q, k=10).entries]
            assert got == brute_force_topk(store, q, 10)

    def test_orthogonal_query_ties_break_by_id(self):
        store = EmbeddingStore(3)
        for name in ("pc", "pa", "pb"):
            store.add(name, np.array([1.0, 0.0, 0.0], np.float32))
        index = build_exact(store)
        rl = search(index, np.array([0.0, 1.0, 0.0]), k=3)
        assert [pid for pid, _ in rl.entries] == ["pa", "pb", "pc"]
        assert all(score == 0.0 for _, score in rl.entries)

    def test_k_larger_than_corpus_returns_all(self):
        store = _random_store(5, 4, 4)
        index = build_exact(store)
        assert len(search(index, np.ones(4), k=100).entries) == 5

    def test_full_k_gives_total_descending_order(self):
        store = _random_store(40, 8, 5)
        index = build_exact(store)
        rl = search(index, np.ones(8), k=40)
        scores = [s for _, s in rl.entries]
        assert all(a >= b for a, b in zip(scores, scores[1:]))

    def test_no_duplicates_and_size_bound(self):
        store = _random_store(30, 8, 6)
        index = build_exact(store)
        rl = search(index, np.ones(8), k=10)
        ids = [pid for pid, _ in rl.entries]
        assert len(ids) == len(set(ids)) == 10

    def test_dimension_mismatch(self):
        index = build_exact(_random_store(5, 4, 7))
        with pytest.raises(ValueError, match="dimension"):
            search(index, np.ones(5), k=1)

    def test_nprobe_invalid_on_exact(self):
        index = build_exact(_random_store(5, 4, 8))
        with pytest.raises(ValueError, match="nprobe"):
            search(index, np.ones(4), k=1, nprobe=2)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            build_exact(EmbeddingStore(4))


class TestIvf:
    def test_nlist_one_equals_exact(self):
        store = _random_store(100, 16, 10)
        exact = build_exact(store)
        ivf = build_ivf(store, nlist=1, kmeans_iters=3, seed=0)
        rng = np.random.default_rng(11)
        for _ in range(10):
            q = rng.standard_normal(16)
            assert search(ivf, q, k=7, nprobe=1).entries == search(exact, q, k=7).entries

    def test_same_seed_same_clustering(self):
        store = _random_store(200, 16, 12)
        a = build_ivf(store, nlist=8, kmeans_iters=5, seed=3)
        b = build_ivf(store, nlist=8, kmeans_iters=5, seed=3)
        assert a.ivf.centroids.tobytes() == b.ivf.centroids.tobytes()
        assert all(np.array_equal(x, y) for x, y in zip(a.ivf.lists, b.ivf.lists))

    def test_different_seed_can_differ(self):
        store = _random_store(200, 16, 12)
        a = build_ivf(store, nlist=8, kmeans_iters=5, seed=3)
        b = build_ivf(store, nlist=8, kmeans_iters=5, seed=4)
        assert a.ivf.centroids.tobytes() != b.ivf.centroids.tobytes()

    def test_full_probe_equals_exact_on_500(self):
        store = _random_store(500, 32, 13)
        exact = build_exact(store)
        ivf = build_ivf(store, nlist=20, kmeans_iters=5, seed=1)
        rng = np.random.default_rng(14)
        for _ in range(25):
            q = rng.standard_normal(32)
            assert search(ivf, q, k=10, nprobe=20).entries == search(exact, q, k=10).entries

    def test_recall_monotone_in_nprobe(self):
        store = _random_store(600, 32, 15)
        exact = build_exact(store)
        nlist = 32
        ivf = build_ivf(store, nlist=nlist, kmeans_iters=6, seed=2)
        rng = np.random.default_rng(16)
        queries = [rng.standard_normal(32) for _ in range(30)]
        truth = [set(pid for pid, _ in search(exact, q, k=10).entries) for q in queries]
        probes = [1, 2, 4, 8, 16, 32]
        recalls = []
        for nprobe in probes:
            hits = 0
            for q, gold in zip(queries, truth):
                got = set(pid for pid, _ in search(ivf, q, k=10, nprobe=nprobe).entries)
                hits += len(got & gold)
            recalls.append(hits / (10 * len(queries)))
        assert all(a <= b for a, b in zip(recalls, recalls[1:]))
        assert recalls[-1] == 1.0

    def test_lists_partition_rows(self):
        store = _random_store(120, 8, 17)
        ivf = build_ivf(store, nlist=10, kmeans_iters=4, seed=5)
        assigned = np.sort(np.concatenate(ivf.ivf.lists))
        assert np.array_equal(assigned, np.arange(120))

    def test_nlist_exceeding_count_rejected(self):
        store = _random_store(4, 8, 18)
        with pytest.raises(ValueError, match="nlist"):
            build_ivf(store, nlist=5)

    def test_nprobe_out_of_range(self):
        store = _random_store(50, 8, 19)
        ivf = build_ivf(store, nlist=5, kmeans_iters=2, seed=0)
        with pytest.raises(ValueError, match="nprobe"):
            search(ivf, np.ones(8), k=1, nprobe=6)


class TestSerialization:
    def test_exact_round_trip(self, tmp_path):
        index = build_exact(_random_store(30, 8, 20))
        path = tmp_path / "i.xqgi"
        write_index(index, path)
        loaded = read_index(path)
        assert loaded.ids == index.ids
        assert loaded.matrix.tobytes() == index.matrix.tobytes()
        assert loaded.ivf is None

    def test_ivf_round_trip(self, tmp_path):
        index = build_ivf(_random_store(80, 8, 21), nlist=6, kmeans_iters=3, seed=1)
        path = tmp_path / "i.xqgi"
        write_index(index, path)
        loaded = read_index(path)
        assert loaded.ids == index.ids
        assert loaded.matrix.tobytes() == index.matrix.tobytes()
        assert loaded.ivf.default_nprobe == index.ivf.default_nprobe
        assert loaded.ivf.centroids.tobytes() == index.ivf.centroids.tobytes()
        assert all(np.array_equal(a, b) for a, b in zip(loaded.ivf.lists, index.ivf.lists))
        # search results identical through the round trip
        q = np.random.default_rng(22).standard_normal(8)
        assert search(loaded, q, k=5).entries == search(index, q, k=5).entries

    def test_bad_magic(self, tmp_path):
        index = build_exact(_random_store(5, 4, 23))
        path = tmp_path / "i.xqgi"
        write_index(index, path)
        data = bytearray(path.read_bytes())
        data[0] = ord("Y")
        path.write_bytes(bytes(data))
        with pytest.raises(FormatError, match="bad magic"):
            read_index(path)

    def test_truncation(self, tmp_path):
        index = build_exact(_random_store(5, 4, 24))
        path = tmp_path / "i.xqgi"
        write_index(index, path)
        path.write_bytes(path.read_bytes()[:-3])
        with pytest.raises(FormatError, match="truncated"):
            read_index(path)

    def test_trailing_bytes(self, tmp_path):
        index = build_exact(_random_store(5, 4, 25))
        path = tmp_path / "i.xqgi"
        write_index(index, path)
        path.write_bytes(path.read_bytes() + b"!")
        with pytest.raises(FormatError, match="trailing"):
            read_index(path)
