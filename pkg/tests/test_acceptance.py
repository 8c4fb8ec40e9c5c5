"""Acceptance suite: every release criterion with its stated tolerance.

Each test prints one pass line (run with ``pytest -s`` to see them all) and
enforces its runtime budget. The synthetic-world thresholds were measured
once on the first correct build and are pinned with +/-0.01 absolute
tolerance as regression guards.
"""

from __future__ import annotations

import filecmp
import time

import numpy as np
import pytest

from xqg.augment import aggregate
from xqg.cli import main
from xqg.core import AugmentationConfig, EvalQuery, LanguageTag, Passage, RankedList
from xqg.encoder import EmbeddingStore
from xqg.evaluation import bonferroni, paired_t_test, recall_at_kilotokens
from xqg.experiments import (
    SweepSpec,
    SyntheticWorldSpec,
    generate_synthetic_world,
    run_sweep,
    write_world,
)
from xqg.index import build_exact, build_ivf, search

# measured once on the first correct build of the seeded world (seed 7)
PINNED_BASELINE_R2KT = 0.683333
PINNED_BEST_R2KT = 0.810000
PINNED_MARGIN = PINNED_BEST_R2KT - PINNED_BASELINE_R2KT
RECALL_TOLERANCE = 0.01

ALPHA_GRID = tuple(round(0.01 * i, 2) for i in range(11))


@pytest.fixture(scope="module")
def world():
    return generate_synthetic_world(SyntheticWorldSpec())


def _finish(name: str, started: float, limit_s: float) -> None:
    elapsed = time.perf_counter() - started
    assert elapsed < limit_s, f"{name}: {elapsed:.1f}s exceeded {limit_s:.0f}s budget"
    print(f"ACCEPTANCE PASS: {name} ({elapsed:.2f}s < {limit_s:.0f}s)")


def test_eq3_algebra_suite():
    started = time.perf_counter()
    rng = np.random.default_rng(0)

    # alpha = 0 is a bit-exact identity
    p = rng.standard_normal(64).astype(np.float32)
    qs = [rng.standard_normal(64).astype(np.float32) for _ in range(5)]
    assert aggregate(p, qs, 0.0).tobytes() == p.tobytes()

    # single query at alpha = 1 returns the query embedding
    q = rng.standard_normal(64).astype(np.float32)
    assert aggregate(p, [q], 1.0).tobytes() == q.tobytes()

    # affinity in alpha within 1e-6
    for a, b in [(0.0, 1.0), (0.1, 0.3), (0.02, 0.98), (0.5, 0.5)]:
        mid = aggregate(p, qs, (a + b) / 2).astype(np.float64)
        mean = (aggregate(p, qs, a).astype(np.float64)
                + aggregate(p, qs, b).astype(np.float64)) / 2.0
        assert np.all(np.abs(mid - mean) / np.maximum(np.abs(mean), 1.0) < 1e-6)

    # sum, not mean, over generated queries
    out = aggregate(
        np.array([1.0, 0.0], np.float32),
        [np.array([0.0, 1.0], np.float32), np.array([0.0, 1.0], np.float32)],
        0.01,
    )
    assert np.array_equal(out, np.array([0.99, 0.02], np.float32))

    _finish("Eq.-algebra suite (alpha identities, affinity, sum-not-mean)", started, 1.0)


def test_index_oracle():
    started = time.perf_counter()
    rng = np.random.default_rng(1)
    store = EmbeddingStore(64)
    for i in range(1000):
        store.add(f"p{i:04d}", rng.standard_normal(64).astype(np.float32))
    queries = [rng.standard_normal(64) for _ in range(50)]

    exact = build_exact(store)
    matrix64 = exact.matrix.astype(np.float64)
    for q in queries:
        # independent brute-force scan
        scores = matrix64 @ q
        expected = [
            exact.ids[i]
            for i in sorted(range(1000), key=lambda i: (-scores[i], exact.ids[i]))[:10]
        ]
        got = [pid for pid, _ in search(exact, q, k=10).entries]
        assert got == expected

    ivf = build_ivf(store, nlist=25, kmeans_iters=5, seed=0)
    for q in queries:
        assert (
            search(ivf, q, k=10, nprobe=25).entries == search(exact, q, k=10).entries
        )

    truth = [set(pid for pid, _ in search(exact, q, k=10).entries) for q in queries]
    recalls = []
    for nprobe in (1, 2, 4, 8, 16, 25):
        hits = sum(
            len(set(pid for pid, _ in search(ivf, q, k=10, nprobe=nprobe).entries) & gold)
            for q, gold in zip(queries, truth)
        )
        recalls.append(hits / (10 * len(queries)))
    assert all(a <= b for a, b in zip(recalls, recalls[1:]))

    _finish("index oracle (exact == brute force; IVF full-probe; nprobe monotone)",
            started, 10.0)


def test_metric_oracle():
    started = time.perf_counter()
    ja = LanguageTag("Ja")
    far = Passage(id="pfar", title="", text=" ".join(f"f{i}" for i in range(1500)))
    hit = Passage(
        id="phit", title="",
        text=" ".join([f"pad{i}" for i in range(100)] + ["Paris"] + ["t"] * 60),
    )
    queries = [EvalQuery(qid="q1", lang=ja, text="?", answers=("paris",))]
    run = [RankedList("q1", (("pfar", 1.0), ("phit", 0.5)))]
    assert recall_at_kilotokens(run, [far, hit], queries, 2000).average == 1.0
    assert recall_at_kilotokens(run, [far, hit], queries, 1550).average == 0.0
    assert recall_at_kilotokens([], [far, hit], queries, 2000).average == 0.0

    rng = np.random.default_rng(2)
    for _ in range(200):
        n = int(rng.integers(2, 8))
        corpus = [
            Passage(id=f"p{i}", title="",
                    text=" ".join(f"w{int(rng.integers(30))}"
                                  for _ in range(int(rng.integers(5, 50)))))
            for i in range(n)
        ]
        qs = [
            EvalQuery(qid=f"q{j}", lang=ja, text="?",
                      answers=(f"w{int(rng.integers(30))}",))
            for j in range(3)
        ]
        rl = [
            RankedList.from_scores(
                q.qid, [(f"p{i}", float(rng.standard_normal())) for i in range(n)]
            )
            for q in qs
        ]
        r2 = recall_at_kilotokens(rl, corpus, qs, 40)
        r5 = recall_at_kilotokens(rl, corpus, qs, 100)
        assert r5.average >= r2.average

    _finish("metric oracle (hand-trace, monotone budget, empty run)", started, 5.0)


def test_statistics_oracle():
    started = time.perf_counter()
    t, p = paired_t_test([1, 0, 1, 1, 0, 1, 1, 1], [0, 0, 1, 0, 0, 1, 0, 1])
    assert t == pytest.approx(2.049390153192, abs=1e-6)
    assert p == pytest.approx(0.079602012455, abs=1e-6)
    assert paired_t_test([1, 1, 1, 1], [1, 1, 1, 1]) == (0.0, 1.0)
    assert bonferroni([0.01], 7) == [pytest.approx(0.07)]
    assert bonferroni([0.5], 7) == [1.0]
    assert bonferroni([0.2, 0.9], 1) == [0.2, 0.9]
    _finish("statistics oracle (pinned t-test, zero variance, Bonferroni clamp)",
            started, 1.0)


def test_synthetic_cross_lingual_experiment(world):
    started = time.perf_counter()
    spec = SweepSpec(
        variable="alpha",
        grid=ALPHA_GRID,
        fixed=AugmentationConfig(0.0, world.spec.languages, 5),
        m_tokens_list=(2000,),
    )
    result = run_sweep(spec, world.corpus, world.genq, world.store, world.queries)
    recall = {row.value: row.metrics[2000].average for row in result.rows}

    baseline = recall[0.0]
    best = max(recall[a] for a in ALPHA_GRID[1:])
    margin = best - baseline

    assert best > baseline, "augmentation must strictly improve mean recall"
    assert abs(baseline - PINNED_BASELINE_R2KT) <= RECALL_TOLERANCE
    assert abs(margin - PINNED_MARGIN) <= RECALL_TOLERANCE
    # rise-then-fall: the small-alpha region already beats the baseline and
    # the top of the grid has come back down off the peak
    assert max(recall[a] for a in (0.01, 0.02, 0.03)) > baseline
    assert recall[0.1] <= max(recall.values())
    assert recall[0.1] < best, "recall at the top of the grid should be off the peak"

    _finish(
        f"synthetic cross-lingual experiment (baseline {baseline:.4f}, "
        f"best {best:.4f}, margin {margin:+.4f})",
        started, 120.0,
    )


def test_rq1_query_count_shape(world):
    started = time.perf_counter()
    spec = SweepSpec(
        variable="n_queries",
        grid=(0, 1, 2, 3, 4, 5),
        fixed=AugmentationConfig(0.02, world.spec.languages, 5),
        m_tokens_list=(2000,),
    )
    result = run_sweep(spec, world.corpus, world.genq, world.store, world.queries)
    values = [row.metrics[2000].average for row in result.rows]

    inversions = [
        (a - b) for a, b in zip(values, values[1:]) if b < a
    ]
    assert len(inversions) <= 1, f"more than one inversion in {values}"
    assert all(drop <= 0.005 for drop in inversions), f"inversion too large in {values}"
    assert values[-1] > values[0], "five queries per language must beat none"

    _finish(
        f"query-count trend (n 0..5 -> {', '.join(f'{v:.3f}' for v in values)})",
        started, 180.0,
    )


def test_cli_determinism(tmp_path, world):
    started = time.perf_counter()

    world_small = tmp_path / "w"
    write_world(
        generate_synthetic_world(
            SyntheticWorldSpec(
                num_passages=60, vocab_per_language=60,
                languages=(LanguageTag("Ja"), LanguageTag("Ru")),
                queries_per_language=15, samples_per_language=3, passage_tokens=30,
                num_topics=8, topic_vocab=10, seed=13,
            )
        ),
        world_small,
    )

    def run_pipeline(outdir, threads):
        outdir.mkdir(parents=True, exist_ok=True)
        c, g, q, s = (
            world_small / "corpus.jsonl", world_small / "genq.jsonl",
            world_small / "eval_queries.jsonl", world_small / "store.xqge",
        )
        outs = {name: outdir / name for name in (
            "enc.xqge", "aug.xqge", "exact.xqgi", "ivf.xqgi", "out.run",
            "report.json", "sweep_alpha.json",
        )}
        argvs = [
            ["encode", "--input", c, "--out", outs["enc.xqge"], "--dim", "32", "--seed", "5"],
            ["augment", "--corpus", c, "--genq", g, "--passage-store", s,
             "--genq-store", s, "--alpha", "0.02", "--langs", "Ja,Ru", "--n", "3",
             "--out", outs["aug.xqge"], "--threads", str(threads)],
            ["index", "--store", outs["aug.xqge"], "--out", outs["exact.xqgi"]],
            ["index", "--store", outs["aug.xqge"], "--out", outs["ivf.xqgi"],
             "--variant", "ivf", "--nlist", "6", "--seed", "4"],
            ["search", "--index", outs["exact.xqgi"], "--queries", q,
             "--query-store", s, "--k", "30", "--out", outs["out.run"]],
            ["eval", "--run", outs["out.run"], "--corpus", c, "--queries", q,
             "--m", "160", "--report", outs["report.json"]],
            ["sweep", "--variable", "alpha", "--grid", "0,0.02,0.05", "--corpus", c,
             "--genq", g, "--queries", q, "--passage-store", s, "--genq-store", s,
             "--query-store", s, "--n", "3", "--m-list", "160", "--k", "30",
             "--langs", "Ja,Ru", "--out", outs["sweep_alpha.json"],
             "--threads", str(threads)],
        ]
        for argv in argvs:
            assert main([str(a) for a in argv]) == 0
        return list(outs.values()) + [outs["sweep_alpha.json"].with_suffix(".png")]

    files_a = run_pipeline(tmp_path / "a", threads=1)
    files_b = run_pipeline(tmp_path / "b", threads=1)
    files_c = run_pipeline(tmp_path / "c", threads=4)
    for fa, fb in zip(files_a, files_b):
        assert filecmp.cmp(fa, fb, shallow=False), f"double run differs: {fa.name}"
    for fa, fc in zip(files_a, files_c):
        assert filecmp.cmp(fa, fc, shallow=False), f"thread count changed: {fa.name}"

    _finish("CLI determinism (double runs and thread counts byte-identical)",
            started, 120.0)
