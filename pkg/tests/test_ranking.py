"""Channel fusion, candidate pooling and reranking contracts."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hazardqa.clients import FailingScorer, TokenOverlapScorer
from hazardqa.retrieval import (
    CandidatePool,
    ScoredPassage,
    build_candidate_pool,
    hybrid_merge,
    rerank,
)


def kw(pid, score):
    return ScoredPassage(pid, "keyword", score)


def vec(pid, score):
    return ScoredPassage(pid, "vector", score)


class TestHybridMerge:
    def test_worked_fixture(self):
        merged = hybrid_merge(
            [kw("p1", 4.0), kw("p2", 2.0)], [vec("p2", 0.9), vec("p3", 0.45)]
        )
        assert [sp.passage_id for sp in merged] == ["p2", "p1", "p3"]
        scores = {sp.passage_id: sp.score for sp in merged}
        assert scores == pytest.approx({"p2": 0.75, "p1": 0.5, "p3": 0.25})

    def test_identical_single_passage_channels(self):
        merged = hybrid_merge([kw("p1", 3.7)], [vec("p1", 0.2)])
        assert len(merged) == 1
        assert merged[0].score == pytest.approx(1.0)

    def test_empty_vector_channel_halves_scores(self):
        merged = hybrid_merge([kw("p1", 3.0), kw("p2", 1.0)], [])
        assert [sp.passage_id for sp in merged] == ["p1", "p2"]
        scores = {sp.passage_id: sp.score for sp in merged}
        assert scores["p1"] == pytest.approx(0.5)
        assert scores["p2"] == pytest.approx(1.0 / 6.0, abs=1e-4)

    def test_dedup_across_channels(self):
        merged = hybrid_merge([kw("p1", 2.0)], [vec("p1", 0.5)])
        assert len(merged) == 1

    @given(
        st.dictionaries(
            st.sampled_from([f"p{i}" for i in range(12)]),
            st.floats(min_value=1e-6, max_value=100.0, allow_nan=False),
            max_size=8,
        ),
        st.dictionaries(
            st.sampled_from([f"p{i}" for i in range(12)]),
            st.floats(min_value=1e-6, max_value=1.0, allow_nan=False),
            max_size=8,
        ),
    )
    def test_merged_scores_bounded(self, kw_scores, vec_scores):
        if not kw_scores and not vec_scores:
            return
        merged = hybrid_merge(
            [kw(p, s) for p, s in kw_scores.items()],
            [vec(p, s) for p, s in vec_scores.items()],
        )
        for sp in merged:
            assert 0.0 < sp.score <= 1.0
        if kw_scores and vec_scores:
            top_kw = max(kw_scores, key=lambda p: (kw_scores[p], p))
            if top_kw in vec_scores and vec_scores[top_kw] == max(vec_scores.values()):
                scores = {sp.passage_id: sp.score for sp in merged}
                assert scores[top_kw] == pytest.approx(1.0)

    @given(
        st.lists(
            st.tuples(st.integers(0, 20), st.floats(min_value=1e-3, max_value=50.0)),
            min_size=1,
            max_size=10,
            unique_by=lambda t: t[0],
        )
    )
    def test_single_channel_degeneracy_preserves_order(self, entries):
        channel = [kw(f"p{i:02d}", s) for i, s in entries]
        merged = hybrid_merge(channel, [])
        expected = sorted(channel, key=lambda sp: (-sp.score, sp.passage_id))
        assert [sp.passage_id for sp in merged] == [sp.passage_id for sp in expected]


class TestCandidatePool:
    def test_truncates_to_ir(self):
        results = [kw(f"p{i}", 10.0 - i) for i in range(5)]
        pool = build_candidate_pool(results, 3)
        assert [sp.passage_id for sp in pool.entries] == ["p0", "p1", "p2"]

    def test_dedup_keeps_best_score(self):
        pool = build_candidate_pool([kw("p1", 0.4), kw("p1", 0.9)], 5)
        assert len(pool.entries) == 1
        assert pool.entries[0].score == 0.9

    def test_fewer_results_than_ir(self):
        pool = build_candidate_pool([kw("p1", 1.0)], 100)
        assert len(pool.entries) == 1
        assert pool.requested_ir == 100

    def test_monotone_pool_growth(self):
        rng = random.Random(3)
        results = [kw(f"p{i:03d}", rng.random()) for i in range(40)]
        small = build_candidate_pool(results, 10).entries
        large = build_candidate_pool(results, 25).entries
        assert large[: len(small)] == small


class TestRerank:
    def make_pool(self, texts):
        entries = [ScoredPassage(pid, "merged", 1.0 - i * 0.01) for i, pid in enumerate(texts)]
        return CandidatePool(entries=tuple(entries), requested_ir=len(entries))

    def test_small_pool_returns_all(self):
        texts = {"a": "one", "b": "two", "c": "three"}
        top, degraded = rerank("one two", self.make_pool(texts), 5, TokenOverlapScorer(), texts)
        assert len(top) == 3
        assert not degraded

    def test_full_match_ranks_first(self):
        texts = {
            "a": "storm surge flooding guidance",
            "b": "storm only",
            "c": "unrelated content",
        }
        top, _ = rerank("storm surge", self.make_pool(texts), 3, TokenOverlapScorer(), texts)
        assert top[0].passage_id == "a"

    def test_matches_exhaustive_oracle(self):
        texts = {f"p{i:02d}": f"terms {' '.join(f't{j}' for j in range(i % 5))}" for i in range(12)}
        pool = self.make_pool(texts)
        scorer = TokenOverlapScorer()
        query = "t0 t1 t2"
        top, _ = rerank(query, pool, 4, scorer, texts)
        # oracle: score every entry independently, sort, take k
        scores = {pid: scorer.score_batch(query, [texts[pid]])[0] for pid in texts}
        expected = sorted(texts, key=lambda p: (-scores[p], p))[:4]
        assert [sp.passage_id for sp in top] == expected

    def test_scorer_failure_degrades_to_pool_order(self):
        texts = {"a": "x", "b": "y", "c": "z"}
        pool = self.make_pool(texts)
        top, degraded = rerank("q", pool, 2, FailingScorer(), texts)
        assert degraded
        assert [sp.passage_id for sp in top] == ["a", "b"]

    def test_empty_pool(self):
        top, degraded = rerank("q", CandidatePool((), 5), 3, TokenOverlapScorer(), {})
        assert top == [] and not degraded

    def test_batching_equals_single_batch(self):
        texts = {f"p{i:02d}": f"tok{i % 3} filler" for i in range(10)}
        pool = self.make_pool(texts)
        scorer = TokenOverlapScorer()
        full, _ = rerank("tok0 tok1", pool, 10, scorer, texts, batch=128)
        chunked, _ = rerank("tok0 tok1", pool, 10, scorer, texts, batch=3)
        assert full == chunked

    def test_randomized_contract(self):
        rng = random.Random(99)
        scorer = TokenOverlapScorer()
        for _ in range(200):
            size = rng.randint(0, 30)
            texts = {
                f"p{i:02d}": " ".join(f"w{rng.randint(0, 9)}" for _ in range(rng.randint(1, 8)))
                for i in range(size)
            }
            pool = self.make_pool(texts)
            k = rng.randint(1, 12)
            query = " ".join(f"w{rng.randint(0, 9)}" for _ in range(3))
            top, degraded = rerank(query, pool, k, scorer, texts)
            assert not degraded
            assert len(top) == min(k, size)
            pool_ids = {sp.passage_id for sp in pool.entries}
            assert all(sp.passage_id in pool_ids for sp in top)
