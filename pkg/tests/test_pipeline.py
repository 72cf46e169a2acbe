"""Context budgets, strategy dispatch and index snapshots."""

import json
import random

import pytest

from hazardqa.clients import HashEmbedder, TokenOverlapScorer
from hazardqa.corpus import ingest_passages
from hazardqa.grounding import TaskKind
from hazardqa.retrieval import (
    DocumentRetriever,
    RetrievalConfig,
    RetrievalStrategy,
    assemble_context,
    build_indices,
    load_indices,
    save_indices,
)
from hazardqa.routing import Pathway
from hazardqa.tokens import count_tokens


def words(n, prefix="w"):
    return " ".join(f"{prefix}{i}" for i in range(n))


class TestAssembleContext:
    def test_mcq_boundary_fixture(self):
        units = [(f"s{i}", words(2500, f"p{i}x")) for i in range(3)]
        ctx = assemble_context(units, TaskKind.MCQ)
        assert ctx.total_tokens == 6000
        assert len(ctx.units) == 3
        assert count_tokens(ctx.units[0][1]) == 2500
        assert count_tokens(ctx.units[1][1]) == 2500
        assert count_tokens(ctx.units[2][1]) == 1000

    def test_mcq_within_budget_unchanged(self):
        units = [("s0", words(100)), ("s1", words(50))]
        ctx = assemble_context(units, TaskKind.MCQ)
        assert ctx.total_tokens == 150
        assert ctx.units[0][1] == units[0][1]

    def test_mcq_drops_trailing_units(self):
        units = [("s0", words(5999)), ("s1", words(10, "a")), ("s2", words(10, "b"))]
        ctx = assemble_context(units, TaskKind.MCQ)
        assert ctx.total_tokens == 6000
        assert len(ctx.units) == 2

    def test_oe_per_unit_truncation(self):
        ctx = assemble_context([("s0", words(600))], TaskKind.OPEN_ENDED)
        assert count_tokens(ctx.units[0][1]) == 512

    def test_interactive_same_as_oe(self):
        units = [("s0", words(600)), ("s1", words(40))]
        oe = assemble_context(units, TaskKind.OPEN_ENDED)
        interactive = assemble_context(units, TaskKind.INTERACTIVE)
        assert oe.units == interactive.units

    def test_empty_units(self):
        ctx = assemble_context([], TaskKind.MCQ)
        assert ctx.units == () and ctx.total_tokens == 0

    def test_randomized_budget_safety(self):
        rng = random.Random(17)
        for _ in range(60):
            units = [
                (f"s{i}", words(rng.randint(1, 3000), f"u{i}n"))
                for i in range(rng.randint(0, 8))
            ]
            mcq = assemble_context(units, TaskKind.MCQ)
            assert mcq.total_tokens <= 6000
            assert sum(count_tokens(t) for _, t in mcq.units) == mcq.total_tokens
            oe = assemble_context(units, TaskKind.OPEN_ENDED)
            for _, text in oe.units:
                assert count_tokens(text) <= 512


class TestRetrievalConfig:
    def test_rerank_k_bounded_by_pool(self):
        with pytest.raises(ValueError):
            RetrievalConfig(RetrievalStrategy.KEYWORD, pool_size=5, rerank_k=10)

    def test_positive_fields(self):
        with pytest.raises(ValueError):
            RetrievalConfig(RetrievalStrategy.KEYWORD, pool_size=0, rerank_k=1)


@pytest.fixture
def small_corpus():
    records = [
        {"id": "p1", "source_id": "fema-1", "text": "storm surge flooding along the coast"},
        {"id": "p2", "source_id": "noaa-1", "text": "wildfire smoke advisory for the valley"},
        {"id": "p3", "source_id": "fema-2", "text": "evacuation routes out of houston"},
        {"id": "p4", "source_id": "noaa-2", "text": "storm surge and evacuation timing"},
    ]
    return ingest_passages(records)


@pytest.fixture
def retriever(small_corpus):
    embedder = HashEmbedder(dim=64)
    indices = build_indices(small_corpus, embedder)
    return DocumentRetriever(small_corpus, indices, embedder, TokenOverlapScorer())


class TestRetrieve:
    def test_keyword_strategy(self, retriever):
        config = RetrievalConfig(RetrievalStrategy.KEYWORD, pool_size=100, rerank_k=5)
        ctx = retriever.retrieve("storm surge", config)
        assert ctx.branch is Pathway.DOCUMENT_RETRIEVAL
        assert 1 <= len(ctx.units) <= 5
        assert ctx.units[0][0] in {"fema-1", "noaa-2"}

    def test_vector_strategy(self, retriever):
        config = RetrievalConfig(RetrievalStrategy.VECTOR, pool_size=4, rerank_k=2)
        ctx = retriever.retrieve("evacuation houston", config)
        assert len(ctx.units) == 2

    def test_hybrid_strategy(self, retriever):
        config = RetrievalConfig(RetrievalStrategy.HYBRID, pool_size=4, rerank_k=2)
        ctx = retriever.retrieve("storm surge evacuation", config)
        assert len(ctx.units) == 2

    def test_all_grid_configs_run(self, retriever):
        for strategy in RetrievalStrategy:
            for ir in (100, 150, 200):
                for k in (5, 10, 15):
                    config = RetrievalConfig(strategy, pool_size=ir, rerank_k=k)
                    ctx = retriever.retrieve("storm evacuation", config)
                    assert ctx.total_tokens >= 0

    def test_deterministic_contexts(self, small_corpus):
        def build():
            embedder = HashEmbedder(dim=64)
            indices = build_indices(small_corpus, embedder)
            r = DocumentRetriever(small_corpus, indices, embedder, TokenOverlapScorer())
            config = RetrievalConfig(RetrievalStrategy.HYBRID, pool_size=4, rerank_k=3)
            return r.retrieve("storm surge evacuation", config, TaskKind.OPEN_ENDED)

        assert build() == build()


class TestSnapshots:
    def test_round_trip_preserves_retrieval(self, small_corpus, tmp_path):
        embedder = HashEmbedder(dim=64)
        indices = build_indices(small_corpus, embedder)
        path = tmp_path / "indices.json"
        save_indices(indices, path)
        restored = load_indices(path)
        scorer = TokenOverlapScorer()
        config = RetrievalConfig(RetrievalStrategy.HYBRID, pool_size=4, rerank_k=3)
        before = DocumentRetriever(small_corpus, indices, embedder, scorer).retrieve(
            "storm surge", config
        )
        after = DocumentRetriever(small_corpus, restored, embedder, scorer).retrieve(
            "storm surge", config
        )
        assert before == after

    def test_version_checked(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"version": 99}))
        with pytest.raises(ValueError):
            load_indices(path)

    def test_keyword_only_bundle(self, small_corpus, tmp_path):
        indices = build_indices(small_corpus, embedder=None)
        assert indices.vector is None
        path = tmp_path / "kw.json"
        save_indices(indices, path)
        assert load_indices(path).vector is None
