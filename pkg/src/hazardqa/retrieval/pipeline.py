"""End-to-end document retrieval: strategy dispatch through context assembly.

The pipeline is: initial retrieval (keyword, vector, or both channels fused)
at the configured pool size, candidate pooling, cross-scored reranking to
depth k, then token-budgeted context assembly. Under the hybrid strategy
each channel is fetched at the full pool size and the merged list is
truncated back to it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from ..clients import EmbeddingClient, RerankScorer
from ..corpus import Corpus
from ..grounding import (
    MCQ_CONTEXT_TOKENS,
    OE_UNIT_TOKENS,
    GroundingContext,
    TaskKind,
)
from ..routing import Pathway
from ..tokens import count_tokens, truncate_to_tokens
from .bm25 import InvertedIndex, keyword_search
from .ranking import (
    DEFAULT_RERANK_BATCH,
    ScoredPassage,
    build_candidate_pool,
    hybrid_merge,
    rerank,
)
from .vectors import EmbedderError, VectorIndex, vector_search

SNAPSHOT_VERSION = 1


class RetrievalStrategy(Enum):
    KEYWORD = "keyword"
    VECTOR = "vector"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class RetrievalConfig:
    """Initial pool size (IR), rerank depth (k) and batch for one strategy."""

    strategy: RetrievalStrategy
    pool_size: int = 100
    rerank_k: int = 5
    rerank_batch: int = DEFAULT_RERANK_BATCH

    def __post_init__(self) -> None:
        if self.pool_size < 1 or self.rerank_k < 1 or self.rerank_batch < 1:
            raise ValueError("pool_size, rerank_k and rerank_batch must be positive")
        if self.rerank_k > self.pool_size:
            raise ValueError("rerank_k cannot exceed pool_size")


@dataclass
class IndexBundle:
    """Keyword index plus (when the embedder succeeded) the vector index."""

    keyword: InvertedIndex
    vector: VectorIndex | None = None


def build_indices(corpus: Corpus, embedder: EmbeddingClient | None = None) -> IndexBundle:
    """Build both indices; an embedder failure leaves keyword-only retrieval usable."""
    keyword = InvertedIndex.build(corpus)
    vector = None
    if embedder is not None:
        try:
            vector = VectorIndex.build(corpus, embedder)
        except EmbedderError:
            vector = None
    return IndexBundle(keyword=keyword, vector=vector)


def save_indices(bundle: IndexBundle, path: str | Path) -> None:
    snapshot = {
        "version": SNAPSHOT_VERSION,
        "keyword": bundle.keyword.to_dict(),
        "vector": bundle.vector.to_dict() if bundle.vector is not None else None,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(snapshot, fh)


def load_indices(path: str | Path) -> IndexBundle:
    with open(path, encoding="utf-8") as fh:
        snapshot = json.load(fh)
    if snapshot.get("version") != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported index snapshot version: {snapshot.get('version')!r}")
    vector = snapshot.get("vector")
    return IndexBundle(
        keyword=InvertedIndex.from_dict(snapshot["keyword"]),
        vector=VectorIndex.from_dict(vector) if vector is not None else None,
    )


def assemble_context(
    units: Sequence[tuple[str, str]],
    task_kind: TaskKind,
    branch: Pathway = Pathway.DOCUMENT_RETRIEVAL,
    degraded: bool = False,
) -> GroundingContext:
    """Apply the task's token budget to ordered (source_id, text) units.

    MCQ: units are concatenated in order under a 6,000-token total budget;
    whole trailing units are dropped first and the boundary unit is cut to
    the remaining budget. Open-ended and interactive: every unit is
    independently truncated to 512 tokens.
    """
    out: list[tuple[str, str]] = []
    total = 0
    if task_kind is TaskKind.MCQ:
        for source_id, text in units:
            remaining = MCQ_CONTEXT_TOKENS - total
            if remaining <= 0:
                break
            n = count_tokens(text)
            if n <= remaining:
                out.append((source_id, text))
                total += n
            else:
                out.append((source_id, truncate_to_tokens(text, remaining)))
                total = MCQ_CONTEXT_TOKENS
                break
    else:
        for source_id, text in units:
            cut = truncate_to_tokens(text, OE_UNIT_TOKENS)
            out.append((source_id, cut))
            total += count_tokens(cut)
    return GroundingContext(
        branch=branch, units=tuple(out), total_tokens=total, degraded=degraded
    )


class DocumentRetriever:
    """Runs the configured retrieval pipeline over prebuilt indices."""

    def __init__(
        self,
        corpus: Corpus,
        indices: IndexBundle,
        embedder: EmbeddingClient,
        scorer: RerankScorer,
    ):
        self.corpus = corpus
        self.indices = indices
        self.embedder = embedder
        self.scorer = scorer
        self._texts = {p.id: p.text for p in corpus}

    def initial_results(self, query: str, config: RetrievalConfig) -> list[ScoredPassage]:
        if config.strategy is RetrievalStrategy.KEYWORD:
            return keyword_search(query, config.pool_size, self.indices.keyword)
        if self.indices.vector is None:
            raise EmbedderError("vector index not available")
        if config.strategy is RetrievalStrategy.VECTOR:
            return vector_search(query, config.pool_size, self.indices.vector, self.embedder)
        kw = keyword_search(query, config.pool_size, self.indices.keyword)
        vec = vector_search(query, config.pool_size, self.indices.vector, self.embedder)
        return hybrid_merge(kw, vec)

    def retrieve(
        self,
        query: str,
        config: RetrievalConfig,
        task_kind: TaskKind = TaskKind.INTERACTIVE,
    ) -> GroundingContext:
        results = self.initial_results(query, config)
        pool = build_candidate_pool(results, config.pool_size)
        top, degraded = rerank(
            query, pool, config.rerank_k, self.scorer, self._texts, config.rerank_batch
        )
        units = [
            (self.corpus.by_id[sp.passage_id].source_id, self._texts[sp.passage_id])
            for sp in top
        ]
        return assemble_context(units, task_kind, degraded=degraded)
