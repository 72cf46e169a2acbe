"""Two-stage document retrieval: initial search, fusion, reranking."""

from .bm25 import EmptyCorpusError, InvertedIndex, keyword_search
from .pipeline import (
    DocumentRetriever,
    IndexBundle,
    RetrievalConfig,
    RetrievalStrategy,
    assemble_context,
    build_indices,
    load_indices,
    save_indices,
)
from .ranking import (
    CandidatePool,
    ScoredPassage,
    build_candidate_pool,
    hybrid_merge,
    rerank,
)
from .vectors import EmbedderError, VectorIndex, vector_search

__all__ = [
    "CandidatePool",
    "DocumentRetriever",
    "EmbedderError",
    "EmptyCorpusError",
    "IndexBundle",
    "InvertedIndex",
    "RetrievalConfig",
    "RetrievalStrategy",
    "ScoredPassage",
    "VectorIndex",
    "assemble_context",
    "build_candidate_pool",
    "build_indices",
    "hybrid_merge",
    "keyword_search",
    "load_indices",
    "rerank",
    "save_indices",
    "vector_search",
]
