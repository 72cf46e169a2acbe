"""Dense retrieval over unit-normalized passage embeddings.

Search is an exact cosine scan: at the corpus sizes this engine targets the
scan is fast, deterministic, and directly comparable against a brute-force
oracle. Approximate structures can be layered behind the same interface.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from ..clients import EmbeddingClient
from ..corpus import Corpus
from .ranking import CHANNEL_VECTOR, ScoredPassage


class EmbedderError(Exception):
    """The embedding backend failed or does not match the index."""


class VectorIndex:
    """One unit vector per passage plus the signature of its embedder."""

    def __init__(self, ids: list[str], matrix: np.ndarray, embedder_signature: str):
        if matrix.ndim != 2 or matrix.shape[0] != len(ids):
            raise ValueError("matrix shape does not match ids")
        self.ids = list(ids)
        self.matrix = matrix.astype(np.float64)
        self.embedder_signature = embedder_signature

    @classmethod
    def build(cls, corpus: Corpus, embedder: EmbeddingClient) -> "VectorIndex":
        if corpus.count == 0:
            raise ValueError("cannot index an empty corpus")
        ids: list[str] = []
        rows: list[np.ndarray] = []
        for passage in corpus:
            try:
                vec = np.asarray(embedder.embed(passage.text), dtype=np.float64)
            except Exception as exc:  # noqa: BLE001
                raise EmbedderError(f"embedding failed for passage {passage.id!r}: {exc}") from exc
            ids.append(passage.id)
            rows.append(vec)
        return cls(ids, np.vstack(rows), embedder.signature)

    def __len__(self) -> int:
        return len(self.ids)

    def to_dict(self) -> dict[str, Any]:
        return {
            "embedder_signature": self.embedder_signature,
            "ids": self.ids,
            "vectors": self.matrix.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "VectorIndex":
        return cls(
            ids=list(data["ids"]),
            matrix=np.asarray(data["vectors"], dtype=np.float64),
            embedder_signature=str(data["embedder_signature"]),
        )


def vector_search(
    query: str, n: int, index: VectorIndex, embedder: EmbeddingClient
) -> list[ScoredPassage]:
    """Top-n passages by cosine similarity to the embedded query.

    Raises :class:`EmbedderError` when the embedder does not match the one
    the index was built with, or when embedding the query fails.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if embedder.signature != index.embedder_signature:
        raise EmbedderError(
            f"index built with {index.embedder_signature!r}, "
            f"queried with {embedder.signature!r}"
        )
    try:
        query_vec = np.asarray(embedder.embed(query), dtype=np.float64)
    except Exception as exc:  # noqa: BLE001
        raise EmbedderError(f"query embedding failed: {exc}") from exc
    sims = index.matrix @ query_vec
    order = sorted(range(len(index.ids)), key=lambda i: (-sims[i], index.ids[i]))
    return [
        ScoredPassage(index.ids[i], CHANNEL_VECTOR, float(sims[i])) for i in order[:n]
    ]
