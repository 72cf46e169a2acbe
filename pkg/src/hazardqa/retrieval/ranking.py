"""Scored results, channel fusion, candidate pooling and reranking.

Ordering is total everywhere: descending score, ties broken by ascending
passage id, so identical inputs always produce identical rankings.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from ..clients import RerankScorer

DEFAULT_RERANK_BATCH = 128

CHANNEL_KEYWORD = "keyword"
CHANNEL_VECTOR = "vector"
CHANNEL_MERGED = "merged"
CHANNEL_RERANKED = "reranked"


@dataclass(frozen=True)
class ScoredPassage:
    passage_id: str
    channel: str
    score: float


@dataclass(frozen=True)
class CandidatePool:
    """Deduplicated, descending-sorted candidates truncated to the requested size."""

    entries: tuple[ScoredPassage, ...]
    requested_ir: int


def sort_scored(results: Sequence[ScoredPassage]) -> list[ScoredPassage]:
    return sorted(results, key=lambda sp: (-sp.score, sp.passage_id))


def hybrid_merge(
    kw: Sequence[ScoredPassage], vec: Sequence[ScoredPassage]
) -> list[ScoredPassage]:
    """Fuse keyword and vector channels into one ranked list.

    Each channel's scores are normalized by that channel's maximum, then
    combined with equal weights; a passage absent from a channel contributes
    0 from it. Entries with non-positive scores carry no evidence and are
    dropped before normalization, which keeps every merged score in (0, 1].
    A passage ranked top in both channels scores exactly 1.0.
    """
    def normalize(channel: Sequence[ScoredPassage]) -> dict[str, float]:
        positive = [sp for sp in channel if sp.score > 0.0]
        if not positive:
            return {}
        top = max(sp.score for sp in positive)
        return {sp.passage_id: sp.score / top for sp in positive}

    kw_norm = normalize(kw)
    vec_norm = normalize(vec)
    merged = {
        pid: 0.5 * kw_norm.get(pid, 0.0) + 0.5 * vec_norm.get(pid, 0.0)
        for pid in kw_norm.keys() | vec_norm.keys()
    }
    return sort_scored(
        ScoredPassage(pid, CHANNEL_MERGED, score) for pid, score in merged.items()
    )


def build_candidate_pool(results: Sequence[ScoredPassage], ir: int) -> CandidatePool:
    """Deduplicate (keeping the best score per passage), sort, truncate to ``ir``."""
    if ir < 1:
        raise ValueError("candidate pool size must be positive")
    best: dict[str, ScoredPassage] = {}
    for sp in results:
        current = best.get(sp.passage_id)
        if current is None or sp.score > current.score:
            best[sp.passage_id] = sp
    return CandidatePool(entries=tuple(sort_scored(best.values())[:ir]), requested_ir=ir)


def rerank(
    query: str,
    pool: CandidatePool,
    k: int,
    scorer: RerankScorer,
    texts: Mapping[str, str],
    batch: int = DEFAULT_RERANK_BATCH,
) -> tuple[list[ScoredPassage], bool]:
    """Score every pool entry jointly with the query and keep the top k.

    The pool is scored in batches of ``batch``. Returns ``(entries,
    degraded)``: on scorer failure the pool order truncated to ``k`` is
    returned with ``degraded=True`` instead of raising. Output is always a
    subset of the pool with ``min(k, |pool|)`` entries.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if batch < 1:
        raise ValueError("batch must be positive")
    entries = list(pool.entries)
    if not entries:
        return [], False
    try:
        scores: list[float] = []
        for start in range(0, len(entries), batch):
            chunk = entries[start : start + batch]
            chunk_scores = scorer.score_batch(query, [texts[sp.passage_id] for sp in chunk])
            if len(chunk_scores) != len(chunk):
                raise ValueError("scorer returned misaligned scores")
            scores.extend(float(s) for s in chunk_scores)
    except Exception:  # noqa: BLE001 - any scorer failure degrades, never crashes
        return [replace(sp, channel=CHANNEL_RERANKED) for sp in entries[:k]], True
    rescored = [
        ScoredPassage(sp.passage_id, CHANNEL_RERANKED, score)
        for sp, score in zip(entries, scores)
    ]
    return sort_scored(rescored)[:k], False
