"""In-process inverted index with Okapi BM25 scoring.

Parameters default to the canonical k1=1.2, b=0.75. The idf uses the
non-negative variant log(1 + (N - df + 0.5) / (df + 0.5)), so a passage
scores above zero iff it matches at least one query term. Repeated query
terms contribute once.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Any

from ..corpus import Corpus
from ..tokens import analyze
from .ranking import CHANNEL_KEYWORD, ScoredPassage, sort_scored

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


class EmptyCorpusError(Exception):
    """Index construction requires at least one passage."""


class InvertedIndex:
    """Term -> {passage id: term frequency} postings with document lengths."""

    def __init__(
        self,
        postings: dict[str, dict[str, int]],
        doc_len: dict[str, int],
        k1: float = DEFAULT_K1,
        b: float = DEFAULT_B,
    ):
        self.postings = postings
        self.doc_len = doc_len
        self.k1 = k1
        self.b = b
        self.size = len(doc_len)
        self.avgdl = sum(doc_len.values()) / self.size if self.size else 0.0

    @classmethod
    def build(cls, corpus: Corpus, k1: float = DEFAULT_K1, b: float = DEFAULT_B) -> "InvertedIndex":
        if corpus.count == 0:
            raise EmptyCorpusError("cannot index an empty corpus")
        postings: dict[str, dict[str, int]] = {}
        doc_len: dict[str, int] = {}
        for passage in corpus:
            terms = analyze(passage.text)
            doc_len[passage.id] = len(terms)
            for term, tf in Counter(terms).items():
                postings.setdefault(term, {})[passage.id] = tf
        return cls(postings, doc_len, k1=k1, b=b)

    def __len__(self) -> int:
        return self.size

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        if df == 0:
            return 0.0
        return math.log(1.0 + (self.size - df + 0.5) / (df + 0.5))

    def scores(self, query: str) -> dict[str, float]:
        """BM25 score per passage, restricted to passages matching >=1 term."""
        out: dict[str, float] = {}
        for term in set(analyze(query)):
            posting = self.postings.get(term)
            if not posting:
                continue
            idf = self.idf(term)
            for pid, tf in posting.items():
                dl = self.doc_len[pid]
                denom = tf + self.k1 * (1.0 - self.b + self.b * dl / self.avgdl)
                out[pid] = out.get(pid, 0.0) + idf * (tf * (self.k1 + 1.0)) / denom
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "k1": self.k1,
            "b": self.b,
            "doc_len": self.doc_len,
            "postings": self.postings,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "InvertedIndex":
        postings = {
            term: {pid: int(tf) for pid, tf in posting.items()}
            for term, posting in data["postings"].items()
        }
        doc_len = {pid: int(n) for pid, n in data["doc_len"].items()}
        return cls(postings, doc_len, k1=float(data["k1"]), b=float(data["b"]))


def keyword_search(query: str, n: int, index: InvertedIndex) -> list[ScoredPassage]:
    """Top-n passages by BM25, descending score, ties by ascending id."""
    if n < 1:
        raise ValueError("n must be positive")
    scored = [
        ScoredPassage(pid, CHANNEL_KEYWORD, score)
        for pid, score in index.scores(query).items()
    ]
    return sort_scored(scored)[:n]
