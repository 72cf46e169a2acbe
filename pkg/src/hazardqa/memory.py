"""Per-session fixed-window memory with two-stage retrieval.

Each turn stores (user query, answer, entity tags, timestamp) in a sliding
window. Retrieval first looks for entries whose stored tags partially match
the current query context (bidirectional case-insensitive substring, so
"harvey" matches "hurricane harvey"); when nothing matches it falls back to
the most recent turns. Results are returned oldest-first as Q-A pairs.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

from .understanding import EntityTags

DEFAULT_WINDOW = 10
REWRITE_TURNS = 3


class MemoryError_(Exception):
    """Base class for memory-bank failures."""


class NonMonotonicTimestampError(MemoryError_):
    """A stored entry's timestamp is not later than all existing entries."""


@dataclass(frozen=True)
class MemoryEntry:
    user_query: str
    answer: str
    entity_tags: EntityTags
    timestamp: float


def _tags_match(stored: EntityTags, current: EntityTags) -> bool:
    for s in stored.all_tags():
        for c in current.all_tags():
            if s in c or c in s:
                return True
    return False


def query_context_tags(text: str) -> EntityTags:
    """Pseudo-tags for tag matching before entity extraction has run.

    The raw query text stands in as a single tag, so a stored tag such as
    "harvey" matches any query mentioning it, while pronoun-only follow-ups
    match nothing and fall back to recency.
    """
    return EntityTags(disaster_types=(text.strip().lower(),)) if text.strip() else EntityTags()


class SessionMemory:
    """Ordered sliding window of turns for one session; oldest first."""

    def __init__(self, capacity: int = DEFAULT_WINDOW):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.window: list[MemoryEntry] = []

    def __len__(self) -> int:
        return len(self.window)

    def next_timestamp(self) -> float:
        """A timestamp strictly later than every stored entry."""
        now = time.time()
        if self.window and now <= self.window[-1].timestamp:
            return math.nextafter(self.window[-1].timestamp, math.inf)
        return now

    def store(self, entry: MemoryEntry) -> None:
        """Append an entry, evicting the oldest when the window is full.

        Raises:
            NonMonotonicTimestampError: entry is not newer than all stored.
        """
        if self.window and entry.timestamp <= self.window[-1].timestamp:
            raise NonMonotonicTimestampError(
                f"timestamp {entry.timestamp} not after {self.window[-1].timestamp}"
            )
        self.window.append(entry)
        if len(self.window) > self.capacity:
            del self.window[0]

    def retrieve(self, tags: EntityTags, m: int) -> list[tuple[str, str]]:
        """Two-stage lookup: tag-matching entries first, recency fallback.

        Returns at most ``m`` (question, answer) pairs oldest-first. If any
        entry tag-matches, only matching entries are returned.
        """
        if m < 1:
            raise ValueError("m must be positive")
        matching = [e for e in self.window if _tags_match(e.entity_tags, tags)]
        selected = matching[-m:] if matching else self.window[-m:]
        return [(e.user_query, e.answer) for e in selected]

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for e in self.window:
                fh.write(
                    json.dumps(
                        {
                            "user_query": e.user_query,
                            "answer": e.answer,
                            "disaster_types": list(e.entity_tags.disaster_types),
                            "locations": list(e.entity_tags.locations),
                            "timestamp": e.timestamp,
                        },
                        ensure_ascii=False,
                    )
                    + "\n"
                )

    @classmethod
    def load(cls, path: str | Path, capacity: int = DEFAULT_WINDOW) -> "SessionMemory":
        memory = cls(capacity=capacity)
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                data = json.loads(line)
                memory.store(
                    MemoryEntry(
                        user_query=data["user_query"],
                        answer=data["answer"],
                        entity_tags=EntityTags(
                            disaster_types=tuple(data.get("disaster_types", ())),
                            locations=tuple(data.get("locations", ())),
                        ),
                        timestamp=float(data["timestamp"]),
                    )
                )
        return memory
