"""Passage-level corpus: ingestion, validation and JSONL persistence.

Passages arrive pre-chunked; chunking policy is external. A ``Corpus`` is
immutable after ingestion and safe for shared concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping

from .tokens import count_tokens


class CorpusError(Exception):
    """Base class for corpus ingestion failures."""


class DuplicateIdError(CorpusError):
    def __init__(self, passage_id: str):
        super().__init__(f"duplicate passage id: {passage_id!r}")
        self.passage_id = passage_id


class EmptyTextError(CorpusError):
    def __init__(self, passage_id: str):
        super().__init__(f"passage {passage_id!r} has empty text")
        self.passage_id = passage_id


@dataclass(frozen=True)
class Passage:
    """One retrievable unit of the unstructured corpus."""

    id: str
    text: str
    source_id: str = ""
    hazard_tags: tuple[str, ...] = ()
    location_tags: tuple[str, ...] = ()
    token_count: int = 0


@dataclass(frozen=True)
class Corpus:
    """Validated collection of passages with unique ids."""

    passages: tuple[Passage, ...] = ()

    @property
    def count(self) -> int:
        return len(self.passages)

    @cached_property
    def by_id(self) -> dict[str, Passage]:
        return {p.id: p for p in self.passages}

    def __iter__(self) -> Iterator[Passage]:
        return iter(self.passages)

    def __len__(self) -> int:
        return len(self.passages)


def ingest_passages(records: Iterable[Mapping[str, Any]]) -> Corpus:
    """Validate raw passage records into a :class:`Corpus`.

    Each record must carry ``id`` and ``text``; ``source_id``,
    ``hazard_tags`` and ``location_tags`` are optional and unknown fields
    are ignored. ``token_count`` is always recomputed here.

    Raises:
        DuplicateIdError: two records share an id.
        EmptyTextError: a record's text is blank after trimming.
        CorpusError: a record is missing ``id`` or ``text``.
    """
    passages: list[Passage] = []
    seen: set[str] = set()
    for record in records:
        if "id" not in record or "text" not in record:
            raise CorpusError(f"record missing id or text field: {dict(record)!r}")
        pid = str(record["id"])
        text = str(record["text"])
        if pid in seen:
            raise DuplicateIdError(pid)
        if not text.strip():
            raise EmptyTextError(pid)
        seen.add(pid)
        passages.append(
            Passage(
                id=pid,
                text=text,
                source_id=str(record.get("source_id", "")),
                hazard_tags=tuple(str(t) for t in record.get("hazard_tags", ())),
                location_tags=tuple(str(t) for t in record.get("location_tags", ())),
                token_count=count_tokens(text),
            )
        )
    return Corpus(passages=tuple(passages))


def load_corpus(path: str | Path) -> Corpus:
    """Load a corpus from a JSONL file, one passage object per line."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return ingest_passages(records)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus as JSONL, one passage object per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for p in corpus:
            fh.write(
                json.dumps(
                    {
                        "id": p.id,
                        "source_id": p.source_id,
                        "text": p.text,
                        "hazard_tags": list(p.hazard_tags),
                        "location_tags": list(p.location_tags),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
