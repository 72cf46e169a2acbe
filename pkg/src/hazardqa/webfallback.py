"""External web fallback: search formulation, snippet filtering, assembly.

Out-of-corpus requests are served from a web search client. Returned
snippets are filtered for consistency with the request's disaster and
location tags: a snippet survives when it mentions one of the query's tags,
or at least names no conflicting entry from a configurable gazetteer. A
small year-overlap check stands in for temporal consistency. Search
failures degrade to an empty, uncertainty-flagged context rather than
failing the turn.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

from .grounding import OE_UNIT_TOKENS, GroundingContext, context_from_units
from .routing import Pathway
from .tokens import truncate_to_tokens
from .understanding import StructuredQueryRepresentation

DEFAULT_SNIPPET_LIMIT = 10

_YEAR_RE = re.compile(r"\b(19\d{2}|20\d{2})\b")


class SearchError(Exception):
    """The search backend failed."""


@dataclass(frozen=True)
class WebSnippet:
    title: str
    url: str
    snippet_text: str

    def __post_init__(self) -> None:
        if not self.url:
            raise ValueError("snippet url must be non-empty")
        if not self.snippet_text:
            raise ValueError("snippet text must be non-empty")


@runtime_checkable
class SearchClient(Protocol):
    def search(self, query: str, limit: int) -> list[WebSnippet]: ...


class FixtureSearchClient:
    """Replays a fixed snippet list regardless of query."""

    def __init__(self, snippets: Sequence[WebSnippet]):
        self.snippets = list(snippets)

    def search(self, query: str, limit: int) -> list[WebSnippet]:
        return self.snippets[:limit]


class FailingSearchClient:
    def search(self, query: str, limit: int) -> list[WebSnippet]:
        raise SearchError("search backend unavailable")


class HttpSearchClient:
    """Search client for an endpoint speaking {query, limit} -> snippet list."""

    def __init__(self, endpoint: str, api_key: str | None = None, timeout: float = 30.0):
        self.endpoint = endpoint
        self.api_key = api_key
        self.timeout = timeout

    def search(self, query: str, limit: int) -> list[WebSnippet]:
        import httpx

        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = httpx.post(
                self.endpoint,
                json={"query": query, "limit": limit},
                headers=headers,
                timeout=self.timeout,
            )
            response.raise_for_status()
            payload = response.json()
        except Exception as exc:  # noqa: BLE001
            raise SearchError(f"search endpoint failed: {exc}") from exc
        return [
            WebSnippet(
                title=str(item.get("title", "")),
                url=str(item["url"]),
                snippet_text=str(item["snippet"]),
            )
            for item in payload
        ][:limit]


@dataclass(frozen=True)
class Gazetteer:
    """Known names used for conflict detection during snippet filtering."""

    locations: tuple[str, ...] = ()
    disasters: tuple[str, ...] = ()

    @classmethod
    def of(
        cls, locations: Sequence[str] = (), disasters: Sequence[str] = ()
    ) -> "Gazetteer":
        return cls(
            locations=tuple(x.strip().lower() for x in locations if x.strip()),
            disasters=tuple(x.strip().lower() for x in disasters if x.strip()),
        )


def formulate_search_query(sqr: StructuredQueryRepresentation) -> str:
    """Deterministic search string: rewritten query plus every entity tag."""
    tags = list(sqr.entity_tags.disaster_types) + list(sqr.entity_tags.locations)
    if not tags:
        return sqr.rewritten_query
    return sqr.rewritten_query + " " + " ".join(tags)


def fetch_snippets(
    query: str, client: SearchClient, limit: int = DEFAULT_SNIPPET_LIMIT
) -> tuple[list[WebSnippet], bool]:
    """At most ``limit`` snippets in provider order; failures degrade to []."""
    if limit < 1:
        raise ValueError("limit must be positive")
    try:
        return list(client.search(query, limit))[:limit], False
    except Exception:  # noqa: BLE001 - degradation never throws
        return [], True


def _mention(text: str, name: str) -> bool:
    return name in text


def _tag_consistent(
    text: str, tags: Sequence[str], known_names: Sequence[str]
) -> bool:
    if not tags:
        return True
    if any(_mention(text, tag) for tag in tags):
        return True
    # unknown territory is kept; only an explicit conflicting name excludes
    conflicts = [name for name in known_names if name not in tags]
    return not any(_mention(text, name) for name in conflicts)


def _years_consistent(query_text: str, snippet_text: str) -> bool:
    query_years = set(_YEAR_RE.findall(query_text))
    if not query_years:
        return True
    snippet_years = set(_YEAR_RE.findall(snippet_text))
    if not snippet_years:
        return True
    return bool(query_years & snippet_years)


def filter_snippets(
    snippets: Sequence[WebSnippet],
    sqr: StructuredQueryRepresentation,
    gazetteer: Gazetteer | None = None,
) -> list[WebSnippet]:
    """Order-preserving subsequence of snippets consistent with the request.

    A snippet is retained iff it passes the location rule, the disaster rule
    and the year-overlap heuristic. Each tag rule passes vacuously when the
    query carries no tags of that kind.
    """
    gazetteer = gazetteer or Gazetteer()
    retained = []
    for snippet in snippets:
        text = f"{snippet.title} {snippet.snippet_text}".lower()
        if not _tag_consistent(text, sqr.entity_tags.locations, gazetteer.locations):
            continue
        if not _tag_consistent(text, sqr.entity_tags.disaster_types, gazetteer.disasters):
            continue
        if not _years_consistent(sqr.rewritten_query, text):
            continue
        retained.append(snippet)
    return retained


def fallback_flow(
    sqr: StructuredQueryRepresentation,
    client: SearchClient | None,
    gazetteer: Gazetteer | None = None,
    limit: int = DEFAULT_SNIPPET_LIMIT,
) -> GroundingContext:
    """Search, filter and assemble web evidence into a grounding context.

    Units are (url, snippet text) pairs with each snippet truncated to the
    open-ended unit budget; source URLs survive into provenance. Zero
    retained snippets produce an empty context flagged degraded.
    """
    if client is None:
        return GroundingContext(branch=Pathway.WEB_FALLBACK, degraded=True)
    query = formulate_search_query(sqr)
    snippets, degraded = fetch_snippets(query, client, limit)
    retained = filter_snippets(snippets, sqr, gazetteer)
    units = [
        (snippet.url, truncate_to_tokens(snippet.snippet_text, OE_UNIT_TOKENS))
        for snippet in retained
    ]
    return context_from_units(
        units, branch=Pathway.WEB_FALLBACK, degraded=degraded or not units
    )
