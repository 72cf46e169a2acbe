"""Query understanding: rewrite, classify and entity-tag a user request.

Three sequential model-backed steps turn a raw query plus recent session
turns into a structured representation the router can act on. The rewrite
step is bypassed entirely when no prior turns exist, and degrades to the
original query on backend failure rather than failing the turn.

Label calls use a constrained single-line output format so parsing is
deterministic and testable:

* classification: ``TYPE=<label>;AMBIGUOUS=<0|1>;DOMAIN=<0|1>``
* entity tags:    ``DISASTERS=a|b;LOCATIONS=c|d`` (empty allowed)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .clients import ClientError, GenerativeModelClient

REWRITE_TEMPERATURE = 0.3
REWRITE_MAX_TOKENS = 100
LABEL_TEMPERATURE = 0.0
LABEL_MAX_TOKENS = 100


class QueryType(Enum):
    QUANTITATIVE = "quantitative"
    DESCRIPTIVE = "descriptive"
    EXPLANATORY = "explanatory"
    LOCATIONAL = "locational"
    CONTEXTUAL = "contextual"
    OTHER = "other"


@dataclass(frozen=True)
class EntityTags:
    """Lowercased, trimmed disaster-type and location references."""

    disaster_types: tuple[str, ...] = ()
    locations: tuple[str, ...] = ()

    @classmethod
    def normalized(cls, disaster_types: Sequence[str], locations: Sequence[str]) -> "EntityTags":
        def clean(values: Sequence[str]) -> tuple[str, ...]:
            out: list[str] = []
            for value in values:
                tag = value.strip().lower()
                if tag and tag not in out:
                    out.append(tag)
            return tuple(out)

        return cls(disaster_types=clean(disaster_types), locations=clean(locations))

    def all_tags(self) -> tuple[str, ...]:
        return self.disaster_types + self.locations

    def is_empty(self) -> bool:
        return not self.disaster_types and not self.locations


@dataclass(frozen=True)
class StructuredQueryRepresentation:
    """Normalized intermediate form consumed by routing and retrieval."""

    original_query: str
    rewritten_query: str
    query_type: QueryType
    is_ambiguous: bool
    is_domain_relevant: bool
    entity_tags: EntityTags
    rewrite_degraded: bool = False


def render_memory_pairs(memory_pairs: Sequence[tuple[str, str]]) -> str:
    return "\n".join(f"Q: {q}\nA: {a}" for q, a in memory_pairs)


def rewrite_prompt(query: str, memory_pairs: Sequence[tuple[str, str]]) -> str:
    return (
        "Rewrite the user's latest question so it is fully self-contained: replace "
        "pronouns and implicit references (such as \"it\", \"this event\", \"those "
        "counties\", \"there\") with the explicit entities they refer to in the "
        "recent conversation. Keep the meaning unchanged. Output only the rewritten "
        "question.\n\n"
        f"Recent conversation:\n{render_memory_pairs(memory_pairs)}\n\n"
        f"Latest question: {query}"
    )


def classify_prompt(rewritten: str) -> str:
    return (
        "Classify the question below. Query types: quantitative (field-indexed, "
        "numerical or aggregative information), descriptive (definitions, procedural "
        "guidance, factual summaries), explanatory (causal or interpretive "
        "understanding), locational (geographic scope or place-specific conditions), "
        "contextual (depends on prior conversational references), other (anything "
        "else). Also decide whether the question is ambiguous and whether it falls "
        "within disaster information access (documents, disaster records, hazards).\n"
        "Respond with exactly one line in the form "
        "TYPE=<quantitative|descriptive|explanatory|locational|contextual|other>;"
        "AMBIGUOUS=<0|1>;DOMAIN=<0|1>\n\n"
        f"Question: {rewritten}"
    )


def tag_prompt(rewritten: str) -> str:
    return (
        "Extract disaster-type references (named events or hazard types, e.g. "
        "\"hurricane harvey\", \"flood\") and location references from the question "
        "below. Respond with exactly one line in the form "
        "DISASTERS=<tag|tag|...>;LOCATIONS=<tag|tag|...> using empty lists when "
        "nothing is mentioned.\n\n"
        f"Question: {rewritten}"
    )


def rewrite_query(
    query: str,
    memory_turns: Sequence[tuple[str, str]],
    client: GenerativeModelClient,
) -> tuple[str, bool]:
    """Resolve coreferences against up to three recent turns.

    Returns ``(rewritten, degraded)``. With no memory the client is bypassed
    and the original query returned verbatim; on backend failure or blank
    output the original query is propagated with ``degraded=True``.
    """
    if len(memory_turns) > 3:
        raise ValueError("rewrite_query accepts at most 3 memory turns")
    if not memory_turns:
        return query, False
    try:
        rewritten = client.generate(
            rewrite_prompt(query, memory_turns), REWRITE_TEMPERATURE, REWRITE_MAX_TOKENS
        ).strip()
    except ClientError:
        return query, True
    if not rewritten:
        return query, True
    return rewritten, False


_CLASSIFY_RE = re.compile(
    r"TYPE\s*=\s*(quantitative|descriptive|explanatory|locational|contextual|other)\s*;"
    r"\s*AMBIGUOUS\s*=\s*([01])\s*;\s*DOMAIN\s*=\s*([01])",
    re.IGNORECASE,
)

_TAGS_RE = re.compile(r"DISASTERS\s*=\s*([^;\n]*);\s*LOCATIONS\s*=\s*([^;\n]*)", re.IGNORECASE)


def classify_query(
    rewritten: str, client: GenerativeModelClient
) -> tuple[QueryType, bool, bool]:
    """Infer (query type, is_ambiguous, is_domain_relevant).

    Unparsable client output falls back to (OTHER, ambiguous=True,
    domain_relevant=True): in-domain document retrieval is the safest
    default pathway for an unlabeled request.
    """
    if not rewritten.strip():
        raise ValueError("classify_query requires a non-empty query")
    text = client.generate(classify_prompt(rewritten), LABEL_TEMPERATURE, LABEL_MAX_TOKENS)
    match = _CLASSIFY_RE.search(text)
    if match is None:
        return QueryType.OTHER, True, True
    return (
        QueryType(match.group(1).lower()),
        match.group(2) == "1",
        match.group(3) == "1",
    )


def extract_entity_tags(rewritten: str, client: GenerativeModelClient) -> EntityTags:
    """Extract normalized disaster/location tags; empty on backend failure."""
    if not rewritten.strip():
        raise ValueError("extract_entity_tags requires a non-empty query")
    try:
        text = client.generate(tag_prompt(rewritten), LABEL_TEMPERATURE, LABEL_MAX_TOKENS)
    except ClientError:
        return EntityTags()
    match = _TAGS_RE.search(text)
    if match is None:
        return EntityTags()
    def split(raw: str) -> list[str]:
        return [part for part in raw.split("|") if part.strip()]

    return EntityTags.normalized(split(match.group(1)), split(match.group(2)))


def understand(
    query: str,
    memory_pairs: Sequence[tuple[str, str]],
    client: GenerativeModelClient,
) -> StructuredQueryRepresentation:
    """Compose rewrite -> classify -> tag into the full representation."""
    rewritten, degraded = rewrite_query(query, memory_pairs, client)
    query_type, is_ambiguous, is_domain_relevant = classify_query(rewritten, client)
    tags = extract_entity_tags(rewritten, client)
    return StructuredQueryRepresentation(
        original_query=query,
        rewritten_query=rewritten,
        query_type=query_type,
        is_ambiguous=is_ambiguous,
        is_domain_relevant=is_domain_relevant,
        entity_tags=tags,
        rewrite_degraded=degraded,
    )
