"""Strategy routing: map a structured query representation to one pathway."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .understanding import QueryType, StructuredQueryRepresentation


class Pathway(Enum):
    DOCUMENT_RETRIEVAL = "document"
    STRUCTURED_ACCESS = "structured"
    WEB_FALLBACK = "web"


@dataclass(frozen=True)
class RouteDecision:
    pathway: Pathway
    reason: str


def route(sqr: StructuredQueryRepresentation) -> RouteDecision:
    """Pick exactly one evidence-access pathway.

    Out-of-domain takes precedence over query type; quantitative requests go
    to structured access; descriptive and explanatory to document retrieval;
    the remaining in-domain types (locational, contextual, other) default to
    document retrieval, the broadest in-domain pathway. The ambiguity flag
    never alters routing. Pure function.
    """
    if not sqr.is_domain_relevant:
        return RouteDecision(Pathway.WEB_FALLBACK, "out-of-domain")
    if sqr.query_type is QueryType.QUANTITATIVE:
        return RouteDecision(Pathway.STRUCTURED_ACCESS, "quantitative")
    if sqr.query_type in (QueryType.DESCRIPTIVE, QueryType.EXPLANATORY):
        return RouteDecision(Pathway.DOCUMENT_RETRIEVAL, "descriptive-explanatory")
    return RouteDecision(Pathway.DOCUMENT_RETRIEVAL, "default-document")
