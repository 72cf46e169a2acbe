"""Routing totality, precedence and purity."""

import pytest

from hazardqa.routing import Pathway, RouteDecision, route
from hazardqa.understanding import EntityTags, QueryType, StructuredQueryRepresentation


def sqr(query_type, domain_relevant=True, ambiguous=False):
    return StructuredQueryRepresentation(
        original_query="q",
        rewritten_query="q",
        query_type=query_type,
        is_ambiguous=ambiguous,
        is_domain_relevant=domain_relevant,
        entity_tags=EntityTags(),
    )


def test_quantitative_in_domain_goes_structured():
    assert route(sqr(QueryType.QUANTITATIVE)).pathway is Pathway.STRUCTURED_ACCESS


@pytest.mark.parametrize("qtype", [QueryType.DESCRIPTIVE, QueryType.EXPLANATORY])
def test_descriptive_explanatory_go_document(qtype):
    assert route(sqr(qtype)).pathway is Pathway.DOCUMENT_RETRIEVAL


@pytest.mark.parametrize("qtype", list(QueryType))
def test_out_of_domain_always_goes_web(qtype):
    assert route(sqr(qtype, domain_relevant=False)).pathway is Pathway.WEB_FALLBACK


@pytest.mark.parametrize(
    "qtype", [QueryType.LOCATIONAL, QueryType.CONTEXTUAL, QueryType.OTHER]
)
def test_residual_types_go_document(qtype):
    assert route(sqr(qtype)).pathway is Pathway.DOCUMENT_RETRIEVAL


def test_totality_over_all_combinations():
    for qtype in QueryType:
        for domain in (True, False):
            decision = route(sqr(qtype, domain_relevant=domain))
            assert isinstance(decision, RouteDecision)
            assert decision.pathway in Pathway
            assert decision.reason


def test_ambiguity_does_not_change_routing():
    for qtype in QueryType:
        for domain in (True, False):
            plain = route(sqr(qtype, domain_relevant=domain, ambiguous=False))
            flagged = route(sqr(qtype, domain_relevant=domain, ambiguous=True))
            assert plain == flagged


def test_purity():
    representation = sqr(QueryType.QUANTITATIVE)
    assert route(representation) == route(representation)
