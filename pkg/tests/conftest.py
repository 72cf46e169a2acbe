"""Shared end-to-end scenario fixtures and the acceptance reporting hook."""

from __future__ import annotations

import pytest

from hazardqa.clients import FixtureReplayClient, HashEmbedder, TokenOverlapScorer
from hazardqa.stubs import EvidenceEchoClient
from hazardqa.corpus import ingest_passages
from hazardqa.engine import QueryEngine
from hazardqa.retrieval import DocumentRetriever, RetrievalConfig, RetrievalStrategy, build_indices
from hazardqa.store import load_structured_store
from hazardqa.understanding import classify_prompt, tag_prompt
from hazardqa.webfallback import FixtureSearchClient, Gazetteer, WebSnippet

EVACUATION_QUERY = (
    "Which area has the largest evacuation rate during Hurricane Harvey? "
    "I want to know it in zip code level"
)
FLOOD_PREDICTION_QUERY = (
    "I want to predict the flood inundation depth of the road network in Houston "
    "assuming there will be a hurricane similar to Harvey"
)
RANKING_QUERY = (
    "SELECT zip_code, MAX(evacuation_rate) FROM harvey_evacuation_data "
    "GROUP BY zip_code ORDER BY MAX(evacuation_rate) DESC"
)

HAZARD_PASSAGES = [
    {
        "id": "p-surge",
        "source_id": "noaa-surge-guide",
        "text": "Storm surge is an abnormal rise of water generated by a storm, "
        "over and above the predicted astronomical tide.",
    },
    {
        "id": "p-watch",
        "source_id": "nws-watch-defs",
        "text": "A hurricane watch means hurricane conditions are possible within "
        "the watch area within 48 hours.",
    },
    {
        "id": "p-evac",
        "source_id": "fema-evac-plan",
        "text": "Evacuation planning assigns zones and routes so coastal residents "
        "can leave ahead of landfall.",
    },
    {
        "id": "p-shelter",
        "source_id": "fema-shelters",
        "text": "Shelter capacity is tracked per county and published during events.",
    },
]

HOUSTON_SNIPPETS = [
    WebSnippet(
        title="Flood Depth Estimation during Hurricane Harvey Using Sentinel-1",
        url="https://example.org/harvey-sentinel",
        snippet_text="Remote sensing imagery estimated flood depth across Houston.",
    ),
    WebSnippet(
        title="Florida storm surge outlook",
        url="https://example.org/florida-surge",
        snippet_text="Storm surge projections for the Florida coast next season.",
    ),
    WebSnippet(
        title="Retrospective Dynamic Inundation Mapping of Hurricane Harvey",
        url="https://example.org/harvey-mapping",
        snippet_text="Flood inundation mapping reconstructed the Harvey event in Houston.",
    ),
    WebSnippet(
        title="Hydrological simulation of road network flooding",
        url="https://example.org/road-simulation",
        snippet_text="Simulation methods estimate inundation depth on road networks in Houston.",
    ),
]

GAZETTEER = Gazetteer.of(locations=["houston", "florida", "texas", "gulf coast"])


def harvey_store():
    return load_structured_store(
        {
            "tables": {
                "harvey_evacuation_data": [
                    {"name": "zip_code", "type": "integer"},
                    {"name": "evacuation_rate", "type": "real"},
                ]
            },
            "join_keys": ["zip_code"],
        },
        {"harvey_evacuation_data": [(77061, 57.14), (77025, 55.56), (77005, 55.56)]},
    )


def record_understanding(
    replay: FixtureReplayClient,
    query: str,
    qtype: str,
    domain: int = 1,
    disasters: str = "",
    locations: str = "",
    ambiguous: int = 0,
) -> None:
    replay.record(
        classify_prompt(query), f"TYPE={qtype};AMBIGUOUS={ambiguous};DOMAIN={domain}"
    )
    replay.record(tag_prompt(query), f"DISASTERS={disasters};LOCATIONS={locations}")


def make_case_engine() -> QueryEngine:
    """Engine seeded for the evacuation-ranking and flood-prediction cases."""
    from hazardqa.textsql import build_sql_prompt
    from hazardqa.understanding import EntityTags, QueryType, StructuredQueryRepresentation

    corpus = ingest_passages(HAZARD_PASSAGES)
    embedder = HashEmbedder(dim=128)
    indices = build_indices(corpus, embedder)
    retriever = DocumentRetriever(corpus, indices, embedder, TokenOverlapScorer())
    store = harvey_store()

    replay = FixtureReplayClient()
    record_understanding(
        replay, EVACUATION_QUERY, "quantitative", domain=1,
        disasters="hurricane harvey", locations="",
    )
    record_understanding(
        replay, FLOOD_PREDICTION_QUERY, "other", domain=0,
        disasters="hurricane harvey", locations="houston",
    )
    record_understanding(replay, "What is a hurricane watch?", "descriptive", domain=1)
    record_understanding(replay, "What is storm surge?", "descriptive", domain=1)
    evacuation_sqr = StructuredQueryRepresentation(
        original_query=EVACUATION_QUERY,
        rewritten_query=EVACUATION_QUERY,
        query_type=QueryType.QUANTITATIVE,
        is_ambiguous=False,
        is_domain_relevant=True,
        entity_tags=EntityTags(disaster_types=("hurricane harvey",)),
    )
    replay.record(build_sql_prompt(evacuation_sqr, store).text(), RANKING_QUERY)

    return QueryEngine(
        generative_client=EvidenceEchoClient(replay),
        retriever=retriever,
        store=store,
        search_client=FixtureSearchClient(HOUSTON_SNIPPETS),
        gazetteer=GAZETTEER,
        retrieval_config=RetrievalConfig(RetrievalStrategy.HYBRID, pool_size=4, rerank_k=3),
    )


@pytest.fixture
def case_engine():
    return make_case_engine()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    reports = [
        r
        for r in terminalreporter.stats.get("passed", [])
        + terminalreporter.stats.get("failed", [])
        if "test_acceptance.py" in str(getattr(r, "nodeid", ""))
    ]
    if not reports:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for report in sorted(reports, key=lambda r: r.nodeid):
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
