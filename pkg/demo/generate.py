"""Regenerate the demo workspace (corpus, store, fixtures, config).

The generative fixture file is keyed by prompt hash, so it has to be built
programmatically against the exact prompts the engine produces. Run from
the repository root:

    python3 demo/generate.py
"""

from __future__ import annotations

import json
from pathlib import Path

from hazardqa.clients import FixtureReplayClient
from hazardqa.store import load_store_from_files
from hazardqa.textsql import build_sql_prompt
from hazardqa.understanding import (
    EntityTags,
    QueryType,
    StructuredQueryRepresentation,
    classify_prompt,
    tag_prompt,
)

DEMO_DIR = Path(__file__).parent

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

PASSAGES = [
    {
        "id": "p-surge",
        "source_id": "noaa-surge-guide",
        "text": "Storm surge is an abnormal rise of water generated by a storm, over "
        "and above the predicted astronomical tide, and is often the greatest "
        "threat to life during a hurricane.",
        "hazard_tags": ["storm surge", "hurricane"],
        "location_tags": [],
    },
    {
        "id": "p-watch",
        "source_id": "nws-watch-defs",
        "text": "A hurricane watch means hurricane conditions are possible within the "
        "watch area; watches are issued 48 hours before tropical-storm-force "
        "winds are expected.",
        "hazard_tags": ["hurricane"],
        "location_tags": [],
    },
    {
        "id": "p-evac",
        "source_id": "fema-evac-plan",
        "text": "Evacuation planning assigns zip-code zones and routes so coastal "
        "residents can leave ahead of landfall; local officials announce which "
        "zones must evacuate.",
        "hazard_tags": ["hurricane", "evacuation"],
        "location_tags": ["houston"],
    },
    {
        "id": "p-shelter",
        "source_id": "fema-shelters",
        "text": "Shelter capacity is tracked per county during events and published "
        "through emergency management dashboards.",
        "hazard_tags": ["hurricane"],
        "location_tags": [],
    },
    {
        "id": "p-heat",
        "source_id": "cdc-heat-guide",
        "text": "During extreme heat, cooling centers open in public buildings and "
        "residents are advised to limit outdoor activity.",
        "hazard_tags": ["extreme heat"],
        "location_tags": [],
    },
]

SNIPPETS = [
    {
        "title": "Flood Depth Estimation during Hurricane Harvey Using Sentinel-1",
        "url": "https://example.org/harvey-sentinel",
        "snippet": "Remote sensing imagery estimated flood depth across Houston "
        "during Hurricane Harvey.",
    },
    {
        "title": "Florida storm surge outlook",
        "url": "https://example.org/florida-surge",
        "snippet": "Storm surge projections for the Florida coast next season.",
    },
    {
        "title": "Retrospective Dynamic Inundation Mapping of Hurricane Harvey",
        "url": "https://example.org/harvey-mapping",
        "snippet": "Flood inundation mapping reconstructed the Harvey event in Houston.",
    },
    {
        "title": "Hydrological simulation of road network flooding",
        "url": "https://example.org/road-simulation",
        "snippet": "Simulation methods estimate inundation depth on road networks "
        "in Houston, Texas.",
    },
]

CONFIG = """\
corpus: corpus.jsonl
store:
  schema: schema.json
index_snapshot: indices.json
clients:
  generative: {kind: echo, fixtures: generative_fixtures.json}
  search: {kind: fixture, fixtures: search_fixtures.json}
embedding_dim: 128
memory_window: 10
retrieval: {strategy: hybrid, pool_size: 5, rerank_k: 3}
gazetteer:
  locations: [houston, florida, texas, gulf coast]
  disasters: [hurricane harvey, hurricane beryl]
"""

MCQ_TASKS = [
    {
        "id": "demo-m1",
        "question": "What does a hurricane watch mean?",
        "options": {
            "A": "hurricane conditions are possible within the watch area",
            "B": "hurricane conditions are certain",
            "C": "the event has ended",
            "D": "an evacuation order is active",
        },
        "gold": "A",
    },
    {
        "id": "demo-m2",
        "question": "What is often the greatest threat to life during a hurricane?",
        "options": {
            "A": "hail",
            "B": "storm surge",
            "C": "lightning",
            "D": "fog",
        },
        "gold": "B",
    },
]


def record_understanding(client, query, qtype, domain=1, disasters="", locations=""):
    client.record(classify_prompt(query), f"TYPE={qtype};AMBIGUOUS=0;DOMAIN={domain}")
    client.record(tag_prompt(query), f"DISASTERS={disasters};LOCATIONS={locations}")


def main() -> None:
    (DEMO_DIR / "corpus.jsonl").write_text(
        "\n".join(json.dumps(p, ensure_ascii=False) for p in PASSAGES) + "\n"
    )
    (DEMO_DIR / "schema.json").write_text(
        json.dumps(
            {
                "tables": {
                    "harvey_evacuation_data": [
                        {"name": "zip_code", "type": "integer"},
                        {"name": "evacuation_rate", "type": "real"},
                    ]
                },
                "join_keys": ["zip_code"],
            },
            indent=2,
        )
    )
    (DEMO_DIR / "harvey_evacuation_data.csv").write_text(
        "zip_code,evacuation_rate\n77061,57.14\n77025,55.56\n77005,55.56\n"
    )
    (DEMO_DIR / "search_fixtures.json").write_text(json.dumps(SNIPPETS, indent=2))
    (DEMO_DIR / "config.yaml").write_text(CONFIG)
    (DEMO_DIR / "mcq_tasks.json").write_text(json.dumps(MCQ_TASKS, indent=2))

    # no default: unrecorded prompts fall through to the echo client's
    # identity-rewrite / evidence-echo behavior
    client = FixtureReplayClient()
    record_understanding(
        client, EVACUATION_QUERY, "quantitative", disasters="hurricane harvey"
    )
    record_understanding(
        client,
        FLOOD_PREDICTION_QUERY,
        "other",
        domain=0,
        disasters="hurricane harvey",
        locations="houston",
    )
    record_understanding(client, "What is storm surge?", "descriptive")
    record_understanding(client, "What is a hurricane watch?", "descriptive")
    record_understanding(
        client, MCQ_TASKS[0]["question"], "descriptive"
    )
    store = load_store_from_files(DEMO_DIR / "schema.json")
    sqr = StructuredQueryRepresentation(
        original_query=EVACUATION_QUERY,
        rewritten_query=EVACUATION_QUERY,
        query_type=QueryType.QUANTITATIVE,
        is_ambiguous=False,
        is_domain_relevant=True,
        entity_tags=EntityTags(disaster_types=("hurricane harvey",)),
    )
    replayed_prompt = build_sql_prompt(sqr, store).text()
    client.record(replayed_prompt, RANKING_QUERY)
    client.save(DEMO_DIR / "generative_fixtures.json")
    print(f"demo workspace written to {DEMO_DIR}")


if __name__ == "__main__":
    main()
