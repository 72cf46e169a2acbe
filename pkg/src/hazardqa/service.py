"""HTTP surface: sessions, queries, history and health.

Endpoints:

* ``POST /sessions``                 -> ``{"session_id": ...}``
* ``POST /sessions/{id}/query``      -> full query response with provenance
* ``GET  /sessions/{id}/history``    -> ordered memory entries
* ``GET  /health``                   -> version and index status

Unknown sessions are 404, malformed bodies 422 (framework validation), and
queries against a deployment without loaded indices 503. Requests within
one session are serialized by the engine; distinct sessions run
concurrently.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import __version__
from .engine import QueryEngine, TurnError


class QueryRequest(BaseModel):
    text: str


class QueryResponse(BaseModel):
    answer_text: str
    pathway: str
    sources: list[str]
    degraded: bool
    rewritten_query: str
    query_type: str
    sql: str | None = None
    trace_id: str


class SessionCreated(BaseModel):
    session_id: str


class HistoryEntry(BaseModel):
    user_query: str
    answer: str
    disaster_tags: list[str]
    location_tags: list[str]
    timestamp: float


def create_app(engine: QueryEngine) -> FastAPI:
    app = FastAPI(title="hazardqa", version=__version__)

    @app.post("/sessions", response_model=SessionCreated)
    def create_session() -> SessionCreated:
        return SessionCreated(session_id=engine.create_session())

    @app.post("/sessions/{session_id}/query", response_model=QueryResponse)
    def query(session_id: str, request: QueryRequest) -> QueryResponse:
        if not engine.has_session(session_id):
            raise HTTPException(status_code=404, detail="unknown session")
        if engine.retriever is None:
            raise HTTPException(status_code=503, detail="indices not loaded")
        try:
            result = engine.handle_query(session_id, request.text)
        except TurnError as exc:
            raise HTTPException(
                status_code=500, detail={"error": str(exc), "trace_id": exc.trace_id}
            ) from exc
        return QueryResponse(
            answer_text=result.answer_text,
            pathway=result.pathway.value,
            sources=list(result.sources),
            degraded=result.degraded,
            rewritten_query=result.rewritten_query,
            query_type=result.query_type,
            sql=result.sql,
            trace_id=result.trace_id,
        )

    @app.get("/sessions/{session_id}/history", response_model=list[HistoryEntry])
    def history(session_id: str) -> list[HistoryEntry]:
        try:
            entries = engine.get_history(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session") from None
        return [
            HistoryEntry(
                user_query=e.user_query,
                answer=e.answer,
                disaster_tags=list(e.entity_tags.disaster_types),
                location_tags=list(e.entity_tags.locations),
                timestamp=e.timestamp,
            )
            for e in entries
        ]

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "version": __version__,
            "indexed": engine.retriever is not None,
            "passages": engine.retriever.corpus.count if engine.retriever else 0,
            "structured_tables": sorted(engine.store.tables) if engine.store else [],
        }

    return app
