"""End-to-end turn orchestration shared by the HTTP service and the CLI.

A turn runs understand -> route -> branch flow -> respond -> memory store.
Structured-branch requests that cannot produce valid executable SQL are
redirected to the web fallback, and the turn's final pathway reflects that
redirect. Any component failure surfaces as a :class:`TurnError` carrying a
trace id; memory is only written after a fully successful turn.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from .clients import GenerativeModelClient
from .generation import AnswerEnvelope, respond
from .grounding import GroundingContext, TaskKind
from .memory import REWRITE_TURNS, MemoryEntry, SessionMemory, query_context_tags
from .retrieval import DocumentRetriever, RetrievalConfig, RetrievalStrategy
from .routing import Pathway, RouteDecision, route
from .store import StructuredStore
from .textsql import FallbackRedirect, structured_answer_flow
from .understanding import StructuredQueryRepresentation, understand
from .webfallback import Gazetteer, SearchClient, fallback_flow


class TurnError(Exception):
    """A turn failed; memory was left unchanged."""

    def __init__(self, message: str, trace_id: str):
        super().__init__(message)
        self.trace_id = trace_id


@dataclass
class Session:
    session_id: str
    memory: SessionMemory
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass(frozen=True)
class TurnResult:
    """Full provenance of one completed turn."""

    answer_text: str
    pathway: Pathway
    route_reason: str
    sources: tuple[str, ...]
    degraded: bool
    rewritten_query: str
    query_type: str
    sql: str | None
    trace_id: str


class QueryEngine:
    """Holds the loaded knowledge foundation, clients and session registry."""

    def __init__(
        self,
        generative_client: GenerativeModelClient,
        retriever: DocumentRetriever | None = None,
        store: StructuredStore | None = None,
        search_client: SearchClient | None = None,
        gazetteer: Gazetteer | None = None,
        retrieval_config: RetrievalConfig | None = None,
        memory_window: int = 10,
        templates=None,
    ):
        self.generative_client = generative_client
        self.retriever = retriever
        self.store = store
        self.search_client = search_client
        self.gazetteer = gazetteer
        self.retrieval_config = retrieval_config or RetrievalConfig(
            RetrievalStrategy.HYBRID, pool_size=100, rerank_k=5
        )
        self.memory_window = memory_window
        self.templates = templates
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()

    # -- sessions -----------------------------------------------------------

    def create_session(self) -> str:
        session_id = uuid.uuid4().hex
        with self._registry_lock:
            self._sessions[session_id] = Session(
                session_id=session_id, memory=SessionMemory(self.memory_window)
            )
        return session_id

    def has_session(self, session_id: str) -> bool:
        with self._registry_lock:
            return session_id in self._sessions

    def get_history(self, session_id: str) -> list[MemoryEntry]:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return list(session.memory.window)

    def _session(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                session = Session(session_id=session_id, memory=SessionMemory(self.memory_window))
                self._sessions[session_id] = session
            return session

    # -- turns ---------------------------------------------------------------

    def _branch_context(
        self, sqr: StructuredQueryRepresentation, decision: RouteDecision
    ) -> tuple[GroundingContext, Pathway, str]:
        """Run the routed branch; a structured redirect lands on web fallback."""
        if decision.pathway is Pathway.STRUCTURED_ACCESS:
            outcome = structured_answer_flow(sqr, self.store, self.generative_client)
            if isinstance(outcome, FallbackRedirect):
                ctx = fallback_flow(outcome.sqr, self.search_client, self.gazetteer)
                return ctx, Pathway.WEB_FALLBACK, f"structured-redirect: {outcome.reason}"
            return outcome, decision.pathway, decision.reason
        if decision.pathway is Pathway.WEB_FALLBACK:
            ctx = fallback_flow(sqr, self.search_client, self.gazetteer)
            return ctx, decision.pathway, decision.reason
        if self.retriever is None:
            raise RuntimeError("document indices are not loaded")
        ctx = self.retriever.retrieve(
            sqr.rewritten_query, self.retrieval_config, TaskKind.INTERACTIVE
        )
        return ctx, decision.pathway, decision.reason

    def handle_query(self, session_id: str, text: str) -> TurnResult:
        """Run one full turn for a session (auto-created when unknown).

        Turns within a session are serialized; memory is written only after
        the answer is produced, so failed turns leave it unchanged.
        """
        trace_id = uuid.uuid4().hex[:12]
        if not text.strip():
            raise TurnError("query text is empty", trace_id)
        session = self._session(session_id)
        with session.lock:
            try:
                memory_pairs = session.memory.retrieve(
                    query_context_tags(text), m=REWRITE_TURNS
                )
                sqr = understand(text, memory_pairs, self.generative_client)
                decision = route(sqr)
                ctx, final_pathway, reason = self._branch_context(sqr, decision)
                envelope: AnswerEnvelope = respond(
                    ctx,
                    memory_pairs,
                    sqr.rewritten_query,
                    self.generative_client,
                    TaskKind.INTERACTIVE,
                    templates=self.templates,
                )
            except TurnError:
                raise
            except Exception as exc:  # noqa: BLE001 - turn failures carry a trace id
                raise TurnError(f"turn failed: {exc}", trace_id) from exc
            session.memory.store(
                MemoryEntry(
                    user_query=text,
                    answer=envelope.answer_text,
                    entity_tags=sqr.entity_tags,
                    timestamp=session.memory.next_timestamp(),
                )
            )
        return TurnResult(
            answer_text=envelope.answer_text,
            pathway=final_pathway,
            route_reason=reason,
            sources=envelope.sources,
            degraded=envelope.degraded or sqr.rewrite_degraded,
            rewritten_query=sqr.rewritten_query,
            query_type=sqr.query_type.value,
            sql=ctx.sql if final_pathway is Pathway.STRUCTURED_ACCESS else None,
            trace_id=trace_id,
        )
