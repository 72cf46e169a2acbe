"""Application configuration and engine assembly.

Configuration is a YAML (or JSON) file naming the corpus, structured store,
index snapshot, client backends, retrieval defaults, memory window,
template directory and gazetteer. Secrets are never stored in the file:
client entries reference environment variable names.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from .clients import (
    FixtureReplayClient,
    HashEmbedder,
    HttpChatClient,
    HttpRerankScorer,
    TokenOverlapScorer,
)
from .corpus import Corpus, load_corpus
from .engine import QueryEngine
from .generation import load_templates
from .retrieval import (
    DocumentRetriever,
    IndexBundle,
    RetrievalConfig,
    RetrievalStrategy,
    build_indices,
    load_indices,
)
from .store import StructuredStore, load_store_from_files, load_store_from_sqlite
from .stubs import EvidenceEchoClient
from .webfallback import FixtureSearchClient, Gazetteer, HttpSearchClient, WebSnippet


class ConfigError(Exception):
    pass


@dataclass
class ClientSpec:
    kind: str = "fixture"  # http | fixture
    endpoint: str | None = None
    api_key_env: str | None = None
    fixtures: str | None = None

    @classmethod
    def from_dict(cls, data: Mapping[str, Any] | None) -> "ClientSpec":
        data = data or {}
        return cls(
            kind=str(data.get("kind", "fixture")),
            endpoint=data.get("endpoint"),
            api_key_env=data.get("api_key_env"),
            fixtures=data.get("fixtures"),
        )

    def api_key(self) -> str | None:
        return os.environ.get(self.api_key_env) if self.api_key_env else None


@dataclass
class AppConfig:
    corpus_path: str | None = None
    store_schema: str | None = None
    store_data_dir: str | None = None
    store_sqlite: str | None = None
    index_snapshot: str | None = None
    generative: ClientSpec = field(default_factory=ClientSpec)
    search: ClientSpec = field(default_factory=ClientSpec)
    rerank: ClientSpec = field(default_factory=ClientSpec)
    embedding_dim: int = 256
    memory_window: int = 10
    retrieval_strategy: str = "hybrid"
    retrieval_pool_size: int = 100
    retrieval_rerank_k: int = 5
    retrieval_rerank_batch: int = 128
    templates_dir: str | None = None
    gazetteer_locations: tuple[str, ...] = ()
    gazetteer_disasters: tuple[str, ...] = ()

    @classmethod
    def load(cls, path: str | Path) -> "AppConfig":
        base = Path(path).parent
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}

        def resolve(value: str | None) -> str | None:
            if value is None:
                return None
            candidate = Path(value)
            return str(candidate if candidate.is_absolute() else base / candidate)

        store = data.get("store", {}) or {}
        retrieval = data.get("retrieval", {}) or {}
        clients = data.get("clients", {}) or {}
        gazetteer = data.get("gazetteer", {}) or {}
        generative = ClientSpec.from_dict(clients.get("generative"))
        search = ClientSpec.from_dict(clients.get("search"))
        rerank = ClientSpec.from_dict(clients.get("rerank"))
        for spec in (generative, search, rerank):
            spec.fixtures = resolve(spec.fixtures)
        return cls(
            corpus_path=resolve(data.get("corpus")),
            store_schema=resolve(store.get("schema")),
            store_data_dir=resolve(store.get("data_dir")),
            store_sqlite=resolve(store.get("sqlite")),
            index_snapshot=resolve(data.get("index_snapshot")),
            generative=generative,
            search=search,
            rerank=rerank,
            embedding_dim=int(data.get("embedding_dim", 256)),
            memory_window=int(data.get("memory_window", 10)),
            retrieval_strategy=str(retrieval.get("strategy", "hybrid")),
            retrieval_pool_size=int(retrieval.get("pool_size", 100)),
            retrieval_rerank_k=int(retrieval.get("rerank_k", 5)),
            retrieval_rerank_batch=int(retrieval.get("rerank_batch", 128)),
            templates_dir=resolve(data.get("templates_dir")),
            gazetteer_locations=tuple(gazetteer.get("locations", ())),
            gazetteer_disasters=tuple(gazetteer.get("disasters", ())),
        )

    def retrieval_config(self) -> RetrievalConfig:
        return RetrievalConfig(
            RetrievalStrategy(self.retrieval_strategy),
            pool_size=self.retrieval_pool_size,
            rerank_k=self.retrieval_rerank_k,
            rerank_batch=self.retrieval_rerank_batch,
        )


def build_generative_client(spec: ClientSpec):
    if spec.kind == "http":
        if not spec.endpoint:
            raise ConfigError("http generative client requires an endpoint")
        return HttpChatClient(spec.endpoint, api_key=spec.api_key())
    if spec.kind == "fixture":
        if spec.fixtures:
            return FixtureReplayClient.load(spec.fixtures)
        return FixtureReplayClient(default="No backend is configured for this deployment.")
    if spec.kind == "echo":
        replay = FixtureReplayClient.load(spec.fixtures) if spec.fixtures else None
        return EvidenceEchoClient(replay)
    raise ConfigError(f"unknown generative client kind {spec.kind!r}")


def build_search_client(spec: ClientSpec):
    if spec.kind == "http":
        if not spec.endpoint:
            raise ConfigError("http search client requires an endpoint")
        return HttpSearchClient(spec.endpoint, api_key=spec.api_key())
    if spec.kind == "fixture":
        snippets = []
        if spec.fixtures:
            import json

            with open(spec.fixtures, encoding="utf-8") as fh:
                snippets = [
                    WebSnippet(
                        title=str(s.get("title", "")),
                        url=str(s["url"]),
                        snippet_text=str(s["snippet"]),
                    )
                    for s in json.load(fh)
                ]
        return FixtureSearchClient(snippets)
    raise ConfigError(f"unknown search client kind {spec.kind!r}")


def build_rerank_scorer(spec: ClientSpec):
    if spec.kind == "http":
        if not spec.endpoint:
            raise ConfigError("http rerank scorer requires an endpoint")
        return HttpRerankScorer(spec.endpoint, api_key=spec.api_key())
    return TokenOverlapScorer()


def load_store(config: AppConfig) -> StructuredStore | None:
    if config.store_sqlite:
        return load_store_from_sqlite(config.store_sqlite)
    if config.store_schema:
        return load_store_from_files(config.store_schema, config.store_data_dir)
    return None


def build_engine(config: AppConfig, require_indices: bool = False) -> QueryEngine:
    """Assemble a :class:`QueryEngine` from configuration.

    Indices load from the configured snapshot when present, otherwise they
    are built from the corpus in process.
    """
    embedder = HashEmbedder(dim=config.embedding_dim)
    corpus: Corpus | None = load_corpus(config.corpus_path) if config.corpus_path else None
    bundle: IndexBundle | None = None
    if config.index_snapshot and Path(config.index_snapshot).exists():
        bundle = load_indices(config.index_snapshot)
    elif corpus is not None and corpus.count:
        bundle = build_indices(corpus, embedder)
    retriever = None
    if corpus is not None and bundle is not None:
        retriever = DocumentRetriever(corpus, bundle, embedder, build_rerank_scorer(config.rerank))
    if require_indices and retriever is None:
        raise ConfigError("no corpus/indices configured")
    return QueryEngine(
        generative_client=build_generative_client(config.generative),
        retriever=retriever,
        store=load_store(config),
        search_client=build_search_client(config.search),
        gazetteer=Gazetteer.of(
            locations=config.gazetteer_locations, disasters=config.gazetteer_disasters
        ),
        retrieval_config=config.retrieval_config(),
        memory_window=config.memory_window,
        templates=load_templates(config.templates_dir) if config.templates_dir else None,
    )
