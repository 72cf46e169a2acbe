"""Client abstractions for generative, embedding and rerank backends.

Every abstraction ships with a deterministic in-process implementation so
the whole engine runs hermetically; the HTTP implementations speak the
documented wire contracts:

* chat:   POST {prompt, temperature, max_output_tokens} -> {text}
* rerank: POST {query, passages: [...]} -> {scores: [...]} (order-aligned)
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .tokens import analyze


class ClientError(Exception):
    """A backend call failed or returned unusable output."""


# ---------------------------------------------------------------------------
# Generative model clients
# ---------------------------------------------------------------------------


@runtime_checkable
class GenerativeModelClient(Protocol):
    def generate(self, prompt: str, temperature: float, max_output_tokens: int) -> str: ...


def prompt_key(prompt: str) -> str:
    """Stable fixture key for a prompt (sha256 hex)."""
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class FixtureReplayClient:
    """Replays recorded responses keyed by prompt hash.

    Missing prompts raise :class:`ClientError` unless a ``default`` response
    is configured. Fixture files are JSON: ``{"responses": {hash: text},
    "default": text | null}``.
    """

    def __init__(self, responses: dict[str, str] | None = None, default: str | None = None):
        self.responses = dict(responses or {})
        self.default = default

    def record(self, prompt: str, response: str) -> None:
        self.responses[prompt_key(prompt)] = response

    def generate(self, prompt: str, temperature: float, max_output_tokens: int) -> str:
        key = prompt_key(prompt)
        if key in self.responses:
            return self.responses[key]
        if self.default is not None:
            return self.default
        raise ClientError(f"no recorded response for prompt hash {key[:12]}")

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"responses": self.responses, "default": self.default}, fh, indent=2)

    @classmethod
    def load(cls, path: str | Path) -> "FixtureReplayClient":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(responses=data.get("responses", {}), default=data.get("default"))


class ScriptedClient:
    """Returns queued responses in order; raises once exhausted."""

    def __init__(self, responses: Sequence[str]):
        self._queue = list(responses)

    def generate(self, prompt: str, temperature: float, max_output_tokens: int) -> str:
        if not self._queue:
            raise ClientError("scripted client exhausted")
        return self._queue.pop(0)


class FailingClient:
    """Always raises; exercises degradation paths."""

    def generate(self, prompt: str, temperature: float, max_output_tokens: int) -> str:
        raise ClientError("backend unavailable")


@dataclass(frozen=True)
class GenerationCall:
    prompt: str
    temperature: float
    max_output_tokens: int


class RecordingClient:
    """Wraps another client and records every call's parameters."""

    def __init__(self, inner: GenerativeModelClient):
        self.inner = inner
        self.calls: list[GenerationCall] = []

    def generate(self, prompt: str, temperature: float, max_output_tokens: int) -> str:
        self.calls.append(GenerationCall(prompt, temperature, max_output_tokens))
        return self.inner.generate(prompt, temperature, max_output_tokens)


class HttpChatClient:
    """Chat-completions client speaking the documented JSON contract."""

    def __init__(self, endpoint: str, api_key: str | None = None, timeout: float = 30.0):
        self.endpoint = endpoint
        self.api_key = api_key
        self.timeout = timeout

    def generate(self, prompt: str, temperature: float, max_output_tokens: int) -> str:
        import httpx

        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = httpx.post(
                self.endpoint,
                json={
                    "prompt": prompt,
                    "temperature": temperature,
                    "max_output_tokens": max_output_tokens,
                },
                headers=headers,
                timeout=self.timeout,
            )
            response.raise_for_status()
            return str(response.json()["text"])
        except Exception as exc:  # noqa: BLE001 - collapse transport errors
            raise ClientError(f"chat endpoint failed: {exc}") from exc


# ---------------------------------------------------------------------------
# Embedding clients
# ---------------------------------------------------------------------------


@runtime_checkable
class EmbeddingClient(Protocol):
    @property
    def signature(self) -> str: ...

    def embed(self, text: str) -> np.ndarray: ...


class HashEmbedder:
    """Deterministic signed feature-hashing embedder.

    Each search term hashes to a (bucket, sign) pair; the counted buckets
    are L2-normalized, so identical texts embed identically and cosine
    similarity of a text with itself is exactly 1. Textless input maps to a
    fixed unit basis vector.
    """

    def __init__(self, dim: int = 256):
        if dim < 2:
            raise ValueError("dim must be at least 2")
        self.dim = dim

    @property
    def signature(self) -> str:
        return f"hash-{self.dim}"

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        for term in analyze(text):
            digest = hashlib.blake2b(term.encode("utf-8"), digest_size=8).digest()
            value = int.from_bytes(digest, "big")
            bucket = value % self.dim
            sign = 1.0 if (value >> 32) & 1 else -1.0
            vec[bucket] += sign
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            vec[0] = 1.0
            return vec
        return vec / norm


# ---------------------------------------------------------------------------
# Rerank scorers
# ---------------------------------------------------------------------------


@runtime_checkable
class RerankScorer(Protocol):
    def score_batch(self, query: str, passages: Sequence[str]) -> list[float]: ...


class TokenOverlapScorer:
    """Query-term containment ratio: |terms(q) ∩ terms(p)| / |terms(q)|.

    Deterministic stand-in for a cross-encoder; scores lie in [0, 1].
    """

    def score_batch(self, query: str, passages: Sequence[str]) -> list[float]:
        query_terms = set(analyze(query))
        if not query_terms:
            return [0.0 for _ in passages]
        return [
            len(query_terms & set(analyze(passage))) / len(query_terms)
            for passage in passages
        ]


class FailingScorer:
    def score_batch(self, query: str, passages: Sequence[str]) -> list[float]:
        raise ClientError("rerank backend unavailable")


class HttpRerankScorer:
    """Rerank scorer speaking the documented JSON contract."""

    def __init__(self, endpoint: str, api_key: str | None = None, timeout: float = 30.0):
        self.endpoint = endpoint
        self.api_key = api_key
        self.timeout = timeout

    def score_batch(self, query: str, passages: Sequence[str]) -> list[float]:
        import httpx

        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = httpx.post(
                self.endpoint,
                json={"query": query, "passages": list(passages)},
                headers=headers,
                timeout=self.timeout,
            )
            response.raise_for_status()
            scores = response.json()["scores"]
        except Exception as exc:  # noqa: BLE001
            raise ClientError(f"rerank endpoint failed: {exc}") from exc
        if len(scores) != len(passages):
            raise ClientError("rerank endpoint returned misaligned scores")
        return [float(s) for s in scores]
