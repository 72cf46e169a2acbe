"""Branch-specific response generation.

Each pathway has its own prompt template (document: grounded synthesis,
structured: numerical fidelity, web: uncertainty acknowledgment) with
{context}, {memory} and {question} slots. Decoding parameters are a pure
function of the task kind: multiple-choice uses greedy decoding, open-ended
uses temperature 0.7 with difficulty-scaled output budgets, and interactive
turns mirror the largest open-ended budget.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .clients import GenerativeModelClient
from .grounding import GroundingContext, TaskKind
from .routing import Pathway


class Difficulty(Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"
    EXTREME = "extreme"


OE_TOKEN_BUDGETS = {
    Difficulty.EASY: 80,
    Difficulty.MEDIUM: 180,
    Difficulty.HARD: 300,
    Difficulty.EXTREME: 400,
}

MCQ_TEMPERATURE = 0.0
MCQ_MAX_TOKENS = 32
OE_TEMPERATURE = 0.7
INTERACTIVE_TEMPERATURE = 0.7
INTERACTIVE_MAX_TOKENS = 400

_TEMPLATE_FILES = {
    Pathway.DOCUMENT_RETRIEVAL: "document.txt",
    Pathway.STRUCTURED_ACCESS: "structured.txt",
    Pathway.WEB_FALLBACK: "web.txt",
}

_SLOT_RE = re.compile(r"\{(context|memory|question)\}")


@dataclass(frozen=True)
class AnswerEnvelope:
    """Final answer plus the provenance surfaced to callers."""

    answer_text: str
    pathway: Pathway
    sources: tuple[str, ...]
    degraded: bool
    timestamp: float


def load_templates(directory: str | Path | None = None) -> dict[Pathway, str]:
    """Branch templates from ``directory``, falling back to the packaged defaults."""
    templates: dict[Pathway, str] = {}
    for pathway, filename in _TEMPLATE_FILES.items():
        if directory is not None and (Path(directory) / filename).exists():
            text = (Path(directory) / filename).read_text(encoding="utf-8")
        else:
            text = (resources.files("hazardqa") / "templates" / filename).read_text(
                encoding="utf-8"
            )
        for slot in ("{context}", "{memory}", "{question}"):
            if slot not in text:
                raise ValueError(f"template {filename} is missing slot {slot}")
        templates[pathway] = text
    return templates


def render_context_units(ctx: GroundingContext) -> str:
    return "\n".join(f"[{source_id}] {text}" for source_id, text in ctx.units)


def build_prompt(
    ctx: GroundingContext,
    memory_pairs: Sequence[tuple[str, str]],
    question: str,
    templates: Mapping[Pathway, str] | None = None,
) -> str:
    """Fill the branch's template; a built prompt has no unfilled slots."""
    templates = templates or load_templates()
    values = {
        "context": render_context_units(ctx),
        "memory": "\n".join(f"Q: {q}\nA: {a}" for q, a in memory_pairs),
        "question": question,
    }
    # single-pass substitution: slot markers inside values are never re-expanded
    return _SLOT_RE.sub(lambda m: values[m.group(1)], templates[ctx.branch])


def decoding_parameters(
    task_kind: TaskKind, difficulty: Difficulty | None = None
) -> tuple[float, int]:
    """(temperature, max output tokens) for a generation call."""
    if task_kind is TaskKind.MCQ:
        return MCQ_TEMPERATURE, MCQ_MAX_TOKENS
    if task_kind is TaskKind.OPEN_ENDED:
        budget = OE_TOKEN_BUDGETS[difficulty or Difficulty.EXTREME]
        return OE_TEMPERATURE, budget
    return INTERACTIVE_TEMPERATURE, INTERACTIVE_MAX_TOKENS


def generate_answer(
    prompt: str,
    client: GenerativeModelClient,
    task_kind: TaskKind,
    difficulty: Difficulty | None = None,
) -> str:
    temperature, max_tokens = decoding_parameters(task_kind, difficulty)
    return client.generate(prompt, temperature, max_tokens)


def respond(
    ctx: GroundingContext,
    memory_pairs: Sequence[tuple[str, str]],
    question: str,
    client: GenerativeModelClient,
    task_kind: TaskKind = TaskKind.INTERACTIVE,
    difficulty: Difficulty | None = None,
    templates: Mapping[Pathway, str] | None = None,
) -> AnswerEnvelope:
    """Generate the grounded answer and wrap it with provenance.

    Sources are the context units' source identifiers in first-occurrence
    order; an empty context still yields an answer, flagged degraded.
    """
    prompt = build_prompt(ctx, memory_pairs, question, templates)
    answer = generate_answer(prompt, client, task_kind, difficulty)
    return AnswerEnvelope(
        answer_text=answer,
        pathway=ctx.branch,
        sources=tuple(ctx.source_ids()),
        degraded=ctx.degraded or not ctx.units,
        timestamp=time.time(),
    )
