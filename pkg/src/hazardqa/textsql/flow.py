"""Structured-access branch: generate, guard, execute, or redirect.

Requests that cannot be turned into valid executable SQL are never errors
at this level; they become a :class:`FallbackRedirect` that sends the
request to the web-fallback branch.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..clients import ClientError, GenerativeModelClient
from ..grounding import GroundingContext, context_from_units
from ..routing import Pathway
from ..store import StructuredStore
from ..understanding import StructuredQueryRepresentation
from .guard import ValidatedSql, validate_sql
from .prompts import SQL_MAX_TOKENS, SQL_TEMPERATURE, SqlPrompt, build_sql_prompt


class TranslationFailedError(Exception):
    """The model produced no usable SQL text."""


class SqlExecutionError(Exception):
    """An accepted statement failed at execution time."""


@dataclass(frozen=True)
class RowEvidence:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    row_count: int


@dataclass(frozen=True)
class FallbackRedirect:
    """Signal that the request should be served by the web-fallback branch."""

    sqr: StructuredQueryRepresentation
    reason: str


_FENCE_RE = re.compile(r"```(?:sql)?\s*(.*?)```", re.IGNORECASE | re.DOTALL)
_LABEL_RE = re.compile(r"^\s*sql\s*:\s*", re.IGNORECASE)


def generate_sql(prompt: SqlPrompt, client: GenerativeModelClient) -> str:
    """Return the model's SQL text, stripped of fences and leading labels.

    Raises:
        TranslationFailedError: the backend failed or returned blank text.
    """
    try:
        raw = client.generate(prompt.text(), SQL_TEMPERATURE, SQL_MAX_TOKENS)
    except ClientError as exc:
        raise TranslationFailedError(str(exc)) from exc
    fenced = _FENCE_RE.search(raw)
    if fenced is not None:
        raw = fenced.group(1)
    raw = _LABEL_RE.sub("", raw.strip()).strip()
    if not raw:
        raise TranslationFailedError("model returned empty SQL")
    return raw


def _format_value(value) -> str:
    return "NULL" if value is None else str(value)


def execute_sql(validated: ValidatedSql, store: StructuredStore) -> RowEvidence:
    """Run an accepted statement; rows come back in its ORDER BY order."""
    if not validated.accepted:
        raise ValueError("execute_sql requires an accepted statement")
    try:
        columns, rows = store.run_select(validated.statement)
    except Exception as exc:  # noqa: BLE001 - engine errors become redirect fodder
        raise SqlExecutionError(str(exc)) from exc
    return RowEvidence(columns=columns, rows=tuple(rows), row_count=len(rows))


def row_units(validated: ValidatedSql, evidence: RowEvidence) -> list[tuple[str, str]]:
    """Render rows as (source label, text) evidence units."""
    label = f"{validated.statement} ({evidence.row_count} rows)"
    units = []
    for row in evidence.rows:
        rendered = ", ".join(
            f"{col}={_format_value(val)}" for col, val in zip(evidence.columns, row)
        )
        units.append((label, rendered))
    return units


def structured_answer_flow(
    sqr: StructuredQueryRepresentation,
    store: StructuredStore | None,
    client: GenerativeModelClient,
) -> Union[GroundingContext, FallbackRedirect]:
    """Translate, validate and execute; redirect on any failure.

    Always yields exactly one of a structured grounding context or a
    redirect carrying the query representation.
    """
    if store is None or not store.tables:
        return FallbackRedirect(sqr=sqr, reason="no structured store configured")
    prompt = build_sql_prompt(sqr, store)
    try:
        raw = generate_sql(prompt, client)
    except TranslationFailedError as exc:
        return FallbackRedirect(sqr=sqr, reason=f"translation failed: {exc}")
    validated = validate_sql(raw, store)
    if not validated.accepted:
        reason = validated.rejection.value if validated.rejection else "rejected"
        return FallbackRedirect(sqr=sqr, reason=f"rejected: {reason} ({validated.detail})")
    try:
        evidence = execute_sql(validated, store)
    except SqlExecutionError as exc:
        return FallbackRedirect(sqr=sqr, reason=f"execution error: {exc}")
    return context_from_units(
        row_units(validated, evidence),
        branch=Pathway.STRUCTURED_ACCESS,
        sql=validated.statement,
        row_count=evidence.row_count,
    )
