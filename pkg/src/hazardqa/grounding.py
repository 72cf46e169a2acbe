"""Branch-tagged evidence bundles handed to response generation.

Budgets are measured in whitespace tokens: multiple-choice contexts are
capped at 6,000 tokens total, open-ended and interactive contexts truncate
each unit independently to 512 tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .routing import Pathway
from .tokens import count_tokens

MCQ_CONTEXT_TOKENS = 6000
OE_UNIT_TOKENS = 512


class TaskKind(Enum):
    MCQ = "mcq"
    OPEN_ENDED = "open_ended"
    INTERACTIVE = "interactive"


@dataclass(frozen=True)
class GroundingContext:
    """Evidence units as (source identifier, text) pairs for one branch."""

    branch: Pathway
    units: tuple[tuple[str, str], ...] = ()
    total_tokens: int = 0
    degraded: bool = False
    sql: str | None = None
    row_count: int | None = None

    def texts(self) -> list[str]:
        return [text for _, text in self.units]

    def source_ids(self) -> list[str]:
        """Unit source identifiers, first-occurrence order, deduplicated."""
        seen: list[str] = []
        for source_id, _ in self.units:
            if source_id not in seen:
                seen.append(source_id)
        return seen


def context_from_units(
    units: list[tuple[str, str]],
    branch: Pathway,
    degraded: bool = False,
    sql: str | None = None,
    row_count: int | None = None,
) -> GroundingContext:
    total = sum(count_tokens(text) for _, text in units)
    return GroundingContext(
        branch=branch,
        units=tuple(units),
        total_tokens=total,
        degraded=degraded,
        sql=sql,
        row_count=row_count,
    )
