"""Schema-aware prompt assembly for SQL generation."""

from __future__ import annotations

from dataclasses import dataclass

from ..store import StructuredStore
from ..understanding import StructuredQueryRepresentation

SQL_TEMPERATURE = 0.0
SQL_MAX_TOKENS = 300

INSTRUCTION_BLOCK = """\
Task: Generate an executable SQL query from a natural-language disaster information request.

Instructions: You are a disaster-data database expert. Translate the user query into a valid SQL statement using the provided schema and domain guidance.
- Use only the provided tables and columns
- Map disaster-related expressions to appropriate SQL operations
- Apply aggregation, ranking, and filtering when required
- Use valid join keys for cross-table queries
- Follow schema-aware query construction
- Use event-consistent temporal filtering when supported by the query and schema
- Do not use unsupported SQL operations (DROP, DELETE, UPDATE, INSERT)
- Output only the SQL query"""

DOMAIN_MAPPINGS = """\
Domain mappings:
"largest evacuation rate" -> MAX(evacuation_rate)
"total building damage" -> SUM(Adj_damage_amount)
"average outage" -> AVG(Customers_Out)
"group by area" -> GROUP BY geographic identifier"""


@dataclass(frozen=True)
class SqlPrompt:
    instruction_block: str
    schema_block: str
    question: str

    def text(self) -> str:
        return f"{self.instruction_block}\n\n{self.schema_block}\n\nQuestion: {self.question}"


def build_sql_prompt(
    sqr: StructuredQueryRepresentation, store: StructuredStore
) -> SqlPrompt:
    """Assemble instructions, schema lines, join keys and exemplar mappings.

    The prompt ends with the rewritten question.
    """
    if not store.tables:
        raise ValueError("store schema is empty")
    schema_lines = ["Schema:"]
    schema_lines.extend(table.describe() for table in store.tables.values())
    join_keys = ", ".join(store.join_keys) if store.join_keys else "(none)"
    schema_lines.append(f"Available join keys: {join_keys}")
    schema_block = "\n".join(schema_lines) + "\n\n" + DOMAIN_MAPPINGS
    return SqlPrompt(
        instruction_block=INSTRUCTION_BLOCK,
        schema_block=schema_block,
        question=sqr.rewritten_query,
    )
