"""Guarded natural-language-to-SQL access over the structured store."""

from .flow import (
    FallbackRedirect,
    RowEvidence,
    SqlExecutionError,
    TranslationFailedError,
    execute_sql,
    generate_sql,
    structured_answer_flow,
)
from .guard import RejectionReason, ValidatedSql, validate_sql
from .parser import SqlParseError, parse_select
from .prompts import SqlPrompt, build_sql_prompt

__all__ = [
    "FallbackRedirect",
    "RejectionReason",
    "RowEvidence",
    "SqlExecutionError",
    "SqlParseError",
    "SqlPrompt",
    "TranslationFailedError",
    "ValidatedSql",
    "build_sql_prompt",
    "execute_sql",
    "generate_sql",
    "parse_select",
    "structured_answer_flow",
    "validate_sql",
]
