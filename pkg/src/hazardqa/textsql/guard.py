"""Validation and normalization of generated SQL against the store schema.

The guard is an allow-list: only single SELECT statements of the parser's
dialect, referencing declared tables and columns and joining exclusively on
declared join keys, are accepted. Accepted statements are re-rendered in a
canonical form (uppercase keywords, schema-cased identifiers, every column
qualified) so the same statement always normalizes identically; validating
a normalized statement returns it unchanged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

from ..store import StructuredStore
from .parser import (
    Aggregate,
    BoolExpr,
    ColumnRef,
    Comparison,
    Condition,
    Join,
    Literal,
    OrderItem,
    Select,
    SelectItem,
    SqlParseError,
    Star,
    TableRef,
    parse_select,
)


class RejectionReason(Enum):
    FORBIDDEN_OPERATION = "ForbiddenOperation"
    SCHEMA_MISMATCH = "SchemaMismatch"
    INVALID_JOIN = "InvalidJoin"
    UNPARSABLE = "Unparsable"


@dataclass(frozen=True)
class ValidatedSql:
    """Normalized statement plus the guard verdict."""

    statement: str
    tables_used: frozenset[str]
    columns_used: frozenset[str]
    accepted: bool
    rejection: RejectionReason | None = None
    detail: str = ""


class _Rejection(Exception):
    def __init__(self, reason: RejectionReason, detail: str):
        super().__init__(detail)
        self.reason = reason
        self.detail = detail


# Statement verbs that identify a non-SELECT statement form up front.
_STATEMENT_VERBS = {
    "drop", "delete", "update", "insert", "create", "alter", "truncate",
    "replace", "merge", "grant", "revoke", "pragma", "attach", "detach",
    "vacuum", "analyze", "reindex", "begin", "commit", "rollback", "savepoint",
    "release", "explain", "with", "set", "call", "exec", "execute", "copy",
    "load", "lock", "use", "show", "describe", "values",
}

_FIRST_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _reject(raw: str, reason: RejectionReason, detail: str) -> ValidatedSql:
    return ValidatedSql(
        statement=raw.strip(),
        tables_used=frozenset(),
        columns_used=frozenset(),
        accepted=False,
        rejection=reason,
        detail=detail,
    )


class _Resolver:
    """Binds table and column references to the declared schema."""

    def __init__(self, store: StructuredStore, statement: Select):
        self.store = store
        # casefolded table name -> canonical name
        self.schema_tables = {name.lower(): name for name in store.tables}
        # casefolded column name per table -> canonical column name
        self.schema_columns = {
            name: {col.lower(): col for col in table.column_names}
            for name, table in store.tables.items()
        }
        self.join_keys = {key.lower() for key in store.join_keys}
        # scope: casefolded alias-or-table -> (render qualifier, canonical table)
        self.scope: dict[str, tuple[str, str]] = {}
        self.tables_used: set[str] = set()
        self.columns_used: set[str] = set()
        self._bind_table(statement.table)
        for join in statement.joins:
            self._bind_table(join.table)
        self.select_aliases = {
            item.alias.lower(): item.alias.lower()
            for item in statement.items
            if item.alias is not None
        }

    def _bind_table(self, ref: TableRef) -> TableRef:
        canonical = self.schema_tables.get(ref.name.lower())
        if canonical is None:
            raise _Rejection(
                RejectionReason.SCHEMA_MISMATCH, f"unknown table {ref.name!r}"
            )
        self.tables_used.add(canonical)
        if ref.alias is not None:
            alias = ref.alias.lower()
            if alias in self.scope:
                raise _Rejection(
                    RejectionReason.SCHEMA_MISMATCH, f"duplicate alias {ref.alias!r}"
                )
            self.scope[alias] = (alias, canonical)
        else:
            if canonical.lower() in self.scope:
                raise _Rejection(
                    RejectionReason.SCHEMA_MISMATCH,
                    f"table {canonical!r} appears twice without aliases",
                )
            self.scope[canonical.lower()] = (canonical, canonical)
        return ref

    def resolve_column(self, ref: ColumnRef) -> ColumnRef:
        """Return the render form (qualifier, canonical column name)."""
        if ref.qualifier is not None:
            bound = self.scope.get(ref.qualifier.lower())
            if bound is None:
                raise _Rejection(
                    RejectionReason.SCHEMA_MISMATCH,
                    f"unknown table or alias {ref.qualifier!r}",
                )
            qualifier, table = bound
            canonical = self.schema_columns[table].get(ref.name.lower())
            if canonical is None:
                raise _Rejection(
                    RejectionReason.SCHEMA_MISMATCH,
                    f"table {table!r} has no column {ref.name!r}",
                )
            self.columns_used.add(f"{table}.{canonical}")
            return ColumnRef(qualifier=qualifier, name=canonical)
        matches = [
            (qualifier, table)
            for qualifier, table in self.scope.values()
            if ref.name.lower() in self.schema_columns[table]
        ]
        if not matches:
            raise _Rejection(
                RejectionReason.SCHEMA_MISMATCH, f"unknown column {ref.name!r}"
            )
        if len(matches) > 1:
            raise _Rejection(
                RejectionReason.SCHEMA_MISMATCH, f"ambiguous column {ref.name!r}"
            )
        qualifier, table = matches[0]
        canonical = self.schema_columns[table][ref.name.lower()]
        self.columns_used.add(f"{table}.{canonical}")
        return ColumnRef(qualifier=qualifier, name=canonical)

    def check_join(self, join: Join) -> None:
        for side in (join.left, join.right):
            if side.name.lower() not in self.join_keys:
                raise _Rejection(
                    RejectionReason.INVALID_JOIN,
                    f"{side.name!r} is not a declared join key",
                )


# --- canonical rendering ----------------------------------------------------


def _render_column(ref: ColumnRef) -> str:
    return f"{ref.qualifier}.{ref.name}" if ref.qualifier else ref.name


def _render_expr(expr: Union[ColumnRef, Aggregate, Literal, Star]) -> str:
    if isinstance(expr, Star):
        return "*"
    if isinstance(expr, ColumnRef):
        return _render_column(expr)
    if isinstance(expr, Aggregate):
        return f"{expr.func}({_render_expr(expr.arg)})"
    return expr.lexeme


def _render_condition(cond: Condition) -> str:
    if isinstance(cond, Comparison):
        return f"{_render_expr(cond.left)} {cond.op} {_render_expr(cond.right)}"
    joiner = f" {cond.op} "
    parts = []
    for operand in cond.operands:
        rendered = _render_condition(operand)
        if isinstance(operand, BoolExpr):
            rendered = f"({rendered})"
        parts.append(rendered)
    return joiner.join(parts)


def _render(statement: Select) -> str:
    items = []
    for item in statement.items:
        rendered = _render_expr(item.expr)
        if item.alias:
            rendered += f" AS {item.alias.lower()}"
        items.append(rendered)
    parts = [f"SELECT {', '.join(items)}"]
    table = statement.table
    parts.append(
        f"FROM {table.name}" + (f" AS {table.alias.lower()}" if table.alias else "")
    )
    for join in statement.joins:
        alias = f" AS {join.table.alias.lower()}" if join.table.alias else ""
        parts.append(
            f"JOIN {join.table.name}{alias} ON "
            f"{_render_column(join.left)} = {_render_column(join.right)}"
        )
    if statement.where is not None:
        parts.append(f"WHERE {_render_condition(statement.where)}")
    if statement.group_by:
        parts.append("GROUP BY " + ", ".join(_render_column(c) for c in statement.group_by))
    if statement.order_by:
        rendered_items = []
        for item in statement.order_by:
            rendered = _render_expr(item.expr)
            rendered_items.append(f"{rendered} DESC" if item.descending else rendered)
        parts.append("ORDER BY " + ", ".join(rendered_items))
    if statement.limit is not None:
        parts.append(f"LIMIT {statement.limit}")
    return " ".join(parts)


def _resolve_statement(statement: Select, store: StructuredStore) -> tuple[Select, _Resolver]:
    resolver = _Resolver(store, statement)

    def resolve_expr(expr):
        if isinstance(expr, ColumnRef):
            return resolver.resolve_column(expr)
        if isinstance(expr, Aggregate):
            arg = expr.arg if isinstance(expr.arg, Star) else resolver.resolve_column(expr.arg)
            return Aggregate(func=expr.func, arg=arg)
        return expr

    def resolve_condition(cond: Condition) -> Condition:
        if isinstance(cond, Comparison):
            return Comparison(
                left=resolve_expr(cond.left), op=cond.op, right=resolve_expr(cond.right)
            )
        return BoolExpr(
            op=cond.op, operands=tuple(resolve_condition(c) for c in cond.operands)
        )

    items = []
    for item in statement.items:
        expr = item.expr if isinstance(item.expr, Star) else resolve_expr(item.expr)
        items.append(SelectItem(expr=expr, alias=item.alias.lower() if item.alias else None))

    def resolve_table(ref: TableRef) -> TableRef:
        canonical = resolver.schema_tables[ref.name.lower()]
        return TableRef(name=canonical, alias=ref.alias.lower() if ref.alias else None)

    joins = []
    for join in statement.joins:
        resolver.check_join(join)
        joins.append(
            Join(
                table=resolve_table(join.table),
                left=resolver.resolve_column(join.left),
                right=resolver.resolve_column(join.right),
            )
        )
    where = resolve_condition(statement.where) if statement.where is not None else None
    group_by = tuple(resolver.resolve_column(c) for c in statement.group_by)
    order_items = []
    for item in statement.order_by:
        expr = item.expr
        if (
            isinstance(expr, ColumnRef)
            and expr.qualifier is None
            and expr.name.lower() in resolver.select_aliases
        ):
            resolved = ColumnRef(qualifier=None, name=expr.name.lower())
        else:
            resolved = resolve_expr(expr)
        order_items.append(OrderItem(expr=resolved, descending=item.descending))
    resolved_statement = Select(
        items=tuple(items),
        table=resolve_table(statement.table),
        joins=tuple(joins),
        where=where,
        group_by=group_by,
        order_by=tuple(order_items),
        limit=statement.limit,
    )
    return resolved_statement, resolver


def validate_sql(raw: str, store: StructuredStore) -> ValidatedSql:
    """Parse, schema-check and normalize a generated statement.

    Verdicts: non-SELECT statement forms (mutation, DDL/DCL, anything whose
    leading verb is a known statement keyword) and multi-statement input are
    rejected as ForbiddenOperation; unknown tables/columns as SchemaMismatch;
    joins off the declared keys as InvalidJoin; anything else outside the
    grammar as Unparsable.
    """
    stripped = raw.strip()
    if not stripped:
        return _reject(raw, RejectionReason.UNPARSABLE, "empty statement")
    first = _FIRST_WORD_RE.match(stripped)
    first_word = first.group().lower() if first else ""
    if first_word != "select":
        if first_word in _STATEMENT_VERBS:
            return _reject(
                raw,
                RejectionReason.FORBIDDEN_OPERATION,
                f"statement form {first_word.upper()!r} is not allowed",
            )
        return _reject(raw, RejectionReason.UNPARSABLE, "statement is not a SELECT")
    try:
        statement = parse_select(stripped)
    except SqlParseError as exc:
        if "multiple statements" in str(exc):
            return _reject(raw, RejectionReason.FORBIDDEN_OPERATION, str(exc))
        return _reject(raw, RejectionReason.UNPARSABLE, str(exc))
    try:
        resolved, resolver = _resolve_statement(statement, store)
    except _Rejection as exc:
        return _reject(raw, exc.reason, exc.detail)
    return ValidatedSql(
        statement=_render(resolved),
        tables_used=frozenset(resolver.tables_used),
        columns_used=frozenset(resolver.columns_used),
        accepted=True,
    )
