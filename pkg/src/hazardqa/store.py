"""Relational store for structured disaster records.

Rows live in an in-process SQLite database; the declared schema (tables,
typed columns, join keys) is kept alongside so the SQL guard can check
generated statements against it. The store is read-only once loaded.

Loading accepts either a schema declaration plus per-table row data
(programmatic, or a JSON/YAML schema file with one CSV per table) or an
existing SQLite database file.
"""

from __future__ import annotations

import csv
import json
import sqlite3
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

COLUMN_TYPES = ("integer", "real", "text")

_SQLITE_TYPES = {"integer": "INTEGER", "real": "REAL", "text": "TEXT"}


class StoreError(Exception):
    """Base class for structured-store failures."""


class SchemaRowMismatchError(StoreError):
    """A row does not conform to its table's declared columns."""


@dataclass(frozen=True)
class TableSchema:
    """Declared table: ordered (name, type) columns, types in COLUMN_TYPES."""

    name: str
    columns: tuple[tuple[str, str], ...]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.columns)

    def describe(self) -> str:
        return f"{self.name}({', '.join(self.column_names)})"


class StructuredStore:
    """Schema-validated relational records, queryable via SELECT statements.

    Concurrent reads are serialized on an internal lock; the store is never
    mutated after construction.
    """

    def __init__(
        self,
        tables: Sequence[TableSchema],
        join_keys: Sequence[str],
        conn: sqlite3.Connection,
    ):
        self.tables: dict[str, TableSchema] = {t.name: t for t in tables}
        self.join_keys: tuple[str, ...] = tuple(join_keys)
        self._conn = conn
        self._lock = threading.Lock()
        all_columns = {c for t in tables for c in t.column_names}
        for key in self.join_keys:
            if key not in all_columns:
                raise StoreError(f"join key {key!r} does not appear in any table")

    def row_count(self, table: str) -> int:
        if table not in self.tables:
            raise StoreError(f"unknown table {table!r}")
        with self._lock:
            cur = self._conn.execute(f'SELECT COUNT(*) FROM "{table}"')
            return int(cur.fetchone()[0])

    def run_select(self, statement: str) -> tuple[tuple[str, ...], list[tuple]]:
        """Execute a SELECT and return (column names, rows).

        Callers are expected to pass only guard-accepted statements; this
        method does not re-validate.
        """
        with self._lock:
            cur = self._conn.execute(statement)
            columns = tuple(d[0] for d in cur.description)
            return columns, [tuple(row) for row in cur.fetchall()]

    def close(self) -> None:
        self._conn.close()


def _coerce(value: Any, column_type: str, table: str, column: str) -> Any:
    if value is None or (isinstance(value, str) and value == ""):
        return None
    try:
        if column_type == "integer":
            if isinstance(value, bool):
                raise ValueError(value)
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if column_type == "real":
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise SchemaRowMismatchError(
            f"value {value!r} is not a valid {column_type} for {table}.{column}"
        ) from None


def _normalize_schema_decl(schema_decl: Mapping[str, Any]) -> list[TableSchema]:
    tables: list[TableSchema] = []
    raw_tables = schema_decl.get("tables", {})
    if not raw_tables:
        raise StoreError("schema declares no tables")
    for name, columns in raw_tables.items():
        cols: list[tuple[str, str]] = []
        seen: set[str] = set()
        for col in columns:
            if isinstance(col, Mapping):
                col_name, col_type = str(col["name"]), str(col.get("type", "text"))
            else:
                col_name, col_type = str(col[0]), str(col[1])
            col_type = col_type.lower()
            if col_type not in COLUMN_TYPES:
                raise StoreError(f"unknown column type {col_type!r} for {name}.{col_name}")
            if col_name.lower() in seen:
                raise StoreError(f"duplicate column {col_name!r} in table {name!r}")
            seen.add(col_name.lower())
            cols.append((col_name, col_type))
        tables.append(TableSchema(name=str(name), columns=tuple(cols)))
    return tables


def load_structured_store(
    schema_decl: Mapping[str, Any],
    row_data: Mapping[str, Iterable[Sequence[Any]]] | None = None,
) -> StructuredStore:
    """Build a store from a schema declaration and per-table rows.

    ``schema_decl`` maps ``tables`` to {table: [{"name","type"}, ...]} (or
    (name, type) pairs) plus an optional ``join_keys`` list. Row values are
    coerced to the declared column types; empty strings load as NULL.

    Raises:
        SchemaRowMismatchError: a row has the wrong arity or a value that
            does not fit the declared column type.
        StoreError: empty schema, bad column type, or unknown row table.
    """
    tables = _normalize_schema_decl(schema_decl)
    join_keys = [str(k) for k in schema_decl.get("join_keys", ())]
    conn = sqlite3.connect(":memory:", check_same_thread=False)
    for table in tables:
        cols_sql = ", ".join(f'"{name}" {_SQLITE_TYPES[ctype]}' for name, ctype in table.columns)
        conn.execute(f'CREATE TABLE "{table.name}" ({cols_sql})')
    by_name = {t.name: t for t in tables}
    for table_name, rows in (row_data or {}).items():
        table = by_name.get(str(table_name))
        if table is None:
            raise StoreError(f"row data references unknown table {table_name!r}")
        placeholders = ", ".join("?" for _ in table.columns)
        for row in rows:
            row = tuple(row)
            if len(row) != len(table.columns):
                raise SchemaRowMismatchError(
                    f"table {table.name!r} expects {len(table.columns)} values, got {len(row)}"
                )
            coerced = tuple(
                _coerce(value, ctype, table.name, cname)
                for value, (cname, ctype) in zip(row, table.columns)
            )
            conn.execute(f'INSERT INTO "{table.name}" VALUES ({placeholders})', coerced)
    conn.commit()
    return StructuredStore(tables, join_keys, conn)


def load_store_from_files(schema_path: str | Path, data_dir: str | Path | None = None) -> StructuredStore:
    """Load a store from a JSON schema declaration plus per-table CSV files.

    Each table ``t`` reads its rows from ``<data_dir>/<t>.csv`` (header row
    required, column order must match the declaration); missing files load
    as empty tables.
    """
    schema_path = Path(schema_path)
    with open(schema_path, encoding="utf-8") as fh:
        schema_decl = json.load(fh)
    data_dir = Path(data_dir) if data_dir is not None else schema_path.parent
    row_data: dict[str, list[Sequence[Any]]] = {}
    for name in schema_decl.get("tables", {}):
        csv_path = data_dir / f"{name}.csv"
        if not csv_path.exists():
            continue
        with open(csv_path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                continue
            row_data[name] = [row for row in reader if row]
    return load_structured_store(schema_decl, row_data)


def load_store_from_sqlite(path: str | Path, join_keys: Sequence[str] = ()) -> StructuredStore:
    """Wrap an existing SQLite database file as a read-only store.

    The schema is introspected from the file; declared types map onto
    integer/real/text (anything else becomes text).
    """
    source = sqlite3.connect(str(path))
    conn = sqlite3.connect(":memory:", check_same_thread=False)
    source.backup(conn)
    source.close()
    tables: list[TableSchema] = []
    for (name,) in conn.execute(
        "SELECT name FROM sqlite_master WHERE type='table' AND name NOT LIKE 'sqlite_%'"
    ).fetchall():
        cols: list[tuple[str, str]] = []
        for _, col_name, decl_type, *_ in conn.execute(f'PRAGMA table_info("{name}")'):
            decl = (decl_type or "").lower()
            if "int" in decl:
                ctype = "integer"
            elif any(t in decl for t in ("real", "floa", "doub", "num", "dec")):
                ctype = "real"
            else:
                ctype = "text"
            cols.append((col_name, ctype))
        tables.append(TableSchema(name=name, columns=tuple(cols)))
    if not tables:
        raise StoreError(f"database {path} contains no tables")
    return StructuredStore(tables, join_keys, conn)
