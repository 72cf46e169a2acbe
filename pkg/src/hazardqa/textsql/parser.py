"""Recursive-descent parser for the guarded SELECT dialect.

The dialect is an allow-list: single SELECT statements with optional WHERE,
GROUP BY, ORDER BY and LIMIT clauses, inner joins with equality ON
conditions, and the aggregates MAX/SUM/AVG/COUNT. Anything outside this
grammar fails to parse, which the guard turns into a rejection; there is no
way to express data modification, DDL, subqueries or multiple statements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class SqlParseError(Exception):
    """Input does not conform to the guarded SELECT grammar."""


KEYWORDS = {
    "select", "from", "where", "group", "by", "order", "limit",
    "join", "inner", "on", "as", "and", "or", "asc", "desc", "not",
}

AGGREGATES = {"max", "sum", "avg", "count"}

COMPARATORS = {"=", "!=", "<>", "<", "<=", ">", ">="}


@dataclass(frozen=True)
class Token:
    kind: str  # kw | agg | ident | number | string | op | semi
    value: str


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
    | (?P<number>\d+(?:\.\d+)?)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<string>'(?:[^']|'')*')
    | (?P<op><=|>=|!=|<>|[=<>(),.*])
    | (?P<semi>;)
    """,
    re.VERBOSE,
)


def lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise SqlParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = match.end()
        if match.lastgroup == "ws":
            continue
        value = match.group()
        if match.lastgroup == "ident":
            lowered = value.lower()
            if lowered in KEYWORDS:
                tokens.append(Token("kw", lowered))
            elif lowered in AGGREGATES:
                tokens.append(Token("agg", lowered))
            else:
                tokens.append(Token("ident", value))
        else:
            tokens.append(Token(match.lastgroup, value))
    return tokens


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class ColumnRef:
    qualifier: str | None
    name: str


@dataclass(frozen=True)
class Star:
    pass


@dataclass(frozen=True)
class Aggregate:
    func: str  # MAX | SUM | AVG | COUNT
    arg: Union[ColumnRef, Star]


@dataclass(frozen=True)
class Literal:
    lexeme: str  # rendered verbatim


Expr = Union[ColumnRef, Aggregate, Literal]


@dataclass(frozen=True)
class SelectItem:
    expr: Union[Expr, Star]
    alias: str | None = None


@dataclass(frozen=True)
class TableRef:
    name: str
    alias: str | None = None


@dataclass(frozen=True)
class Join:
    table: TableRef
    left: ColumnRef
    right: ColumnRef


@dataclass(frozen=True)
class Comparison:
    left: Union[ColumnRef, Literal]
    op: str
    right: Union[ColumnRef, Literal]


@dataclass(frozen=True)
class BoolExpr:
    op: str  # AND | OR
    operands: tuple["Condition", ...]


Condition = Union[Comparison, BoolExpr]


@dataclass(frozen=True)
class OrderItem:
    expr: Union[ColumnRef, Aggregate]
    descending: bool = False


@dataclass(frozen=True)
class Select:
    items: tuple[SelectItem, ...]
    table: TableRef
    joins: tuple[Join, ...] = ()
    where: Condition | None = None
    group_by: tuple[ColumnRef, ...] = ()
    order_by: tuple[OrderItem, ...] = ()
    limit: int | None = None


# --- Parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Token:
        token = self.peek()
        if token is None:
            raise SqlParseError("unexpected end of statement")
        self.pos += 1
        return token

    def accept(self, kind: str, value: str | None = None) -> Token | None:
        token = self.peek()
        if token is not None and token.kind == kind and (value is None or token.value == value):
            self.pos += 1
            return token
        return None

    def expect(self, kind: str, value: str | None = None) -> Token:
        token = self.accept(kind, value)
        if token is None:
            found = self.peek()
            expected = value or kind
            raise SqlParseError(
                f"expected {expected!r}, found {found.value!r}" if found else
                f"expected {expected!r}, found end of statement"
            )
        return token

    # expressions

    def column(self) -> ColumnRef:
        first = self.expect("ident").value
        if self.accept("op", "."):
            second = self.expect("ident").value
            return ColumnRef(qualifier=first, name=second)
        return ColumnRef(qualifier=None, name=first)

    def aggregate(self) -> Aggregate:
        func = self.expect("agg").value.upper()
        self.expect("op", "(")
        arg: Union[ColumnRef, Star]
        if self.accept("op", "*"):
            arg = Star()
        else:
            arg = self.column()
        self.expect("op", ")")
        return Aggregate(func=func, arg=arg)

    def literal(self) -> Literal:
        token = self.peek()
        if token is None:
            raise SqlParseError("expected a literal, found end of statement")
        if token.kind == "number":
            self.advance()
            return Literal(lexeme=token.value)
        if token.kind == "string":
            self.advance()
            return Literal(lexeme=token.value)
        raise SqlParseError(f"expected a literal, found {token.value!r}")

    def select_item(self) -> SelectItem:
        token = self.peek()
        if token is None:
            raise SqlParseError("expected a select item")
        expr: Union[Expr, Star]
        if token.kind == "agg":
            expr = self.aggregate()
        elif token.kind == "ident":
            expr = self.column()
        elif token.kind in ("number", "string"):
            expr = self.literal()
        else:
            raise SqlParseError(f"unexpected token {token.value!r} in select list")
        alias = None
        if self.accept("kw", "as"):
            alias = self.expect("ident").value
        else:
            bare = self.accept("ident")
            if bare is not None:
                alias = bare.value
        return SelectItem(expr=expr, alias=alias)

    def table_ref(self) -> TableRef:
        name = self.expect("ident").value
        alias = None
        if self.accept("kw", "as"):
            alias = self.expect("ident").value
        else:
            bare = self.accept("ident")
            if bare is not None:
                alias = bare.value
        return TableRef(name=name, alias=alias)

    # conditions

    def condition(self) -> Condition:
        return self.or_condition()

    def or_condition(self) -> Condition:
        operands = [self.and_condition()]
        while self.accept("kw", "or"):
            operands.append(self.and_condition())
        if len(operands) == 1:
            return operands[0]
        return BoolExpr(op="OR", operands=tuple(operands))

    def and_condition(self) -> Condition:
        operands = [self.primary_condition()]
        while self.accept("kw", "and"):
            operands.append(self.primary_condition())
        if len(operands) == 1:
            return operands[0]
        return BoolExpr(op="AND", operands=tuple(operands))

    def primary_condition(self) -> Condition:
        if self.accept("op", "("):
            inner = self.or_condition()
            self.expect("op", ")")
            return inner
        left = self.operand()
        op_token = self.peek()
        if op_token is None or op_token.kind != "op" or op_token.value not in COMPARATORS:
            raise SqlParseError(
                f"expected a comparison operator, found "
                f"{op_token.value!r}" if op_token else "expected a comparison operator"
            )
        self.advance()
        right = self.operand()
        return Comparison(left=left, op=op_token.value, right=right)

    def operand(self) -> Union[ColumnRef, Literal]:
        token = self.peek()
        if token is None:
            raise SqlParseError("expected a column or literal")
        if token.kind == "ident":
            return self.column()
        return self.literal()

    # statement

    def select(self) -> Select:
        self.expect("kw", "select")
        items: list[SelectItem] = []
        if self.accept("op", "*"):
            items.append(SelectItem(expr=Star()))
        else:
            items.append(self.select_item())
            while self.accept("op", ","):
                items.append(self.select_item())
        self.expect("kw", "from")
        table = self.table_ref()
        joins: list[Join] = []
        while True:
            if self.accept("kw", "inner"):
                self.expect("kw", "join")
            elif not self.accept("kw", "join"):
                break
            joined = self.table_ref()
            self.expect("kw", "on")
            left = self.column()
            self.expect("op", "=")
            right = self.column()
            joins.append(Join(table=joined, left=left, right=right))
        where = None
        if self.accept("kw", "where"):
            where = self.condition()
        group_by: list[ColumnRef] = []
        if self.accept("kw", "group"):
            self.expect("kw", "by")
            group_by.append(self.column())
            while self.accept("op", ","):
                group_by.append(self.column())
        order_by: list[OrderItem] = []
        if self.accept("kw", "order"):
            self.expect("kw", "by")
            order_by.append(self.order_item())
            while self.accept("op", ","):
                order_by.append(self.order_item())
        limit = None
        if self.accept("kw", "limit"):
            limit = int(self.expect("number").value)
        return Select(
            items=tuple(items),
            table=table,
            joins=tuple(joins),
            where=where,
            group_by=tuple(group_by),
            order_by=tuple(order_by),
            limit=limit,
        )

    def order_item(self) -> OrderItem:
        token = self.peek()
        if token is None:
            raise SqlParseError("expected an order-by item")
        expr: Union[ColumnRef, Aggregate]
        if token.kind == "agg":
            expr = self.aggregate()
        elif token.kind == "ident":
            expr = self.column()
        else:
            raise SqlParseError(f"unexpected token {token.value!r} in order by")
        descending = False
        if self.accept("kw", "desc"):
            descending = True
        else:
            self.accept("kw", "asc")
        return OrderItem(expr=expr, descending=descending)


def split_statements(tokens: list[Token]) -> list[list[Token]]:
    """Split on top-level semicolons, dropping empty segments."""
    segments: list[list[Token]] = []
    current: list[Token] = []
    for token in tokens:
        if token.kind == "semi":
            if current:
                segments.append(current)
                current = []
        else:
            current.append(token)
    if current:
        segments.append(current)
    return segments


def parse_select(text: str) -> Select:
    """Parse a single SELECT statement of the guarded dialect.

    Raises :class:`SqlParseError` for anything outside the grammar,
    including multiple statements.
    """
    tokens = lex(text)
    segments = split_statements(tokens)
    if len(segments) == 0:
        raise SqlParseError("empty statement")
    if len(segments) > 1:
        raise SqlParseError("multiple statements are not allowed")
    parser = _Parser(segments[0])
    statement = parser.select()
    trailing = parser.peek()
    if trailing is not None:
        raise SqlParseError(f"unexpected trailing input at {trailing.value!r}")
    return statement
