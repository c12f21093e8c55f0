"""SELECT-query subset: parser, evaluator, and SPARQL-results JSON.

Supported grammar: PREFIX declarations; SELECT with an explicit variable
list; a WHERE block of triple patterns using the ';' (shared subject)
and ',' (shared subject and predicate) abbreviations; FILTER EXISTS /
FILTER NOT EXISTS with a nested pattern group; FILTER comparisons;
ORDER BY ASC/DESC; LIMIT. Evaluation is a left-to-right nested-loop
join with binding substitution over the store's indexes — no optimizer,
no DISTINCT/OPTIONAL/UNION.
"""

from __future__ import annotations

import json
import operator
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .rdf import (
    Iri,
    Literal,
    Term,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    term_text,
)
from .store import TriplePattern, TripleStore

RDF_TYPE = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")

_NUMERIC_DATATYPES = {XSD_INTEGER.value, XSD_DECIMAL.value, XSD_DOUBLE.value}


class QuerySyntaxError(ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(f"at offset {position}: {message}")
        self.position = position


@dataclass(frozen=True)
class Var:
    name: str


QueryTerm = Union[Iri, Literal, Var]


@dataclass(frozen=True)
class QueryPattern:
    subject: QueryTerm
    predicate: QueryTerm
    object: QueryTerm

    def variables(self) -> set[str]:
        return {
            term.name
            for term in (self.subject, self.predicate, self.object)
            if isinstance(term, Var)
        }


@dataclass(frozen=True)
class GroupFilter:
    """FILTER EXISTS / FILTER NOT EXISTS over a nested pattern group."""

    patterns: tuple[QueryPattern, ...]
    negated: bool = False


@dataclass(frozen=True)
class CompareFilter:
    """FILTER (?var op constant)."""

    var: str
    op: str
    value: Term


Filter = Union[GroupFilter, CompareFilter]


@dataclass(frozen=True)
class SelectQuery:
    prefixes: Mapping[str, str]
    variables: tuple[str, ...]
    patterns: tuple[QueryPattern, ...]
    filters: tuple[Filter, ...] = ()
    order: tuple[str, bool] | None = None  # (variable, descending)
    limit: int | None = None


@dataclass(frozen=True)
class ResultTable:
    vars: tuple[str, ...]
    rows: tuple[dict, ...] = field(default_factory=tuple)


# --- tokenizer ---------------------------------------------------------

_KEYWORDS = {
    "PREFIX", "SELECT", "WHERE", "FILTER", "EXISTS", "NOT",
    "ORDER", "BY", "ASC", "DESC", "LIMIT", "TRUE", "FALSE",
}

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+|\#[^\n]*)
    | (?P<iri><[^<>"\s]*>)
    | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<string>"(?:[^"\\\n]|\\.)*")
    | (?P<number>[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+|\d*\.\d+|\d+))
    | (?P<dtsep>\^\^)
    | (?P<pname>(?:[A-Za-z_][A-Za-z0-9_\-]*)?:(?:[A-Za-z0-9_][A-Za-z0-9_\-]*)?)
    | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op><=|>=|!=|=|<|>)
    | (?P<punct>[{}();,.])
    """,
    re.VERBOSE,
)

_STRING_UNESCAPES = {"\\": "\\", '"': '"', "'": "'", "n": "\n", "r": "\r", "t": "\t"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise QuerySyntaxError(pos, f"unexpected character {text[pos]!r}")
        pos = match.end()
        kind = match.lastgroup or ""
        if kind == "ws":
            continue
        tokens.append(_Token(kind, match.group(), match.start()))
    tokens.append(_Token("eof", "", len(text)))
    return tokens


def _unescape(body: str, pos: int) -> str:
    parts: list[str] = []
    i = 0
    while i < len(body):
        char = body[i]
        if char != "\\":
            parts.append(char)
            i += 1
            continue
        escape = body[i + 1]
        if escape in _STRING_UNESCAPES:
            parts.append(_STRING_UNESCAPES[escape])
            i += 2
        elif escape == "u":
            parts.append(chr(int(body[i + 2 : i + 6], 16)))
            i += 6
        else:
            raise QuerySyntaxError(pos, f"unknown string escape '\\{escape}'")
    return "".join(parts)


# --- parser ------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0
        self.prefixes: dict[str, str] = {}

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message: str) -> None:
        raise QuerySyntaxError(self.peek().pos, message)

    def at_keyword(self, *keywords: str) -> bool:
        token = self.peek()
        return token.kind == "word" and token.text.upper() in keywords

    def expect_keyword(self, keyword: str) -> None:
        if not self.at_keyword(keyword):
            self.error(f"expected {keyword}")
        self.advance()

    def at_punct(self, char: str) -> bool:
        token = self.peek()
        return token.kind == "punct" and token.text == char

    def eat_punct(self, char: str) -> bool:
        if self.at_punct(char):
            self.advance()
            return True
        return False

    def expect_punct(self, char: str) -> None:
        if not self.eat_punct(char):
            self.error(f"expected '{char}'")

    def resolve_pname(self, token: _Token) -> Iri:
        prefix, _, local = token.text.partition(":")
        namespace = self.prefixes.get(prefix)
        if namespace is None:
            raise QuerySyntaxError(token.pos, f"unknown prefix '{prefix}:'")
        return Iri(namespace + local)

    def parse_iri_token(self, token: _Token) -> Iri:
        try:
            return Iri(token.text[1:-1])
        except ValueError as exc:
            raise QuerySyntaxError(token.pos, str(exc)) from exc

    def parse_literal(self, token: _Token) -> Literal:
        lexical = _unescape(token.text[1:-1], token.pos)
        datatype = XSD_STRING
        if self.peek().kind == "dtsep":
            self.advance()
            dt_token = self.advance()
            if dt_token.kind == "iri":
                datatype = self.parse_iri_token(dt_token)
            elif dt_token.kind == "pname":
                datatype = self.resolve_pname(dt_token)
            else:
                raise QuerySyntaxError(dt_token.pos, "expected datatype IRI after '^^'")
        try:
            return Literal(lexical, datatype)
        except ValueError as exc:
            raise QuerySyntaxError(token.pos, str(exc)) from exc

    def parse_number(self, token: _Token) -> Literal:
        text = token.text
        if "e" in text.lower():
            datatype = XSD_DOUBLE
        elif "." in text:
            datatype = XSD_DECIMAL
        else:
            datatype = XSD_INTEGER
        return Literal(text, datatype)

    def parse_term(self, position: str) -> QueryTerm:
        token = self.peek()
        if token.kind == "var":
            self.advance()
            return Var(token.text[1:])
        if token.kind == "iri":
            self.advance()
            return self.parse_iri_token(token)
        if token.kind == "pname":
            self.advance()
            return self.resolve_pname(token)
        if token.kind == "word" and token.text == "a" and position == "predicate":
            self.advance()
            return RDF_TYPE
        if position == "object":
            if token.kind == "string":
                self.advance()
                return self.parse_literal(token)
            if token.kind == "number":
                self.advance()
                return self.parse_number(token)
            if token.kind == "word" and token.text.upper() in ("TRUE", "FALSE"):
                self.advance()
                return Literal(token.text.lower(), XSD_BOOLEAN)
        self.error(f"expected a {position} term")
        raise AssertionError

    def parse_constant(self) -> Term:
        token = self.peek()
        if token.kind == "string":
            self.advance()
            return self.parse_literal(token)
        if token.kind == "number":
            self.advance()
            return self.parse_number(token)
        if token.kind == "word" and token.text.upper() in ("TRUE", "FALSE"):
            self.advance()
            return Literal(token.text.lower(), XSD_BOOLEAN)
        if token.kind == "iri":
            self.advance()
            return self.parse_iri_token(token)
        if token.kind == "pname":
            self.advance()
            return self.resolve_pname(token)
        self.error("expected a constant")
        raise AssertionError

    def parse_triples_same_subject(self) -> list[QueryPattern]:
        subject = self.parse_term("subject")
        patterns: list[QueryPattern] = []
        while True:
            predicate = self.parse_term("predicate")
            while True:
                obj = self.parse_term("object")
                patterns.append(QueryPattern(subject, predicate, obj))
                if not self.eat_punct(","):
                    break
            if not self.eat_punct(";"):
                break
        return patterns

    def parse_group(self, allow_filters: bool) -> tuple[list[QueryPattern], list[Filter]]:
        self.expect_punct("{")
        patterns: list[QueryPattern] = []
        filters: list[Filter] = []
        while not self.at_punct("}"):
            if self.at_keyword("FILTER"):
                if not allow_filters:
                    self.error("filters are not allowed in a nested pattern group")
                self.advance()
                filters.append(self.parse_filter())
            else:
                patterns.extend(self.parse_triples_same_subject())
            while self.eat_punct("."):
                pass
        self.expect_punct("}")
        return patterns, filters

    def parse_filter(self) -> Filter:
        if self.at_keyword("EXISTS"):
            self.advance()
            group, _ = self.parse_group(allow_filters=False)
            if not group:
                self.error("EXISTS group must contain at least one pattern")
            return GroupFilter(tuple(group), negated=False)
        if self.at_keyword("NOT"):
            self.advance()
            self.expect_keyword("EXISTS")
            group, _ = self.parse_group(allow_filters=False)
            if not group:
                self.error("NOT EXISTS group must contain at least one pattern")
            return GroupFilter(tuple(group), negated=True)
        self.expect_punct("(")
        var_token = self.peek()
        if var_token.kind != "var":
            self.error("expected a variable in FILTER comparison")
        self.advance()
        op_token = self.peek()
        if op_token.kind != "op":
            self.error("expected a comparison operator")
        self.advance()
        constant = self.parse_constant()
        self.expect_punct(")")
        return CompareFilter(var_token.text[1:], op_token.text, constant)

    def parse_query(self) -> SelectQuery:
        while self.at_keyword("PREFIX"):
            self.advance()
            name_token = self.peek()
            if name_token.kind != "pname" or not name_token.text.endswith(":"):
                self.error("expected a prefix name ending in ':'")
            self.advance()
            iri_token = self.peek()
            if iri_token.kind != "iri":
                self.error("expected the prefix IRI")
            self.advance()
            self.prefixes[name_token.text[:-1]] = self.parse_iri_token(iri_token).value

        self.expect_keyword("SELECT")
        variables: list[str] = []
        while self.peek().kind == "var":
            variables.append(self.advance().text[1:])
        if not variables:
            self.error("SELECT requires at least one variable")

        self.expect_keyword("WHERE")
        patterns, filters = self.parse_group(allow_filters=True)
        if not patterns:
            self.error("WHERE block must contain at least one triple pattern")

        order: tuple[str, bool] | None = None
        if self.at_keyword("ORDER"):
            self.advance()
            self.expect_keyword("BY")
            descending = False
            if self.at_keyword("ASC", "DESC"):
                descending = self.advance().text.upper() == "DESC"
                self.expect_punct("(")
                token = self.peek()
                if token.kind != "var":
                    self.error("expected a variable in ORDER BY")
                self.advance()
                self.expect_punct(")")
                order = (token.text[1:], descending)
            else:
                token = self.peek()
                if token.kind != "var":
                    self.error("expected a variable in ORDER BY")
                self.advance()
                order = (token.text[1:], False)

        limit: int | None = None
        if self.at_keyword("LIMIT"):
            self.advance()
            token = self.peek()
            if token.kind != "number" or not token.text.isdigit() or int(token.text) < 1:
                self.error("LIMIT requires a positive integer")
            self.advance()
            limit = int(token.text)

        if self.peek().kind != "eof":
            self.error(f"unexpected token {self.peek().text!r}")

        bound = set().union(*(p.variables() for p in patterns))
        for name in variables:
            if name not in bound:
                raise QuerySyntaxError(
                    0, f"projected variable ?{name} does not appear in the graph pattern"
                )
        if order is not None and order[0] not in bound:
            raise QuerySyntaxError(
                0, f"ordering variable ?{order[0]} does not appear in the graph pattern"
            )

        return SelectQuery(
            prefixes=dict(self.prefixes),
            variables=tuple(variables),
            patterns=tuple(patterns),
            filters=tuple(filters),
            order=order,
            limit=limit,
        )


def parse_query(text: str) -> SelectQuery:
    """Parse SELECT query text; raises QuerySyntaxError with an offset."""
    return _Parser(text).parse_query()


# --- evaluation --------------------------------------------------------


def _resolve(term: QueryTerm, binding: Mapping[str, Term]) -> QueryTerm:
    if isinstance(term, Var):
        return binding.get(term.name, term)
    return term


def _extend(
    pattern: QueryPattern, triple, binding: Mapping[str, Term]
) -> dict[str, Term] | None:
    extended = dict(binding)
    for term, value in (
        (pattern.subject, triple.subject),
        (pattern.predicate, triple.predicate),
        (pattern.object, triple.object),
    ):
        if isinstance(term, Var):
            bound = extended.get(term.name)
            if bound is None:
                extended[term.name] = value
            elif bound != value:
                return None
        elif term != value:
            return None
    return extended


def _solve(
    patterns: Sequence[QueryPattern],
    seeds: Sequence[Mapping[str, Term]],
    store: TripleStore,
) -> list[dict[str, Term]]:
    solutions: list[dict[str, Term]] = [dict(seed) for seed in seeds]
    for pattern in patterns:
        extended: list[dict[str, Term]] = []
        for binding in solutions:
            subject = _resolve(pattern.subject, binding)
            predicate = _resolve(pattern.predicate, binding)
            obj = _resolve(pattern.object, binding)
            # a variable bound to a literal can never occupy an IRI position
            if isinstance(subject, Literal) or isinstance(predicate, Literal):
                continue
            lookup = TriplePattern(
                subject if isinstance(subject, Iri) else None,
                predicate if isinstance(predicate, Iri) else None,
                obj if not isinstance(obj, Var) else None,
            )
            for triple in store.match(lookup):
                result = _extend(pattern, triple, binding)
                if result is not None:
                    extended.append(result)
        solutions = extended
    return solutions


def _numeric(term: Term) -> float | None:
    if isinstance(term, Literal) and term.datatype.value in _NUMERIC_DATATYPES:
        try:
            return float(term.lexical)
        except ValueError:
            return None
    return None


_COMPARATORS = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


def _passes(filter_: Filter, row: Mapping[str, Term], store: TripleStore) -> bool:
    if isinstance(filter_, GroupFilter):
        found = _solve(filter_.patterns, [row], store)
        return bool(found) != filter_.negated
    value = row.get(filter_.var)
    if value is None:
        return False
    left_num, right_num = _numeric(value), _numeric(filter_.value)
    if left_num is not None and right_num is not None:
        return _COMPARATORS[filter_.op](left_num, right_num)
    return _COMPARATORS[filter_.op](term_text(value), term_text(filter_.value))


def _row_text(row: Mapping[str, Term]) -> str:
    return " ".join(f"?{name}={term_text(row[name])}" for name in sorted(row))


def _order_rows(
    rows: list[dict[str, Term]], order: tuple[str, bool]
) -> list[dict[str, Term]]:
    name, descending = order

    def key(row: Mapping[str, Term]):
        value = row.get(name)
        if value is None:
            return (2, "", _row_text(row))
        number = _numeric(value)
        if number is not None:
            return (0, number, _row_text(row))
        return (1, term_text(value), _row_text(row))

    ordered = sorted(rows, key=key)
    return list(reversed(ordered)) if descending else ordered


def evaluate(query: SelectQuery, store: TripleStore) -> ResultTable:
    """Solve the query's graph pattern against the store.

    Duplicate solutions are preserved; ties under ORDER BY are broken by
    the row's canonical serialization so output is deterministic.
    """
    rows = _solve(query.patterns, [{}], store)
    for filter_ in query.filters:
        rows = [row for row in rows if _passes(filter_, row, store)]
    if query.order is not None:
        rows = _order_rows(rows, query.order)
    if query.limit is not None:
        rows = rows[: query.limit]
    projected = tuple(
        {name: row[name] for name in query.variables if name in row} for row in rows
    )
    return ResultTable(vars=query.variables, rows=projected)


def to_sparql_json(table: ResultTable) -> str:
    """W3C SPARQL-results JSON; row order is preserved."""
    bindings = []
    for row in table.rows:
        entry = {}
        for name in table.vars:
            value = row.get(name)
            if value is None:
                continue
            if isinstance(value, Iri):
                entry[name] = {"type": "uri", "value": value.value}
            else:
                entry[name] = {
                    "type": "literal",
                    "value": value.lexical,
                    "datatype": value.datatype.value,
                }
        bindings.append(entry)
    document = {"head": {"vars": list(table.vars)}, "results": {"bindings": bindings}}
    return json.dumps(document, indent=2)
