"""Minimal RDF value model: IRIs, typed literals, triples.

Graphs are plain sets of triples. Serialization is canonical N-Triples
(sorted, byte-stable, round-trippable) plus Turtle for human-facing
output. Blank nodes and language tags are deliberately unsupported:
every resource gets a minted IRI, so graph equality is set equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, Union

XSD = "http://www.w3.org/2001/XMLSchema#"

_IRI_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_IRI_FORBIDDEN = re.compile(r'[<>"\s]')


@dataclass(frozen=True)
class Iri:
    """An absolute IRI."""

    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("IRI must be nonempty")
        bad = _IRI_FORBIDDEN.search(self.value)
        if bad:
            raise ValueError(f"IRI contains forbidden character {bad.group()!r}: {self.value!r}")
        if not _IRI_SCHEME.match(self.value):
            raise ValueError(f"IRI must be absolute (missing scheme): {self.value!r}")

    def __str__(self) -> str:
        return self.value


def make_iri(text: str) -> Iri:
    """Validate ``text`` as an absolute IRI."""
    return Iri(text)


XSD_STRING = Iri(XSD + "string")
XSD_INTEGER = Iri(XSD + "integer")
XSD_DECIMAL = Iri(XSD + "decimal")
XSD_DOUBLE = Iri(XSD + "double")
XSD_BOOLEAN = Iri(XSD + "boolean")
XSD_DATETIME = Iri(XSD + "dateTime")

_INTEGER_LEXICAL = re.compile(r"^[+-]?[0-9]+$")
_DECIMAL_LEXICAL = re.compile(r"^[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)$")
_DOUBLE_LEXICAL = re.compile(
    r"^(?:[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?|[+-]?INF|NaN)$"
)
_DATETIME_LEXICAL = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(?:\.\d+)?Z$")


def _valid_datetime(lexical: str) -> bool:
    if not _DATETIME_LEXICAL.match(lexical):
        return False
    try:
        datetime.fromisoformat(lexical.replace("Z", "+00:00"))
    except ValueError:
        return False
    return True


_LEXICAL_CHECKS = {
    XSD_STRING.value: lambda lexical: True,
    XSD_INTEGER.value: lambda lexical: bool(_INTEGER_LEXICAL.match(lexical)),
    XSD_DECIMAL.value: lambda lexical: bool(_DECIMAL_LEXICAL.match(lexical)),
    XSD_DOUBLE.value: lambda lexical: bool(_DOUBLE_LEXICAL.match(lexical)),
    XSD_BOOLEAN.value: lambda lexical: lexical in ("true", "false"),
    XSD_DATETIME.value: _valid_datetime,
}


@dataclass(frozen=True)
class Literal:
    """A typed literal; the lexical form must be valid for its datatype."""

    lexical: str
    datatype: Iri = XSD_STRING

    def __post_init__(self) -> None:
        check = _LEXICAL_CHECKS.get(self.datatype.value)
        if check is None:
            raise ValueError(f"unsupported literal datatype: {self.datatype.value}")
        if not check(self.lexical):
            raise ValueError(
                f"invalid lexical form {self.lexical!r} for datatype {self.datatype.value}"
            )


Term = Union[Iri, Literal]


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term


Graph = set[Triple]


def string_literal(text: str) -> Literal:
    return Literal(text, XSD_STRING)


def integer_literal(value: int) -> Literal:
    return Literal(str(int(value)), XSD_INTEGER)


def decimal_literal(value: float) -> Literal:
    """xsd:decimal with exactly three fractional digits, rounded half-up."""
    quantized = Decimal(repr(float(value))).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP)
    return Literal(str(quantized), XSD_DECIMAL)


def boolean_literal(value: bool) -> Literal:
    return Literal("true" if value else "false", XSD_BOOLEAN)


def datetime_literal(value: datetime) -> Literal:
    if value.tzinfo is None:
        raise ValueError("datetime literal requires a timezone-aware value")
    lexical = value.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")
    return Literal(lexical, XSD_DATETIME)


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


def escape_string(text: str) -> str:
    return "".join(_ESCAPES.get(char, char) for char in text)


def term_text(term: Term) -> str:
    """Canonical N-Triples spelling of a term."""
    if isinstance(term, Iri):
        return f"<{term.value}>"
    return f'"{escape_string(term.lexical)}"^^<{term.datatype.value}>'


def triple_text(triple: Triple) -> str:
    return (
        f"<{triple.subject.value}> <{triple.predicate.value}> "
        f"{term_text(triple.object)} ."
    )


def triple_sort_key(triple: Triple) -> tuple[str, str, str]:
    """Canonical ordering: subject IRI, predicate IRI, serialized object."""
    return (triple.subject.value, triple.predicate.value, term_text(triple.object))


def serialize_ntriples(graph: Iterable[Triple]) -> str:
    """One sorted line per triple; equal graphs give byte-identical text."""
    return "".join(line + "\n" for line in sorted(triple_text(t) for t in graph))


class NTriplesParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class _LineScanner:
    def __init__(self, line: str, line_no: int):
        self.line = line
        self.line_no = line_no
        self.pos = 0

    def error(self, message: str) -> None:
        raise NTriplesParseError(self.line_no, message)

    def at_end(self) -> bool:
        return self.pos >= len(self.line)

    def peek(self) -> str:
        return "" if self.at_end() else self.line[self.pos]

    def skip_ws(self, required: bool = False) -> None:
        start = self.pos
        while not self.at_end() and self.line[self.pos] in " \t":
            self.pos += 1
        if required and self.pos == start:
            self.error("expected whitespace between terms")

    def read_iri(self) -> Iri:
        if self.peek() != "<":
            self.error("expected '<'")
        end = self.line.find(">", self.pos + 1)
        if end < 0:
            self.error("unterminated IRI")
        text = self.line[self.pos + 1 : end]
        self.pos = end + 1
        try:
            return Iri(text)
        except ValueError as exc:
            self.error(str(exc))
            raise AssertionError  # unreachable

    def _read_hex(self, width: int) -> str:
        digits = self.line[self.pos : self.pos + width]
        if len(digits) < width or any(d not in "0123456789abcdefABCDEF" for d in digits):
            self.error(f"expected {width} hex digits in escape")
        self.pos += width
        return chr(int(digits, 16))

    def read_literal(self) -> Literal:
        self.pos += 1  # opening quote
        parts: list[str] = []
        while True:
            if self.at_end():
                self.error("unterminated string literal")
            char = self.line[self.pos]
            if char == '"':
                self.pos += 1
                break
            if char == "\\":
                self.pos += 1
                if self.at_end():
                    self.error("truncated escape sequence")
                escape = self.line[self.pos]
                self.pos += 1
                if escape in _UNESCAPES:
                    parts.append(_UNESCAPES[escape])
                elif escape == "u":
                    parts.append(self._read_hex(4))
                elif escape == "U":
                    parts.append(self._read_hex(8))
                else:
                    self.error(f"unknown escape '\\{escape}'")
            else:
                parts.append(char)
                self.pos += 1
        if self.line.startswith("^^", self.pos):
            self.pos += 2
            datatype = self.read_iri()
        elif self.peek() == "@":
            self.error("language-tagged literals are not supported")
            raise AssertionError
        else:
            datatype = XSD_STRING
        try:
            return Literal("".join(parts), datatype)
        except ValueError as exc:
            self.error(str(exc))
            raise AssertionError

    def read_term(self, allow_literal: bool) -> Term:
        char = self.peek()
        if char == "<":
            return self.read_iri()
        if char == '"':
            if not allow_literal:
                self.error("literal not allowed in this position")
            return self.read_literal()
        if char == "_":
            self.error("blank nodes are not supported")
        self.error(f"expected a term, found {char!r}")
        raise AssertionError


def _parse_line(line: str, line_no: int) -> Triple:
    scanner = _LineScanner(line, line_no)
    subject = scanner.read_term(allow_literal=False)
    scanner.skip_ws(required=True)
    predicate = scanner.read_term(allow_literal=False)
    scanner.skip_ws(required=True)
    obj = scanner.read_term(allow_literal=True)
    scanner.skip_ws()
    if scanner.peek() != ".":
        scanner.error("expected terminating '.'")
    scanner.pos += 1
    scanner.skip_ws()
    if not scanner.at_end() and scanner.peek() != "#":
        scanner.error("unexpected text after terminating '.'")
    assert isinstance(subject, Iri) and isinstance(predicate, Iri)
    return Triple(subject, predicate, obj)


def parse_ntriples(text: str) -> Graph:
    """Parse N-Triples text into a graph; duplicate lines collapse."""
    graph: Graph = set()
    # split on newlines only: other Unicode line boundaries may appear
    # raw inside literals
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip(" \t\r")
        if not line or line.startswith("#"):
            continue
        graph.add(_parse_line(line, line_no))
    return graph


_TURTLE_LOCAL = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_\-]*$")
_RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"


def _qname(value: str, namespaces: list[tuple[str, str]]) -> str | None:
    for prefix, base in namespaces:
        if value.startswith(base):
            local = value[len(base):]
            if _TURTLE_LOCAL.match(local):
                return f"{prefix}:{local}"
    return None


def _turtle_term(term: Term, namespaces: list[tuple[str, str]]) -> str:
    if isinstance(term, Iri):
        return _qname(term.value, namespaces) or f"<{term.value}>"
    if term.datatype == XSD_STRING:
        return f'"{escape_string(term.lexical)}"'
    datatype = _qname(term.datatype.value, namespaces) or f"<{term.datatype.value}>"
    return f'"{escape_string(term.lexical)}"^^{datatype}'


def serialize_turtle(graph: Iterable[Triple], prefixes: Mapping[str, Iri | str]) -> str:
    """Turtle with subjects grouped, predicates joined by ';', objects by ','.

    IRIs not under any declared prefix fall back to the full ``<...>``
    form. ``rdf:type`` is written as ``a`` and listed first.
    """
    # longest namespace wins when one prefix IRI extends another
    namespaces = sorted(
        ((prefix, str(iri)) for prefix, iri in prefixes.items()),
        key=lambda item: len(item[1]),
        reverse=True,
    )
    lines = [f"@prefix {prefix}: <{prefixes[prefix]}> ." for prefix in sorted(prefixes)]

    by_subject: dict[str, dict[str, list[Term]]] = {}
    for triple in sorted(graph, key=triple_sort_key):
        by_subject.setdefault(triple.subject.value, {}).setdefault(
            triple.predicate.value, []
        ).append(triple.object)

    for subject in sorted(by_subject):
        subject_text = _qname(subject, namespaces) or f"<{subject}>"
        predicates = by_subject[subject]
        ordered = sorted(predicates, key=lambda p: (p != _RDF_TYPE, p))
        parts = []
        for predicate in ordered:
            verb = (
                "a"
                if predicate == _RDF_TYPE
                else _qname(predicate, namespaces) or f"<{predicate}>"
            )
            objects = ", ".join(
                _turtle_term(obj, namespaces)
                for obj in sorted(predicates[predicate], key=term_text)
            )
            parts.append(f"{verb} {objects}")
        lines.append("")
        lines.append(f"{subject_text} " + " ;\n    ".join(parts) + " .")

    return "".join(line + "\n" for line in lines)
