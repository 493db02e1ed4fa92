"""Value model shared by the stores, the query language, and result rendering.

Two kinds of values exist: atoms and typed literals. An atom is a bare
identifier or a quoted string; queries and data files use the two spellings
interchangeably ('CAiSE' in a query matches the node id CAiSE), so they are
one type with text equality. A typed literal pairs a lexical form with a
datatype and only ever equals another literal with the same pair.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date

NodeId = str

XSD_DATE = "xsd:date"

_DATE_SHAPE = re.compile(r"\d{4}-\d{2}-\d{2}\Z")
# Characters that force an atom into the quoted rendering.
_NEEDS_QUOTING = re.compile(r"[\s\"'^\\]")

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", '"': '"', "'": "'", "t": "\t", "n": "\n", "r": "\r"}


@dataclass(frozen=True, slots=True)
class Atom:
    """A node id or plain string; compared by exact text."""

    text: str


@dataclass(frozen=True, slots=True)
class TypedLiteral:
    """A datatyped value such as "2009-07-19"^^xsd:date."""

    lexical: str
    datatype: str


Value = Atom | TypedLiteral


def parse_date(lexical: str) -> date | None:
    """Return the calendar date for a YYYY-MM-DD lexical form, or None."""
    if not _DATE_SHAPE.match(lexical):
        return None
    try:
        return date.fromisoformat(lexical)
    except ValueError:
        return None


def is_valid_literal(value: Value) -> bool:
    """Check datatype-specific lexical constraints (currently xsd:date)."""
    if isinstance(value, TypedLiteral) and value.datatype == XSD_DATE:
        return parse_date(value.lexical) is not None
    return True


def escape_text(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


def string_form(value: Value) -> str:
    """The raw text a filter sees: atom text or literal lexical form."""
    return value.text if isinstance(value, Atom) else value.lexical


def render_value(value: Value) -> str:
    """Render a value as a bare id, a quoted string, or "lexical"^^datatype.

    An atom renders bare whenever its text survives re-tokenization
    unchanged; anything containing whitespace, quotes, carets, or escapes is
    double-quoted.
    """
    if isinstance(value, TypedLiteral):
        return f'"{escape_text(value.lexical)}"^^{value.datatype}'
    text = value.text
    if text and text != "." and text[0] not in "\"'#" and not _NEEDS_QUOTING.search(text):
        return text
    return f'"{escape_text(text)}"'


def compare_values(a: Value, b: Value) -> int | None:
    """Three-way order comparison, or None when the kinds are incomparable.

    Atoms order lexicographically; xsd:date literals order by calendar date;
    every other pairing (including non-date typed literals) is incomparable.
    """
    if isinstance(a, Atom) and isinstance(b, Atom):
        return (a.text > b.text) - (a.text < b.text)
    if (
        isinstance(a, TypedLiteral)
        and isinstance(b, TypedLiteral)
        and a.datatype == XSD_DATE
        and b.datatype == XSD_DATE
    ):
        da, db = parse_date(a.lexical), parse_date(b.lexical)
        if da is None or db is None:
            return None
        return (da > db) - (da < db)
    return None
