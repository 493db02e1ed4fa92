import pytest

from fpsparql.store import parse_object_token
from fpsparql.values import (
    Atom,
    TypedLiteral,
    compare_values,
    is_valid_literal,
    parse_date,
    render_value,
    string_form,
)


def test_atoms_compare_by_text():
    assert Atom("CAiSE") == Atom("CAiSE")
    assert Atom("a") != Atom("b")
    assert Atom("a") != TypedLiteral("a", "xsd:string")


@pytest.mark.parametrize(
    "value, rendered",
    [
        (Atom("paper1"), "paper1"),
        (Atom("brainDoc.doc"), "brainDoc.doc"),
        (Atom("set of papers"), '"set of papers"'),
        (Atom('say "hi"'), '"say \\"hi\\""'),
        (Atom("a\tb"), '"a\\tb"'),
        (Atom(""), '""'),
        (Atom("."), '"."'),
        (TypedLiteral("2009-07-19", "xsd:date"), '"2009-07-19"^^xsd:date'),
    ],
)
def test_render_value(value, rendered):
    assert render_value(value) == rendered


@pytest.mark.parametrize(
    "value",
    [
        Atom("paper1"),
        Atom("with spaces and 'quotes'"),
        Atom("tabs\tand\nnewlines"),
        Atom("back\\slash"),
        TypedLiteral("2010-01-02", "xsd:date"),
        TypedLiteral("hello world", "xsd:string"),
    ],
)
def test_render_parse_round_trip(value):
    parsed, rest = parse_object_token(render_value(value))
    assert rest == ""
    assert parsed == value


def test_parse_date_strictness():
    assert parse_date("2009-07-19") is not None
    assert parse_date("2009-7-19") is None
    assert parse_date("2009-02-30") is None
    assert parse_date("20090719") is None


def test_date_literal_validation():
    assert is_valid_literal(TypedLiteral("2009-07-19", "xsd:date"))
    assert not is_valid_literal(TypedLiteral("not a date", "xsd:date"))
    assert is_valid_literal(TypedLiteral("anything", "other:type"))


def test_calendar_order():
    earlier = TypedLiteral("2009-07-19", "xsd:date")
    later = TypedLiteral("2009-07-20", "xsd:date")
    assert compare_values(later, earlier) > 0
    assert compare_values(earlier, later) < 0
    assert compare_values(earlier, TypedLiteral("2009-07-19", "xsd:date")) == 0


def test_incompatible_kinds_are_incomparable():
    assert compare_values(Atom("abc"), TypedLiteral("2009-07-19", "xsd:date")) is None
    assert compare_values(TypedLiteral("5", "xsd:int"), TypedLiteral("7", "xsd:int")) is None


def test_atoms_order_lexicographically():
    assert compare_values(Atom("a"), Atom("b")) < 0
    assert compare_values(Atom("b"), Atom("b")) == 0


def test_string_form():
    assert string_form(Atom("x")) == "x"
    assert string_form(TypedLiteral("2009-07-19", "xsd:date")) == "2009-07-19"
