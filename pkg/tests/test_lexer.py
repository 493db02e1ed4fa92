import pytest

from fpsparql.errors import QueryParseError
from fpsparql.lexer import tokenize


def kinds_and_lexemes(text):
    return [(t.kind, t.lexeme) for t in tokenize(text) if t.kind != "eof"]


def test_basic_select_stream():
    assert kinds_and_lexemes("select ?p where { ?p @type paper. }") == [
        ("keyword", "select"),
        ("variable", "p"),
        ("keyword", "where"),
        ("punctuation", "{"),
        ("variable", "p"),
        ("identifier", "@type"),
        ("identifier", "paper"),
        ("punctuation", "."),
        ("punctuation", "}"),
    ]


def test_empty_input_yields_only_eof():
    assert kinds_and_lexemes("") == []


def test_unterminated_string_reports_line():
    with pytest.raises(QueryParseError) as exc:
        tokenize('"unclosed')
    assert exc.value.line == 1


def test_keywords_case_insensitive():
    assert kinds_and_lexemes("SELECT Fconstruct FILTER Regex") == [
        ("keyword", "select"),
        ("keyword", "fconstruct"),
        ("keyword", "filter"),
        ("keyword", "regex"),
    ]


def test_identifiers_case_sensitive():
    assert kinds_and_lexemes("CAiSEPapers caisepapers") == [
        ("identifier", "CAiSEPapers"),
        ("identifier", "caisepapers"),
    ]


def test_typed_literal_with_and_without_space():
    for text in ['"2009-07-19"^^xsd:date', '"2009-07-19" ^^xsd:date']:
        tokens = tokenize(text)
        assert tokens[0].kind == "typed-literal"
        assert tokens[0].lexeme == "2009-07-19"
        assert tokens[0].datatype == "xsd:date"


def test_quote_styles_equivalent():
    single = tokenize("'CAiSE'")[0]
    double = tokenize('"CAiSE"')[0]
    assert (single.kind, single.lexeme) == (double.kind, double.lexeme) == ("string", "CAiSE")


def test_string_escapes():
    assert tokenize(r'"a\"b\\c\td"')[0].lexeme == 'a"b\\c\td'


def test_question_mark_variable_vs_operator():
    tokens = kinds_and_lexemes("(?e)? ?n")
    assert tokens == [
        ("punctuation", "("),
        ("variable", "e"),
        ("punctuation", ")"),
        ("punctuation", "?"),
        ("variable", "n"),
    ]


def test_pipe_vs_logical_or():
    assert kinds_and_lexemes("?a | ?b || ?c") == [
        ("variable", "a"),
        ("punctuation", "|"),
        ("variable", "b"),
        ("logical", "||"),
        ("variable", "c"),
    ]


def test_comparison_operators():
    assert [k for k, _ in kinds_and_lexemes("> < >= <= = !=")] == ["comparison"] * 6
    assert [lx for _, lx in kinds_and_lexemes("> < >= <= = !=")] == [
        ">", "<", ">=", "<=", "=", "!=",
    ]


def test_illegal_character_positions():
    with pytest.raises(QueryParseError) as exc:
        tokenize("select ?p\n  ^ oops")
    assert exc.value.line == 2
    assert exc.value.col == 3


def test_comments_skipped():
    assert kinds_and_lexemes("?p # trailing\n?q") == [
        ("variable", "p"),
        ("variable", "q"),
    ]
