"""Recursive-descent parser for the query language.

Grammar (keywords case-insensitive, final '.' before '}' optional)::

    query       ::= select | fconstruct | pconstruct | apply
    select      ::= SELECT var+ where
    fconstruct  ::= FCONSTRUCT name (AS var)?
                    ( SELECT var where | '(' name (',' name)* ')' where? )
    pconstruct  ::= PCONSTRUCT name '(' var ',' var ',' regex ')' where
    apply       ::= scope APPLY '(' select ')'
    scope       ::= scope_atom ((UNION | INTERSECT | MINUS) scope_atom)*
    scope_atom  ::= name | '(' scope ')'

    where       ::= WHERE '{' (item '.')* item? '}'
    item        ::= pattern | FILTER filter_body
    pattern     ::= term term term
    filter_body ::= '(' or_expr ')' | regex_call
    or_expr     ::= and_expr ('||' and_expr)*
    and_expr    ::= primary ('&&' primary)*
    primary     ::= '(' or_expr ')' | regex_call | comparison
    regex_call  ::= REGEX '(' var ',' string ')'
    comparison  ::= (var | value) cmp_op value

    regex       ::= alt
    alt         ::= concat ('|' concat)*
    concat      ::= repeat+
    repeat      ::= atom ('*' | '+' | '?')*
    atom        ::= var | '(' alt ')'

Pattern predicates that are literals starting with '@' denote attribute
patterns; everything else matches the graph store. Attribute patterns whose
subject is the FCONSTRUCT alias are pulled out of the body and become folder
attributes.
"""

from __future__ import annotations

import re

from .ast import (
    Alternation,
    ApplyQuery,
    Comparison,
    Concat,
    Conjunction,
    Disjunction,
    ElementVar,
    FconstructQuery,
    FilterExpr,
    Group,
    NamedNode,
    PconstructQuery,
    QueryAst,
    RegexAst,
    RegexMatch,
    Repeat,
    ScopeExpr,
    ScopeOp,
    SelectQuery,
    Term,
    TriplePattern,
    Variable,
    filter_variables,
    regex_variables,
)
from .errors import QueryParseError
from .lexer import CMP, EOF, IDENT, KW, LOGIC, PUNCT, STRING, TYPED, VAR, Token, tokenize
from .values import Atom, TypedLiteral, is_valid_literal


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self) -> Token:
        token = self.peek()
        if token.kind != EOF:
            self.pos += 1
        return token

    def at(self, kind: str, lexeme: str | None = None) -> bool:
        token = self.peek()
        return token.kind == kind and (lexeme is None or token.lexeme == lexeme)

    def error(self, expected: str, token: Token | None = None) -> QueryParseError:
        token = token or self.peek()
        return QueryParseError(f"expected {expected}, found {token.describe()}",
                               token.line, token.col)

    def expect(self, kind: str, lexeme: str | None = None, expected: str | None = None) -> Token:
        if not self.at(kind, lexeme):
            raise self.error(expected or (lexeme if lexeme else kind))
        return self.next()


def parse(text: str) -> QueryAst:
    """Parse one query; raises QueryParseError with line/col on any problem."""
    cur = _Cursor(tokenize(text))
    token = cur.peek()
    if token.kind == KW and token.lexeme == "select":
        query: QueryAst = _parse_select(cur)
    elif token.kind == KW and token.lexeme == "fconstruct":
        query = _parse_fconstruct(cur)
    elif token.kind == KW and token.lexeme == "pconstruct":
        query = _parse_pconstruct(cur)
    elif token.kind == IDENT or (token.kind == PUNCT and token.lexeme == "("):
        query = _parse_apply(cur)
    else:
        raise cur.error("a query (select, fconstruct, pconstruct, or apply)")
    cur.expect(EOF, expected="end of query")
    return query


def _parse_select(cur: _Cursor) -> SelectQuery:
    cur.expect(KW, "select")
    projection = [_parse_variable(cur)]
    while cur.at(VAR):
        projection.append(_parse_variable(cur))
    patterns, filters = _parse_where(cur)
    query = SelectQuery(tuple(projection), tuple(patterns), tuple(filters))
    _check_select(cur, query)
    return query


def _check_select(cur: _Cursor, query: SelectQuery) -> None:
    bound = {v for p in query.patterns for v in p.variables()}
    for var in query.projection:
        if var not in bound:
            raise QueryParseError(f"projection variable {var} is not bound in any pattern")
    for expr in query.filters:
        for var in filter_variables(expr):
            if var not in bound:
                raise QueryParseError(f"filter variable {var} is not bound in any pattern")


def _parse_fconstruct(cur: _Cursor) -> FconstructQuery:
    cur.expect(KW, "fconstruct")
    name = cur.expect(IDENT, expected="folder name").lexeme
    alias = None
    if cur.at(KW, "as"):
        cur.next()
        alias = _parse_variable(cur)
    if cur.at(KW, "select"):
        cur.next()
        member_var = _parse_variable(cur)
        if cur.at(VAR):
            raise cur.error("'where' (folder construction selects exactly one member variable)")
        patterns, filters = _parse_where(cur)
        attr_patterns, body = _split_alias_patterns(patterns, alias)
        query = FconstructQuery(name, alias, member_var, (), tuple(body),
                                tuple(filters), tuple(attr_patterns))
        _check_fconstruct_body(cur, query)
        return query
    if cur.at(PUNCT, "("):
        cur.next()
        children = [cur.expect(IDENT, expected="folder name").lexeme]
        while cur.at(PUNCT, ","):
            cur.next()
            children.append(cur.expect(IDENT, expected="folder name").lexeme)
        cur.expect(PUNCT, ")")
        patterns: list[TriplePattern] = []
        filters: list[FilterExpr] = []
        if cur.at(KW, "where"):
            patterns, filters = _parse_where(cur)
        attr_patterns, body = _split_alias_patterns(patterns, alias)
        if body or filters:
            raise QueryParseError(
                "a child-folder construction takes only alias attribute patterns in its where block"
            )
        _check_alias_attrs(attr_patterns)
        return FconstructQuery(name, alias, None, tuple(children), (), (), tuple(attr_patterns))
    raise cur.error("'select' or a parenthesized child-folder list")


def _split_alias_patterns(
    patterns: list[TriplePattern], alias: Variable | None
) -> tuple[list[TriplePattern], list[TriplePattern]]:
    if alias is None:
        return [], list(patterns)
    attr_patterns: list[TriplePattern] = []
    body: list[TriplePattern] = []
    for pattern in patterns:
        if pattern.subject == alias:
            if not pattern.is_attribute():
                raise QueryParseError(
                    f"alias {alias} may only carry attribute patterns, got {pattern.render()!r}"
                )
            attr_patterns.append(pattern)
        else:
            if alias in pattern.variables():
                raise QueryParseError(
                    f"alias {alias} may only appear as the subject of attribute patterns"
                )
            body.append(pattern)
    return attr_patterns, body


def _check_alias_attrs(attr_patterns: list[TriplePattern]) -> None:
    for pattern in attr_patterns:
        if isinstance(pattern.object, Variable):
            raise QueryParseError(
                f"folder attribute {pattern.predicate} must have a literal value"
            )


def _check_fconstruct_body(cur: _Cursor, query: FconstructQuery) -> None:
    _check_alias_attrs(list(query.attr_patterns))
    if not query.patterns:
        raise QueryParseError("folder construction needs at least one body pattern")
    inner = SelectQuery((query.member_var,), query.patterns, query.filters)
    if query.alias is not None:
        for expr in query.filters:
            if query.alias in filter_variables(expr):
                raise QueryParseError(f"alias {query.alias} may not appear in filters")
    _check_select(cur, inner)


def _parse_pconstruct(cur: _Cursor) -> PconstructQuery:
    cur.expect(KW, "pconstruct")
    name = cur.expect(IDENT, expected="path node name").lexeme
    cur.expect(PUNCT, "(")
    start_var = _parse_variable(cur)
    cur.expect(PUNCT, ",")
    end_var = _parse_variable(cur)
    cur.expect(PUNCT, ",")
    regex = _parse_regex_alternation(cur)
    cur.expect(PUNCT, ")")
    patterns, filters = _parse_where(cur)
    query = PconstructQuery(name, start_var, end_var, regex, tuple(patterns), tuple(filters))
    bound = {v for p in query.patterns for v in p.variables()}
    for var, role in ((start_var, "start"), (end_var, "end")):
        if not any(p.subject == var for p in query.patterns):
            raise QueryParseError(f"{role} variable {var} needs at least one constraining pattern")
    for expr in query.filters:
        for var in filter_variables(expr):
            if var not in bound:
                raise QueryParseError(f"filter variable {var} is not bound in any pattern")
    return query


def _parse_apply(cur: _Cursor) -> ApplyQuery:
    scope = _parse_scope(cur)
    cur.expect(KW, "apply")
    cur.expect(PUNCT, "(")
    inner = _parse_select(cur)
    cur.expect(PUNCT, ")")
    return ApplyQuery(scope, inner)


def _parse_scope(cur: _Cursor) -> ScopeExpr:
    expr = _parse_scope_atom(cur)
    while cur.at(KW, "union") or cur.at(KW, "intersect") or cur.at(KW, "minus"):
        op = cur.next().lexeme
        right = _parse_scope_atom(cur)
        expr = ScopeOp(op, expr, right)
    return expr


def _parse_scope_atom(cur: _Cursor) -> ScopeExpr:
    if cur.at(PUNCT, "("):
        cur.next()
        expr = _parse_scope(cur)
        cur.expect(PUNCT, ")")
        return expr
    name = cur.expect(IDENT, expected="folder or path node name").lexeme
    return NamedNode(name)


# --- where blocks ---


def _parse_where(cur: _Cursor) -> tuple[list[TriplePattern], list[FilterExpr]]:
    cur.expect(KW, "where")
    cur.expect(PUNCT, "{")
    patterns: list[TriplePattern] = []
    filters: list[FilterExpr] = []
    while not cur.at(PUNCT, "}"):
        if cur.at(KW, "filter"):
            cur.next()
            filters.append(_parse_filter_body(cur))
        else:
            patterns.append(_parse_pattern(cur))
        if cur.at(PUNCT, "."):
            cur.next()
        elif not cur.at(PUNCT, "}"):
            raise cur.error("'.' or '}'")
    cur.next()
    if not patterns:
        raise QueryParseError("where block needs at least one pattern")
    return patterns, filters


def _parse_pattern(cur: _Cursor) -> TriplePattern:
    subject = _parse_term(cur, "pattern subject", allow_literal=False)
    predicate: Variable | str
    if cur.at(VAR):
        predicate = _parse_variable(cur)
    else:
        predicate = cur.expect(IDENT, expected="predicate").lexeme
    obj = _parse_term(cur, "pattern object", allow_literal=True)
    return TriplePattern(subject, predicate, obj)


def _parse_term(cur: _Cursor, what: str, allow_literal: bool) -> Term:
    token = cur.peek()
    if token.kind == VAR:
        return _parse_variable(cur)
    if token.kind == IDENT:
        cur.next()
        return Atom(token.lexeme)
    if allow_literal and token.kind == STRING:
        cur.next()
        return Atom(token.lexeme)
    if allow_literal and token.kind == TYPED:
        cur.next()
        return _typed_literal(cur, token)
    raise cur.error(what)


def _parse_variable(cur: _Cursor) -> Variable:
    return Variable(cur.expect(VAR, expected="a ?variable").lexeme)


def _typed_literal(cur: _Cursor, token: Token) -> TypedLiteral:
    literal = TypedLiteral(token.lexeme, token.datatype or "")
    if not is_valid_literal(literal):
        raise QueryParseError(f"invalid {literal.datatype} literal {literal.lexical!r}",
                              token.line, token.col)
    return literal


# --- filters ---


def _parse_filter_body(cur: _Cursor) -> FilterExpr:
    if cur.at(KW, "regex"):
        return _parse_regex_call(cur)
    cur.expect(PUNCT, "(", expected="'(' or regex(...)")
    expr = _parse_or(cur)
    cur.expect(PUNCT, ")")
    return expr


def _parse_or(cur: _Cursor) -> FilterExpr:
    parts = [_parse_and(cur)]
    while cur.at(LOGIC, "||"):
        cur.next()
        parts.append(_parse_and(cur))
    return parts[0] if len(parts) == 1 else Disjunction(tuple(parts))


def _parse_and(cur: _Cursor) -> FilterExpr:
    parts = [_parse_filter_primary(cur)]
    while cur.at(LOGIC, "&&"):
        cur.next()
        parts.append(_parse_filter_primary(cur))
    return parts[0] if len(parts) == 1 else Conjunction(tuple(parts))


def _parse_filter_primary(cur: _Cursor) -> FilterExpr:
    if cur.at(PUNCT, "("):
        cur.next()
        expr = _parse_or(cur)
        cur.expect(PUNCT, ")")
        return expr
    if cur.at(KW, "regex"):
        return _parse_regex_call(cur)
    lhs = _parse_term(cur, "comparison operand", allow_literal=True)
    op = cur.expect(CMP, expected="comparison operator").lexeme
    rhs = _parse_term(cur, "comparison value", allow_literal=True)
    if isinstance(rhs, Variable):
        raise QueryParseError("the right side of a comparison must be a literal value")
    return Comparison(lhs, op, rhs)


def _parse_regex_call(cur: _Cursor) -> RegexMatch:
    cur.expect(KW, "regex")
    cur.expect(PUNCT, "(")
    var = _parse_variable(cur)
    cur.expect(PUNCT, ",")
    token = cur.expect(STRING, expected="a pattern string")
    try:
        re.compile(token.lexeme)
    except re.error as exc:
        raise QueryParseError(f"bad regex pattern: {exc}", token.line, token.col) from None
    cur.expect(PUNCT, ")")
    return RegexMatch(var, token.lexeme)


# --- path regexes ---


def parse_path_regex(tokens: list[Token]) -> RegexAst:
    """Parse a token list as a path regex; the whole list must be consumed."""
    if tokens and tokens[-1].kind != EOF:
        last = tokens[-1]
        tokens = tokens + [Token(EOF, "", last.line, last.col)]
    cur = _Cursor(tokens)
    ast = _parse_regex_alternation(cur)
    cur.expect(EOF, expected="end of regex")
    return ast


def _parse_regex_alternation(cur: _Cursor) -> RegexAst:
    parts = [_parse_regex_concat(cur)]
    while cur.at(PUNCT, "|"):
        cur.next()
        parts.append(_parse_regex_concat(cur))
    return parts[0] if len(parts) == 1 else Alternation(tuple(parts))


def _parse_regex_concat(cur: _Cursor) -> RegexAst:
    parts = [_parse_regex_repeat(cur)]
    while cur.at(VAR) or cur.at(PUNCT, "("):
        parts.append(_parse_regex_repeat(cur))
    return parts[0] if len(parts) == 1 else Concat(tuple(parts))


def _parse_regex_repeat(cur: _Cursor) -> RegexAst:
    ast = _parse_regex_atom(cur)
    while cur.at(PUNCT, "*") or cur.at(PUNCT, "+") or cur.at(PUNCT, "?"):
        ast = Repeat(ast, cur.next().lexeme)
    return ast


def _parse_regex_atom(cur: _Cursor) -> RegexAst:
    if cur.at(VAR):
        return ElementVar(_parse_variable(cur))
    if cur.at(PUNCT, "("):
        cur.next()
        if cur.at(PUNCT, ")"):
            raise cur.error("a regex element (empty group)")
        inner = _parse_regex_alternation(cur)
        cur.expect(PUNCT, ")")
        return Group(inner)
    raise cur.error("an element ?variable or '('")
