"""Typed query AST: SELECT, FCONSTRUCT, PCONSTRUCT, APPLY, filters, path regexes.

Every node is an immutable dataclass. ``render`` pretty-prints a query in the
canonical surface form; for any parsed query, re-parsing the rendered text
yields a structurally identical AST.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass, field

from .values import Atom, TypedLiteral, Value, escape_text

_BARE_IDENT = _re.compile(r"[A-Za-z_@][A-Za-z0-9_:\-]*\Z")


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return "?" + self.name


Term = Variable | Value


def render_term(term: Term) -> str:
    if isinstance(term, Variable):
        return str(term)
    if isinstance(term, TypedLiteral):
        return f'"{escape_text(term.lexical)}"^^{term.datatype}'
    if _BARE_IDENT.match(term.text):
        return term.text
    return f'"{escape_text(term.text)}"'


@dataclass(frozen=True)
class TriplePattern:
    """One pattern of a basic graph pattern; each position may be a variable."""

    subject: Term
    predicate: Variable | str
    object: Term

    def is_attribute(self) -> bool:
        """Attribute patterns have a literal @-prefixed predicate; everything
        else (including variable predicates) matches the graph store."""
        return isinstance(self.predicate, str) and self.predicate.startswith("@")

    def variables(self) -> tuple[Variable, ...]:
        seen: list[Variable] = []
        for term in (self.subject, self.predicate, self.object):
            if isinstance(term, Variable) and term not in seen:
                seen.append(term)
        return tuple(seen)

    def render(self) -> str:
        pred = str(self.predicate) if isinstance(self.predicate, Variable) else self.predicate
        return f"{render_term(self.subject)} {pred} {render_term(self.object)}"


# --- filters ---


@dataclass(frozen=True)
class Comparison:
    lhs: Term
    op: str  # one of > < >= <= = !=
    rhs: Value


@dataclass(frozen=True)
class RegexMatch:
    var: Variable
    pattern: str


@dataclass(frozen=True)
class Conjunction:
    parts: tuple["FilterExpr", ...]


@dataclass(frozen=True)
class Disjunction:
    parts: tuple["FilterExpr", ...]


FilterExpr = Comparison | RegexMatch | Conjunction | Disjunction


def filter_variables(expr: FilterExpr) -> frozenset[Variable]:
    if isinstance(expr, Comparison):
        return frozenset(t for t in (expr.lhs,) if isinstance(t, Variable))
    if isinstance(expr, RegexMatch):
        return frozenset((expr.var,))
    return frozenset(v for part in expr.parts for v in filter_variables(part))


def render_filter(expr: FilterExpr, top: bool = True) -> str:
    if isinstance(expr, Comparison):
        text = f"{render_term(expr.lhs)} {expr.op} {render_term(expr.rhs)}"
        return f"({text})" if top else text
    if isinstance(expr, RegexMatch):
        return f'regex({expr.var}, "{escape_text(expr.pattern)}")'
    if isinstance(expr, Conjunction):
        parts = [
            f"({render_filter(p, top=False)})" if isinstance(p, Disjunction)
            else render_filter(p, top=False)
            for p in expr.parts
        ]
        text = " && ".join(parts)
    else:
        text = " || ".join(render_filter(p, top=False) for p in expr.parts)
    return f"({text})" if top else text


# --- path regexes ---


@dataclass(frozen=True)
class ElementVar:
    var: Variable


@dataclass(frozen=True)
class Concat:
    parts: tuple["RegexAst", ...]


@dataclass(frozen=True)
class Alternation:
    parts: tuple["RegexAst", ...]


@dataclass(frozen=True)
class Repeat:
    child: "RegexAst"
    kind: str  # one of * + ?


@dataclass(frozen=True)
class Group:
    child: "RegexAst"


RegexAst = ElementVar | Concat | Alternation | Repeat | Group


def regex_variables(ast: RegexAst) -> tuple[Variable, ...]:
    out: list[Variable] = []

    def walk(node: RegexAst) -> None:
        if isinstance(node, ElementVar):
            if node.var not in out:
                out.append(node.var)
        elif isinstance(node, (Concat, Alternation)):
            for part in node.parts:
                walk(part)
        else:
            walk(node.child)

    walk(ast)
    return tuple(out)


def render_regex(ast: RegexAst) -> str:
    if isinstance(ast, ElementVar):
        return str(ast.var)
    if isinstance(ast, Group):
        return f"({render_regex(ast.child)})"
    if isinstance(ast, Repeat):
        return render_regex(ast.child) + ast.kind
    if isinstance(ast, Concat):
        return " ".join(render_regex(p) for p in ast.parts)
    return " | ".join(render_regex(p) for p in ast.parts)


# --- queries ---


@dataclass(frozen=True)
class SelectQuery:
    projection: tuple[Variable, ...]
    patterns: tuple[TriplePattern, ...]
    filters: tuple[FilterExpr, ...] = ()

    def render(self, indent: str = "") -> str:
        head = indent + "select " + " ".join(str(v) for v in self.projection)
        return head + "\n" + _render_where(self.patterns, self.filters, indent)


@dataclass(frozen=True)
class FconstructQuery:
    """Folder construction: either a member-select body or a child-folder list."""

    folder_name: str
    alias: Variable | None
    member_var: Variable | None
    child_folders: tuple[str, ...]
    patterns: tuple[TriplePattern, ...] = ()
    filters: tuple[FilterExpr, ...] = ()
    attr_patterns: tuple[TriplePattern, ...] = ()

    def render(self, indent: str = "") -> str:
        lines = [indent + f"fconstruct {self.folder_name}"
                 + (f" as {self.alias}" if self.alias else "")]
        if self.member_var is not None:
            lines.append(indent + f"select {self.member_var}")
        else:
            lines.append(indent + "(" + ", ".join(self.child_folders) + ")")
        body = self.attr_patterns + self.patterns
        if body or self.filters:
            lines.append(_render_where(body, self.filters, indent))
        return "\n".join(lines)


@dataclass(frozen=True)
class PconstructQuery:
    path_name: str
    start_var: Variable
    end_var: Variable
    regex: RegexAst
    patterns: tuple[TriplePattern, ...] = ()
    filters: tuple[FilterExpr, ...] = ()

    def render(self, indent: str = "") -> str:
        head = (indent + f"pconstruct {self.path_name}\n" + indent
                + f"({self.start_var}, {self.end_var}, {render_regex(self.regex)})")
        return head + "\n" + _render_where(self.patterns, self.filters, indent)


@dataclass(frozen=True)
class NamedNode:
    name: str


@dataclass(frozen=True)
class ScopeOp:
    op: str  # one of union intersect minus
    left: "ScopeExpr"
    right: "ScopeExpr"


ScopeExpr = NamedNode | ScopeOp


def render_scope(expr: ScopeExpr) -> str:
    if isinstance(expr, NamedNode):
        return expr.name
    left = render_scope(expr.left)
    right = render_scope(expr.right)
    if isinstance(expr.right, ScopeOp):
        right = f"({right})"
    return f"{left} {expr.op} {right}"


def scope_names(expr: ScopeExpr) -> frozenset[str]:
    if isinstance(expr, NamedNode):
        return frozenset((expr.name,))
    return scope_names(expr.left) | scope_names(expr.right)


@dataclass(frozen=True)
class ApplyQuery:
    scope: ScopeExpr
    inner: SelectQuery

    def render(self, indent: str = "") -> str:
        return (indent + f"({render_scope(self.scope)}) apply (\n"
                + self.inner.render(indent + "  ") + "\n" + indent + ")")


QueryAst = SelectQuery | FconstructQuery | PconstructQuery | ApplyQuery


def _render_where(patterns: tuple[TriplePattern, ...], filters: tuple[FilterExpr, ...],
                  indent: str) -> str:
    lines = [indent + "where {"]
    for pattern in patterns:
        lines.append(indent + "  " + pattern.render() + ".")
    for expr in filters:
        lines.append(indent + "  filter " + render_filter(expr) + ".")
    lines.append(indent + "}")
    return "\n".join(lines)


def render(query: QueryAst) -> str:
    """Canonical text form of a query."""
    return query.render()
