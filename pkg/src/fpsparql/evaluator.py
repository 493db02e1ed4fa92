"""Operator-tree execution, filter semantics, folder construction, and APPLY.

Scans match entity rows (attribute patterns) or graph rows (relationship
patterns), joins are natural joins on shared variables, and results carry set
semantics: projection deduplicates. Filter comparisons order atoms
lexicographically and xsd:date literals by calendar date; comparing
incomparable kinds is false. APPLY restricts the subjects of designated
variables to a folder's recursive members or a path node's elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .ast import (
    ApplyQuery,
    Comparison,
    Conjunction,
    Disjunction,
    FconstructQuery,
    FilterExpr,
    NamedNode,
    RegexMatch,
    ScopeExpr,
    SelectQuery,
    TriplePattern,
    Variable,
    render_scope,
)
from .errors import EvaluationError, UnknownNameError, ValidationError
from .planner import Filter, Join, OperatorTree, Project, Scan, ScopeContext, plan
from .store import NodeId, TripleStore
from .values import Atom, Value, compare_values, render_value, string_form


@dataclass
class BindingTable:
    """A set of variable-to-value rows; columns are ``variables`` in order."""

    variables: tuple[Variable, ...]
    rows: set[tuple[Value, ...]]

    def __len__(self) -> int:
        return len(self.rows)

    def canonical(self) -> frozenset[frozenset[tuple[str, Value]]]:
        """Column-order-independent form, for comparisons in tests."""
        return frozenset(
            frozenset(zip((v.name for v in self.variables), row)) for row in self.rows
        )

    def column(self, var: Variable) -> set[Value]:
        i = self.variables.index(var)
        return {row[i] for row in self.rows}

    def rendered_rows(self) -> list[list[str]]:
        return sorted([render_value(v) for v in row] for row in self.rows)

    def to_tsv(self) -> str:
        lines = ["\t".join(v.name for v in self.variables)]
        lines.extend("\t".join(row) for row in self.rendered_rows())
        return "\n".join(lines)


# --- scans ---


def _unify(binding: dict[Variable, Value], term, value: Value) -> bool:
    if isinstance(term, Variable):
        old = binding.get(term)
        if old is None:
            binding[term] = value
            return True
        return old == value
    return term == value


def _scan_attribute(scan: Scan, store: TripleStore) -> BindingTable:
    pattern = scan.pattern
    attribute = pattern.predicate
    out_vars = pattern.variables()
    rows: set[tuple[Value, ...]] = set()
    counters = store.counters

    if isinstance(pattern.subject, Variable):
        if isinstance(pattern.object, Value):
            subjects = store.scan_by_attribute(attribute, pattern.object)
            candidates = ((s, pattern.object) for s in subjects)
        else:
            candidates = (
                (s, v)
                for s in store.subjects_with_attribute(attribute)
                for v in store.attribute_values(s, attribute)
            )
    else:
        subject = pattern.subject.text
        candidates = ((subject, v) for v in store.attribute_values(subject, attribute))

    for subject, value in candidates:
        counters.entity_rows += 1
        if scan.restrict is not None and subject not in scan.restrict:
            continue
        binding: dict[Variable, Value] = {}
        if not _unify(binding, pattern.subject, Atom(subject)):
            continue
        if not _unify(binding, pattern.object, value):
            continue
        rows.add(tuple(binding[v] for v in out_vars))
    return BindingTable(out_vars, rows)


def _relationship_candidates(scan: Scan, store: TripleStore):
    pattern = scan.pattern
    if isinstance(pattern.subject, Atom):
        return store.iter_out(pattern.subject.text)
    literal_pred = pattern.predicate if isinstance(pattern.predicate, str) else None
    if scan.restrict is not None:
        member_rows = sum(store.out_degree(m) for m in scan.restrict)
        indexed = (
            store.predicate_count(literal_pred) if literal_pred is not None
            else store.graph_size()
        )
        if member_rows <= indexed:
            return (row for m in sorted(scan.restrict) for row in store.iter_out(m))
        if literal_pred is not None:
            return store.iter_pred(literal_pred)
        return store.iter_graph()
    if literal_pred is not None:
        return store.iter_pred(literal_pred)
    return store.iter_graph()


def _scan_relationship(scan: Scan, store: TripleStore) -> BindingTable:
    pattern = scan.pattern
    out_vars = pattern.variables()
    rows: set[tuple[Value, ...]] = set()
    counters = store.counters
    for edge in _relationship_candidates(scan, store):
        counters.graph_rows += 1
        if scan.restrict is not None and edge.subject not in scan.restrict:
            continue
        binding: dict[Variable, Value] = {}
        if not _unify(binding, pattern.subject, Atom(edge.subject)):
            continue
        if isinstance(pattern.predicate, Variable):
            if not _unify(binding, pattern.predicate, Atom(edge.predicate)):
                continue
        elif pattern.predicate != edge.predicate:
            continue
        if not _unify(binding, pattern.object, Atom(edge.object)):
            continue
        rows.add(tuple(binding[v] for v in out_vars))
    return BindingTable(out_vars, rows)


def _join(left: BindingTable, right: BindingTable, on: tuple[Variable, ...]) -> BindingTable:
    out_vars = left.variables + tuple(v for v in right.variables if v not in left.variables)
    left_key = [left.variables.index(v) for v in on]
    right_key = [right.variables.index(v) for v in on]
    extra = [i for i, v in enumerate(right.variables) if v not in left.variables]

    by_key: dict[tuple[Value, ...], list[tuple[Value, ...]]] = {}
    for row in right.rows:
        by_key.setdefault(tuple(row[i] for i in right_key), []).append(row)
    rows: set[tuple[Value, ...]] = set()
    for row in left.rows:
        for other in by_key.get(tuple(row[i] for i in left_key), ()):
            rows.add(row + tuple(other[i] for i in extra))
    return BindingTable(out_vars, rows)


# --- filters ---


@lru_cache(maxsize=256)
def _compiled(pattern: str) -> "re.Pattern[str]":
    return re.compile(pattern)


def eval_filter(expr: FilterExpr, binding: dict[Variable, Value]) -> bool:
    """Evaluate one filter expression over a total binding."""
    if isinstance(expr, Comparison):
        lhs = expr.lhs
        if isinstance(lhs, Variable):
            if lhs not in binding:
                raise EvaluationError(f"unbound filter variable {lhs}")
            lhs = binding[lhs]
        if expr.op == "=":
            return lhs == expr.rhs
        if expr.op == "!=":
            return lhs != expr.rhs
        order = compare_values(lhs, expr.rhs)
        if order is None:
            return False
        return {"<": order < 0, "<=": order <= 0, ">": order > 0, ">=": order >= 0}[expr.op]
    if isinstance(expr, RegexMatch):
        if expr.var not in binding:
            raise EvaluationError(f"unbound filter variable {expr.var}")
        return _compiled(expr.pattern).search(string_form(binding[expr.var])) is not None
    if isinstance(expr, Conjunction):
        return all(eval_filter(part, binding) for part in expr.parts)
    return any(eval_filter(part, binding) for part in expr.parts)


def _filter_table(table: BindingTable, expr: FilterExpr) -> BindingTable:
    rows = {
        row for row in table.rows
        if eval_filter(expr, dict(zip(table.variables, row)))
    }
    return BindingTable(table.variables, rows)


# --- tree execution ---


def eval_tree(node: OperatorTree, store: TripleStore) -> BindingTable:
    if isinstance(node, Scan):
        if node.store == "entity":
            return _scan_attribute(node, store)
        return _scan_relationship(node, store)
    if isinstance(node, Join):
        return _join(eval_tree(node.left, store), eval_tree(node.right, store), node.on)
    if isinstance(node, Filter):
        return _filter_table(eval_tree(node.child, store), node.expr)
    child = eval_tree(node.child, store)
    indices = [child.variables.index(v) for v in node.variables]
    rows = {tuple(row[i] for i in indices) for row in child.rows}
    return BindingTable(node.variables, rows)


def eval_select(query: SelectQuery, store: TripleStore,
                scope: ScopeContext = ScopeContext.none()) -> BindingTable:
    """Plan and execute a select query, optionally under a scope restriction."""
    return eval_tree(plan(query, store, scope), store)


# --- scopes and APPLY ---


def resolve_scope(expr: ScopeExpr, store: TripleStore) -> frozenset[NodeId]:
    """Node set named by a scope expression: folder members (recursive),
    path-node elements, or their set-algebra composition."""
    if isinstance(expr, NamedNode):
        folder = store.folder_id(expr.name)
        if folder is not None:
            return store.members_of(folder, recursive=True)
        path_node = store.path_node_id(expr.name)
        if path_node is not None:
            return store.elements_of(path_node)
        raise UnknownNameError(f"unknown folder or path node: {expr.name}")
    left = resolve_scope(expr.left, store)
    right = resolve_scope(expr.right, store)
    if expr.op == "union":
        return left | right
    if expr.op == "intersect":
        return left & right
    return left - right


def scoped_variables(query: SelectQuery) -> frozenset[Variable]:
    """Variables APPLY restricts: subjects of relationship patterns, falling
    back to subjects of attribute patterns when no relationship pattern exists."""
    rel = frozenset(
        p.subject for p in query.patterns
        if not p.is_attribute() and isinstance(p.subject, Variable)
    )
    if rel:
        return rel
    return frozenset(
        p.subject for p in query.patterns
        if p.is_attribute() and isinstance(p.subject, Variable)
    )


def scope_context(expr: ScopeExpr, inner: SelectQuery, store: TripleStore) -> ScopeContext:
    members = resolve_scope(expr, store)
    if isinstance(expr, NamedNode):
        kind = "folder" if store.folder_id(expr.name) is not None else "path"
    else:
        kind = "composite"
    return ScopeContext(kind, render_scope(expr), members, scoped_variables(inner))


def eval_apply(query: ApplyQuery, store: TripleStore) -> BindingTable:
    """Execute the inner select with its scoped subjects restricted to the
    resolved folder/path node set."""
    return eval_select(query.inner, store, scope_context(query.scope, query.inner, store))


# --- folder construction ---


def eval_fconstruct(query: FconstructQuery, store: TripleStore) -> NodeId:
    """Create the folder a construction query describes; returns its node id."""
    attrs = [(p.predicate, p.object) for p in query.attr_patterns]
    if query.member_var is None:
        return store.create_folder_of_folders(query.folder_name, attrs, query.child_folders)
    inner = SelectQuery((query.member_var,), query.patterns, query.filters)
    table = eval_select(inner, store)
    members: set[NodeId] = set()
    for value in table.column(query.member_var):
        if not isinstance(value, Atom) or not store.is_node(value.text):
            raise ValidationError(
                f"member variable {query.member_var} bound to non-node value "
                f"{render_value(value)}"
            )
        members.add(value.text)
    return store.create_folder(query.folder_name, attrs, members)


def pattern_bound_variables(patterns: tuple[TriplePattern, ...]) -> frozenset[Variable]:
    return frozenset(v for p in patterns for v in p.variables())
