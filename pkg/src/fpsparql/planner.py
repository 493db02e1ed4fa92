"""Logical planning: basic graph pattern -> scan/join/filter/project tree.

Planning applies two optimizations: exact-duplicate and subsumed patterns are
dropped, and scans are joined greedily in ascending order of estimated
cardinality (patterns fixing an (attribute, value) pair are costed by the
index, everything else by store size). Filters sink to the lowest node where
all their variables are bound. Plans are left-deep; disconnected patterns
join last as cartesian products. None of this changes results: the planned
evaluation always equals a naive nested-loop evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    FilterExpr,
    SelectQuery,
    TriplePattern,
    Variable,
    filter_variables,
    render_filter,
)
from .store import TripleStore
from .values import Value


@dataclass(frozen=True)
class ScopeContext:
    """Restriction of designated subject variables to a node set.

    ``kind`` is none, folder, path, or composite; ``label`` is only for plan
    rendering. Scans of patterns whose subject is in ``scoped_vars`` bind
    that subject only to ``members``.
    """

    kind: str = "none"
    label: str = ""
    members: frozenset[str] = frozenset()
    scoped_vars: frozenset[Variable] = frozenset()

    @classmethod
    def none(cls) -> "ScopeContext":
        return cls()


@dataclass(frozen=True)
class Scan:
    pattern: TriplePattern
    store: str  # entity | graph
    estimate: int
    restrict: frozenset[str] | None = None
    scope_label: str = ""

    def variables(self) -> tuple[Variable, ...]:
        return self.pattern.variables()


@dataclass(frozen=True)
class Join:
    left: "OperatorTree"
    right: "OperatorTree"
    on: tuple[Variable, ...]


@dataclass(frozen=True)
class Filter:
    child: "OperatorTree"
    expr: FilterExpr


@dataclass(frozen=True)
class Project:
    child: "OperatorTree"
    variables: tuple[Variable, ...]


OperatorTree = Scan | Join | Filter | Project


def estimate_cardinality(pattern: TriplePattern, store: TripleStore) -> int:
    """Exact index count for a literal (attribute, value) pair, store size otherwise."""
    if pattern.is_attribute() and isinstance(pattern.object, Value):
        return store.attribute_pair_count(pattern.predicate, pattern.object)
    return store.entity_size() if pattern.is_attribute() else store.graph_size()


def eliminate_redundancies(
    patterns: tuple[TriplePattern, ...],
    protected: frozenset[Variable] = frozenset(),
) -> tuple[TriplePattern, ...]:
    """Drop exact duplicates and patterns subsumed by another pattern.

    A pattern is subsumed when some retained pattern of the same kind matches
    it position-by-position, treating variables that occur nowhere else (and
    are not projected or filtered on) as wildcards. Dropping such a pattern
    never changes the result set.
    """
    deduped: list[TriplePattern] = []
    for pattern in patterns:
        if pattern not in deduped:
            deduped.append(pattern)

    counts: dict[Variable, int] = {}
    for pattern in deduped:
        for term in (pattern.subject, pattern.predicate, pattern.object):
            if isinstance(term, Variable):
                counts[term] = counts.get(term, 0) + 1

    def disposable(term: object) -> bool:
        return (
            isinstance(term, Variable)
            and counts.get(term, 0) == 1
            and term not in protected
        )

    def subsumes(keeper: TriplePattern, candidate: TriplePattern) -> bool:
        if keeper.is_attribute() != candidate.is_attribute():
            return False
        pairs = (
            (keeper.subject, candidate.subject),
            (keeper.predicate, candidate.predicate),
            (keeper.object, candidate.object),
        )
        return all(k == c or disposable(c) for k, c in pairs)

    dropped: set[int] = set()
    for i, candidate in enumerate(deduped):
        for j, keeper in enumerate(deduped):
            if i == j or j in dropped:
                continue
            if subsumes(keeper, candidate) and candidate != keeper:
                dropped.add(i)
                break
    return tuple(p for i, p in enumerate(deduped) if i not in dropped)


def plan(query: SelectQuery, store: TripleStore,
         scope: ScopeContext = ScopeContext.none()) -> OperatorTree:
    """Build a left-deep operator tree for a select query."""
    protected = frozenset(query.projection) | frozenset(
        v for f in query.filters for v in filter_variables(f)
    )
    patterns = eliminate_redundancies(query.patterns, protected)

    scans = [_make_scan(p, store, scope) for p in patterns]
    ordered = _greedy_order(scans)

    filters_left = list(query.filters)
    node: OperatorTree = ordered[0]
    bound = set(ordered[0].variables())
    node, filters_left = _sink_filters(node, bound, filters_left)
    for scan in ordered[1:]:
        shared = tuple(v for v in _tree_variables(node) if v in scan.variables())
        node = Join(node, scan, shared)
        bound |= set(scan.variables())
        node, filters_left = _sink_filters(node, bound, filters_left)
    for expr in filters_left:  # unbound-variable filters cannot occur in checked queries
        node = Filter(node, expr)
    return Project(node, query.projection)


def _make_scan(pattern: TriplePattern, store: TripleStore, scope: ScopeContext) -> Scan:
    restrict = None
    label = ""
    if isinstance(pattern.subject, Variable) and pattern.subject in scope.scoped_vars:
        restrict = scope.members
        label = scope.label
    return Scan(
        pattern=pattern,
        store="entity" if pattern.is_attribute() else "graph",
        estimate=estimate_cardinality(pattern, store),
        restrict=restrict,
        scope_label=label,
    )


def _greedy_order(scans: list[Scan]) -> list[Scan]:
    remaining = list(scans)
    remaining.sort(key=lambda s: s.estimate)
    ordered = [remaining.pop(0)]
    bound = set(ordered[0].variables())
    while remaining:
        connected = [s for s in remaining if bound & set(s.variables())]
        pick = connected[0] if connected else remaining[0]
        remaining.remove(pick)
        ordered.append(pick)
        bound |= set(pick.variables())
    return ordered


def _tree_variables(node: OperatorTree) -> tuple[Variable, ...]:
    if isinstance(node, Scan):
        return node.variables()
    if isinstance(node, Join):
        left = _tree_variables(node.left)
        return left + tuple(v for v in _tree_variables(node.right) if v not in left)
    if isinstance(node, Filter):
        return _tree_variables(node.child)
    return node.variables


def _sink_filters(node: OperatorTree, bound: set[Variable],
                  filters: list[FilterExpr]) -> tuple[OperatorTree, list[FilterExpr]]:
    rest: list[FilterExpr] = []
    for expr in filters:
        if filter_variables(expr) <= bound:
            node = Filter(node, expr)
        else:
            rest.append(expr)
    return node, rest


def explain(node: OperatorTree, indent: int = 0) -> str:
    """Render a plan one operator per line, children indented two spaces."""
    pad = "  " * indent
    if isinstance(node, Project):
        head = pad + "Project " + " ".join(str(v) for v in node.variables)
        return head + "\n" + explain(node.child, indent + 1)
    if isinstance(node, Filter):
        head = pad + "Filter " + render_filter(node.expr)
        return head + "\n" + explain(node.child, indent + 1)
    if isinstance(node, Join):
        on = " ".join(str(v) for v in node.on) if node.on else "(cartesian)"
        head = pad + "Join on " + on
        return head + "\n" + explain(node.left, indent + 1) + "\n" + explain(node.right, indent + 1)
    scope = f" [scope {node.scope_label}]" if node.restrict is not None else ""
    return f"{pad}Scan {node.store} ({node.pattern.render()}) [est={node.estimate}]{scope}"
