"""Path search: regex-to-automaton compilation, bounded product-BFS, reachability.

A stored path runs start, e1, n1, e2, ..., ek, end; the regex matches the
*interior word* e1 n1 e2 ... ek — the alternating edge/node sequence with both
endpoints excluded, always starting and ending with an edge. The compiler
builds a Thompson NFA over element constraints, eliminates epsilon moves, and
tags every state with the parity of the element it expects next; a regex
whose words could not alternate correctly is rejected.

Search explores (node, automaton state) pairs breadth-first. Walks may
revisit nodes; termination comes from the edge-count bound. Reachability is
pluggable: a breadth-first traversal, a precomputed transitive closure
(quadratic storage, guarded by a node-count limit), or the reserved 'gripp'
strategy name which is not implemented.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .ast import (
    Comparison,
    Conjunction,
    FilterExpr,
    PconstructQuery,
    RegexAst,
    RegexMatch,
    Alternation,
    Concat,
    ElementVar,
    Group,
    Repeat,
    Variable,
    filter_variables,
)
from .errors import (
    EvaluationError,
    ReachabilityGuardError,
    UnknownNameError,
    ValidationError,
)
from .evaluator import eval_filter
from .store import NodeId, PathWord, RelationshipRow, TripleStore
from .values import Atom, Value

ISA_ATTRIBUTE = "@isA"
NODE_KIND_NAME = "entityNode"
EDGE_KIND_NAME = "edge"
LABEL_ATTRIBUTE = "@label"

DEFAULT_CLOSURE_NODE_LIMIT = 20000


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for path search and reachability."""

    max_edges: int = 10
    reachability: str = "traversal"
    max_paths: int | None = None
    closure_node_limit: int = DEFAULT_CLOSURE_NODE_LIMIT

    def __post_init__(self) -> None:
        if self.max_edges < 1:
            raise ValidationError("max_edges must be >= 1")
        if self.max_paths is not None and self.max_paths < 1:
            raise ValidationError("max_paths must be >= 1")


@dataclass(frozen=True)
class ValueTest:
    """Existential test: some shared value of ``attributes`` passes all filters."""

    var: Variable
    attributes: tuple[str, ...]
    filters: tuple[FilterExpr, ...]


@dataclass(frozen=True)
class ElementConstraint:
    """What one regex (or endpoint) variable requires of a node or edge.

    ``kind`` comes from @isA entityNode / @isA edge directives ('any' when
    unconstrained). Requirements are literal (attribute, value) pairs; on an
    edge, (@label, X) tests the predicate string. Value tests carry filters
    over attribute values bound through object variables.
    """

    var: Variable
    kind: str = "any"
    requirements: tuple[tuple[str, Value], ...] = ()
    value_tests: tuple[ValueTest, ...] = ()

    def matches_node(self, node: NodeId, store: TripleStore) -> bool:
        for attribute, value in self.requirements:
            if not store.has_attribute(node, attribute, value):
                return False
        for test in self.value_tests:
            if not _passes_test(test, lambda a: store.attribute_values(node, a)):
                return False
        return True

    def matches_edge(self, edge: RelationshipRow, store: TripleStore) -> bool:
        def lookup(attribute: str) -> frozenset[Value]:
            if attribute == LABEL_ATTRIBUTE:
                return frozenset((Atom(edge.predicate),))
            if edge.edge_id is None:
                return frozenset()
            return store.attribute_values(edge.edge_id, attribute)

        for attribute, value in self.requirements:
            if attribute == LABEL_ATTRIBUTE:
                if not (isinstance(value, Atom) and edge.predicate == value.text):
                    return False
            elif edge.edge_id is None or not store.has_attribute(edge.edge_id, attribute, value):
                return False
        return all(_passes_test(test, lookup) for test in self.value_tests)


def _passes_test(test: ValueTest, lookup) -> bool:
    candidates: set[Value] | None = None
    for attribute in test.attributes:
        values = set(lookup(attribute))
        candidates = values if candidates is None else candidates & values
        if not candidates:
            return False
    assert candidates is not None
    return any(
        all(eval_filter(f, {test.var: value}) for f in test.filters)
        for value in candidates
    )


def element_constraints(
    patterns: Iterable, filters: Iterable[FilterExpr]
) -> dict[Variable, ElementConstraint]:
    """Decompose a pconstruct where-block into per-variable constraints.

    Attribute patterns with literal objects become requirements (with @isA
    entityNode/edge consumed as kind directives); patterns with object
    variables pick up the filters mentioning that variable, evaluated locally
    per element. Cross-element joins are not supported here.
    """
    parts: list[FilterExpr] = []
    for expr in filters:
        parts.extend(expr.parts if isinstance(expr, Conjunction) else (expr,))
    by_filter_var: dict[Variable, list[FilterExpr]] = {}
    for part in parts:
        mentioned = filter_variables(part)
        if len(mentioned) != 1:
            raise ValidationError(
                "path construction filters must test one attribute value at a time"
            )
        by_filter_var.setdefault(next(iter(mentioned)), []).append(part)

    kinds: dict[Variable, str] = {}
    requirements: dict[Variable, list[tuple[str, Value]]] = {}
    valued: dict[tuple[Variable, Variable], list[str]] = {}
    subjects: list[Variable] = []
    for pattern in patterns:
        if not pattern.is_attribute():
            raise ValidationError(
                "path construction constrains elements with attribute patterns only, "
                f"got {pattern.render()!r}"
            )
        if not isinstance(pattern.subject, Variable):
            raise ValidationError(
                f"path construction patterns need a variable subject, got {pattern.render()!r}"
            )
        subject = pattern.subject
        if subject not in subjects:
            subjects.append(subject)
        if isinstance(pattern.object, Variable):
            valued.setdefault((subject, pattern.object), []).append(pattern.predicate)
            continue
        if pattern.predicate == ISA_ATTRIBUTE and isinstance(pattern.object, Atom) \
                and pattern.object.text in (NODE_KIND_NAME, EDGE_KIND_NAME):
            kind = "node" if pattern.object.text == NODE_KIND_NAME else "edge"
            if kinds.get(subject, kind) != kind:
                raise ValidationError(f"{subject} has contradictory @isA constraints")
            kinds[subject] = kind
            continue
        requirements.setdefault(subject, []).append((pattern.predicate, pattern.object))

    out: dict[Variable, ElementConstraint] = {}
    for subject in subjects:
        tests = tuple(
            ValueTest(obj_var, tuple(attrs), tuple(by_filter_var.get(obj_var, ())))
            for (subj, obj_var), attrs in valued.items()
            if subj == subject
        )
        out[subject] = ElementConstraint(
            var=subject,
            kind=kinds.get(subject, "any"),
            requirements=tuple(requirements.get(subject, ())),
            value_tests=tests,
        )
    return out


# --- automaton ---


@dataclass(frozen=True)
class PathAutomaton:
    """Epsilon-free NFA over element constraints with per-state parity tags."""

    constraints: tuple[ElementConstraint, ...]
    transitions: tuple[tuple[tuple[int, int], ...], ...]  # state -> ((constraint, target), ...)
    start: int
    accepting: frozenset[int]
    parity: tuple[str, ...]  # element expected next in each state: edge | node


def compile_path_regex(
    regex: RegexAst, constraints: dict[Variable, ElementConstraint]
) -> PathAutomaton:
    """Thompson-construct, epsilon-eliminate, and parity-check a path regex."""
    leaf_constraints: list[ElementConstraint] = []
    leaf_index: dict[Variable, int] = {}

    def constraint_of(var: Variable) -> int:
        if var not in leaf_index:
            leaf_index[var] = len(leaf_constraints)
            leaf_constraints.append(constraints.get(var, ElementConstraint(var)))
        return leaf_index[var]

    eps: list[list[int]] = []
    labeled: list[list[tuple[int, int]]] = []

    def new_state() -> int:
        eps.append([])
        labeled.append([])
        return len(eps) - 1

    def build(node: RegexAst) -> tuple[int, int]:
        if isinstance(node, ElementVar):
            s, e = new_state(), new_state()
            labeled[s].append((constraint_of(node.var), e))
            return s, e
        if isinstance(node, Group):
            return build(node.child)
        if isinstance(node, Concat):
            first_s, prev_e = build(node.parts[0])
            for part in node.parts[1:]:
                s, e = build(part)
                eps[prev_e].append(s)
                prev_e = e
            return first_s, prev_e
        if isinstance(node, Alternation):
            s, e = new_state(), new_state()
            for part in node.parts:
                ps, pe = build(part)
                eps[s].append(ps)
                eps[pe].append(e)
            return s, e
        s, e = new_state(), new_state()
        cs, ce = build(node.child)
        eps[s].append(cs)
        eps[ce].append(e)
        if node.kind in "*?":
            eps[s].append(e)
        if node.kind in "*+":
            eps[ce].append(cs)
        return s, e

    start, final = build(regex)

    def closure(state: int) -> frozenset[int]:
        seen = {state}
        stack = [state]
        while stack:
            for nxt in eps[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(seen)

    closures = [closure(q) for q in range(len(eps))]
    flat_transitions = [
        tuple(sorted({t for p in closures[q] for t in labeled[p]}))
        for q in range(len(eps))
    ]
    accepting = frozenset(q for q in range(len(eps)) if final in closures[q])

    parity: dict[int, str] = {start: "edge"}
    order = deque([start])
    while order:
        q = order.popleft()
        want = parity[q]
        for ci, target in flat_transitions[q]:
            constraint = leaf_constraints[ci]
            if constraint.kind not in ("any", want):
                raise ValidationError(
                    f"element {constraint.var} is a {constraint.kind} but the expression "
                    f"places it where a {want} is required"
                )
            flipped = "node" if want == "edge" else "edge"
            if target not in parity:
                parity[target] = flipped
                order.append(target)
            elif parity[target] != flipped:
                raise ValidationError(
                    "path expression does not alternate edges and nodes consistently"
                )

    if not any(q in accepting and parity.get(q) == "node" for q in parity):
        raise ValidationError("path expression cannot match any sequence ending with an edge")

    return PathAutomaton(
        constraints=tuple(leaf_constraints),
        transitions=tuple(
            tuple(t for t in flat_transitions[q] if q in parity)
            for q in range(len(eps))
        ),
        start=start,
        accepting=accepting,
        parity=tuple(parity.get(q, "edge") for q in range(len(eps))),
    )


# --- search ---


@dataclass(frozen=True)
class PathSearchResult:
    paths: tuple[PathWord, ...]
    truncated: bool


def _reaches_targets(store: TripleStore, targets: frozenset[NodeId]) -> frozenset[NodeId]:
    seen = set(t for t in targets if store.is_node(t))
    queue = deque(seen)
    while queue:
        node = queue.popleft()
        for edge in store.iter_in(node):
            if edge.subject not in seen:
                seen.add(edge.subject)
                queue.append(edge.subject)
    return frozenset(seen)


def _edge_sort_key(edge: RelationshipRow) -> tuple[str, str, str]:
    return (edge.predicate, edge.object, edge.edge_id or "")


def find_paths(
    starts: frozenset[NodeId],
    ends: frozenset[NodeId],
    automaton: PathAutomaton,
    cfg: SearchConfig,
    store: TripleStore,
) -> PathSearchResult:
    """All walks from ``starts`` to ``ends`` within the edge bound whose
    interior word the automaton accepts, deduplicated and sorted by
    (length, node sequence, predicate sequence)."""
    if not starts or not ends:
        raise ValidationError("path search needs non-empty start and end sets")
    prune = _reaches_targets(store, frozenset(ends))
    found: set[PathWord] = set()
    truncated = False
    queue: deque[tuple[NodeId, int, tuple[NodeId, ...], tuple[tuple[str, NodeId | None], ...]]]
    queue = deque()
    seen: set[tuple] = set()
    for s in sorted(starts):
        if s in prune:
            queue.append((s, automaton.start, (s,), ()))
    while queue and not truncated:
        node, state, nodes, edges = queue.popleft()
        if len(edges) >= cfg.max_edges:
            continue
        for edge in sorted(store.iter_out(node), key=_edge_sort_key):
            for ci, after_edge in automaton.transitions[state]:
                if not automaton.constraints[ci].matches_edge(edge, store):
                    continue
                nodes2 = nodes + (edge.object,)
                edges2 = edges + ((edge.predicate, edge.edge_id),)
                if edge.object in ends and after_edge in automaton.accepting:
                    word = PathWord(nodes2, edges2)
                    if word not in found:
                        if cfg.max_paths is not None and len(found) >= cfg.max_paths:
                            truncated = True
                            break
                        found.add(word)
                if len(edges2) < cfg.max_edges and edge.object in prune:
                    for cj, after_node in automaton.transitions[after_edge]:
                        if not automaton.constraints[cj].matches_node(edge.object, store):
                            continue
                        entry = (edge.object, after_node, nodes2, edges2)
                        if entry not in seen:
                            seen.add(entry)
                            queue.append(entry)
            if truncated:
                break
    ordered = sorted(
        found,
        key=lambda w: (len(w.edges), w.nodes, tuple(p for p, _ in w.edges)),
    )
    return PathSearchResult(tuple(ordered), truncated)


# --- pconstruct ---


@dataclass(frozen=True)
class PconstructOutcome:
    node_id: NodeId
    path_count: int
    truncated: bool


def candidate_nodes(constraint: ElementConstraint, store: TripleStore) -> frozenset[NodeId]:
    """Nodes satisfying an endpoint constraint, via index intersection."""
    if constraint.kind == "edge":
        raise ValidationError(f"{constraint.var} is declared an edge but names an endpoint")
    base: set[NodeId] | None = None
    for attribute, value in constraint.requirements:
        subjects = store.scan_by_attribute(attribute, value)
        base = set(subjects) if base is None else base & subjects
        if not base:
            return frozenset()
    for test in constraint.value_tests:
        for attribute in test.attributes:
            subjects = store.subjects_with_attribute(attribute)
            base = set(subjects) if base is None else base & subjects
            if not base:
                return frozenset()
    if base is None:
        base = set(store.nodes())
    return frozenset(n for n in base if constraint.matches_node(n, store))


def eval_pconstruct(
    query: PconstructQuery, store: TripleStore, cfg: SearchConfig = SearchConfig()
) -> PconstructOutcome:
    """Find matching paths and store them under a new path node.

    Endpoint constraint sets that match nothing are not an error; the path
    node is simply created empty.
    """
    constraints = element_constraints(query.patterns, query.filters)
    for var in (query.start_var, query.end_var):
        if var not in constraints:
            raise ValidationError(f"{var} has no constraining patterns")
    automaton = compile_path_regex(query.regex, constraints)
    starts = candidate_nodes(constraints[query.start_var], store)
    ends = candidate_nodes(constraints[query.end_var], store)
    if starts and ends:
        result = find_paths(starts, ends, automaton, cfg, store)
    else:
        result = PathSearchResult((), False)
    node_id = store.create_path_node(query.path_name, (), result.paths)
    return PconstructOutcome(node_id, len(result.paths), result.truncated)


# --- reachability strategies ---


class TraversalReachability:
    """Breadth-first search per query; linear time, no index."""

    def __init__(self, store: TripleStore):
        self._store = store

    def reachable(self, source: NodeId, target: NodeId) -> bool:
        store = self._store
        if not (store.is_node(source) and store.is_node(target)):
            return False
        if source == target:
            return True
        seen = {source}
        queue = deque((source,))
        while queue:
            for edge in store.iter_out(queue.popleft()):
                if edge.object == target:
                    return True
                if edge.object not in seen:
                    seen.add(edge.object)
                    queue.append(edge.object)
        return False


class TransitiveClosure:
    """Reflexive-transitive closure with O(1) membership; O(n^2) storage."""

    def __init__(self, nodes: tuple[NodeId, ...], comp_of: list[int], masks: list[int]):
        self._nodes = nodes
        self._index = {node: i for i, node in enumerate(nodes)}
        self._comp_of = comp_of
        self._masks = masks

    def contains(self, source: NodeId, target: NodeId) -> bool:
        si = self._index.get(source)
        ti = self._index.get(target)
        if si is None or ti is None:
            return False
        return bool(self._masks[self._comp_of[si]] >> ti & 1)

    def reachable_from(self, source: NodeId) -> frozenset[NodeId]:
        si = self._index.get(source)
        if si is None:
            return frozenset()
        mask = self._masks[self._comp_of[si]]
        return frozenset(n for i, n in enumerate(self._nodes) if mask >> i & 1)

    def pairs(self) -> Iterator[tuple[NodeId, NodeId]]:
        for source in self._nodes:
            for target in sorted(self.reachable_from(source)):
                yield source, target


def _strongly_connected_components(n: int, adj: list[list[int]]) -> tuple[list[int], int]:
    """Iterative Tarjan; component ids come out in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp_of = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, pos = work[-1]
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            for i in range(pos, len(adj[v])):
                w = adj[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp_of, ncomp


def build_closure(store: TripleStore,
                  node_limit: int = DEFAULT_CLOSURE_NODE_LIMIT) -> TransitiveClosure:
    """Build the edge transitive closure over all known nodes.

    Refuses graphs larger than ``node_limit`` nodes; the index costs
    quadratic space and is meant for moderate graphs.
    """
    nodes = tuple(sorted(store.nodes()))
    if len(nodes) > node_limit:
        raise ReachabilityGuardError(
            f"graph has {len(nodes)} nodes, above closure_node_limit={node_limit}"
        )
    index = {node: i for i, node in enumerate(nodes)}
    adj: list[list[int]] = [[] for _ in nodes]
    for i, node in enumerate(nodes):
        targets = {index[e.object] for e in store.iter_out(node)}
        adj[i] = sorted(targets)
    comp_of, ncomp = _strongly_connected_components(len(nodes), adj)
    own = [0] * ncomp
    for i in range(len(nodes)):
        own[comp_of[i]] |= 1 << i
    comp_edges: list[set[int]] = [set() for _ in range(ncomp)]
    for v in range(len(nodes)):
        for w in adj[v]:
            if comp_of[v] != comp_of[w]:
                comp_edges[comp_of[v]].add(comp_of[w])
    masks = [0] * ncomp
    for c in range(ncomp):  # successors have smaller component ids
        mask = own[c]
        for target in comp_edges[c]:
            mask |= masks[target]
        masks[c] = mask
    return TransitiveClosure(nodes, comp_of, masks)


class ClosureReachability:
    """Answers reachability from a prebuilt transitive closure."""

    def __init__(self, store: TripleStore, node_limit: int = DEFAULT_CLOSURE_NODE_LIMIT):
        self._closure = build_closure(store, node_limit)

    @property
    def closure(self) -> TransitiveClosure:
        return self._closure

    def reachable(self, source: NodeId, target: NodeId) -> bool:
        return self._closure.contains(source, target)


STRATEGIES = ("traversal", "closure", "gripp")


def make_reachability(store: TripleStore, strategy: str,
                      node_limit: int = DEFAULT_CLOSURE_NODE_LIMIT):
    """Instantiate a reachability strategy by name."""
    if strategy == "traversal":
        return TraversalReachability(store)
    if strategy == "closure":
        return ClosureReachability(store, node_limit)
    if strategy == "gripp":
        raise NotImplementedError(
            "the gripp reachability index is a recognized strategy name but is not "
            "implemented; use 'traversal' or 'closure'"
        )
    raise ValidationError(f"unknown reachability strategy: {strategy}")


def reachable(store: TripleStore, source: NodeId, target: NodeId,
              cfg: SearchConfig = SearchConfig()) -> bool:
    """Strategy-selected reachability test; unknown ids are never reachable."""
    return make_reachability(store, cfg.reachability, cfg.closure_node_limit).reachable(
        source, target
    )
