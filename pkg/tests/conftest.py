"""Shared fixtures: loaded engines over the generated fixtures, and random
store/query/regex generators used by the property and soundness tests."""

from __future__ import annotations

import io
import random

import pytest

from fpsparql import Engine
from fpsparql.ast import (
    Concat,
    ElementVar,
    Group,
    Repeat,
    Alternation,
    SelectQuery,
    TriplePattern,
    Variable,
)
from fpsparql.corpus import BIBLIO_SETUP, EVENTS_SETUP
from fpsparql.datagen import gen_biblio, gen_events
from fpsparql.paths import ElementConstraint
from fpsparql.store import AttributeRow, RelationshipRow, TripleStore
from fpsparql.values import Atom, TypedLiteral


def build_biblio_engine() -> Engine:
    engine = Engine()
    engine.load(io.StringIO(gen_biblio()))
    for _, text in BIBLIO_SETUP:
        engine.execute(text)
    return engine


def build_events_engine(seed: int = 42, event_count: int = 5000,
                        setup: bool = True) -> Engine:
    engine = Engine()
    engine.load(io.StringIO(gen_events(seed, event_count)))
    if setup:
        for _, text in EVENTS_SETUP:
            engine.execute(text)
    return engine


@pytest.fixture(scope="session")
def biblio_engine() -> Engine:
    """Loaded bibliographic fixture with all corpus folders/paths built.
    Treat as read-only; construct-anything tests build their own engine."""
    return build_biblio_engine()


@pytest.fixture()
def fresh_biblio_engine() -> Engine:
    return build_biblio_engine()


@pytest.fixture(scope="session")
def events_engine() -> Engine:
    """Small event-log fixture for unit tests (the acceptance suite builds
    the full-size one itself)."""
    return build_events_engine(seed=7, event_count=1200)


# --- random generators (seeded random, not hypothesis, where exact run
# counts matter) ---

TYPE_VOCAB = ("paper", "author", "venue", "Event", "artifact", "agent", "chapter")
ATTR_VOCAB = ("@type", "@name", "@title", "@activityType", "@UserGroup")
PRED_VOCAB = ("publishedIn", "authoredBy", "citedBy", "wasTriggeredBy", "used")
VALUE_VOCAB = ("paper", "author", "venue", "Event", "CAiSE", "SIGMOD", "update",
               "comment", "generate", "author1", "project4", "Querying SQL Graphs")


def random_store(rng: random.Random, max_nodes: int = 40,
                 edge_factor: float = 1.5) -> TripleStore:
    store = TripleStore()
    n = rng.randint(2, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    for node in nodes:
        for _ in range(rng.randint(1, 3)):
            attribute = rng.choice(ATTR_VOCAB)
            if attribute == "@timestamp" or rng.random() < 0.1:
                value = TypedLiteral(
                    f"2009-{rng.randint(7, 11):02d}-{rng.randint(1, 28):02d}", "xsd:date"
                )
            else:
                value = Atom(rng.choice(VALUE_VOCAB))
            store.insert_attribute(AttributeRow(node, attribute, value))
    for _ in range(int(n * edge_factor)):
        store.insert_relationship(
            RelationshipRow(rng.choice(nodes), rng.choice(PRED_VOCAB), rng.choice(nodes))
        )
    return store


def random_select(rng: random.Random, max_patterns: int = 4) -> SelectQuery:
    variables = [Variable(f"v{i}") for i in range(3)]
    patterns = []
    for _ in range(rng.randint(1, max_patterns)):
        subject = rng.choice(variables)
        if rng.random() < 0.6:
            predicate = rng.choice(ATTR_VOCAB)
            obj = Atom(rng.choice(VALUE_VOCAB)) if rng.random() < 0.6 else rng.choice(variables)
        else:
            predicate = rng.choice(PRED_VOCAB)
            obj = rng.choice(variables) if rng.random() < 0.8 else Atom(f"n{rng.randrange(8)}")
        patterns.append(TriplePattern(subject, predicate, obj))
    used = [v for v in variables if any(v in p.variables() for p in patterns)]
    projection = tuple(rng.sample(used, rng.randint(1, len(used))))
    return SelectQuery(projection, tuple(patterns))


def random_graph(rng: random.Random, max_nodes: int = 30,
                 edge_factor: float = 1.4) -> TripleStore:
    """Sparse relationship-heavy store for path search tests."""
    store = TripleStore()
    n = rng.randint(3, max_nodes)
    nodes = [f"g{i}" for i in range(n)]
    for node in nodes:
        store.insert_attribute(
            AttributeRow(node, "@type", Atom(rng.choice(("Event", "artifact", "agent"))))
        )
    predicates = ("citedBy", "wasTriggeredBy", "used")
    for _ in range(int(n * edge_factor)):
        store.insert_relationship(
            RelationshipRow(rng.choice(nodes), rng.choice(predicates), rng.choice(nodes))
        )
    return store


def random_dag(rng: random.Random, max_nodes: int = 100) -> TripleStore:
    store = TripleStore()
    n = rng.randint(2, max_nodes)
    nodes = [f"d{i}" for i in range(n)]
    for node in nodes:
        store.insert_attribute(AttributeRow(node, "@type", Atom("node")))
    for _ in range(rng.randint(n, 3 * n)):
        i, j = rng.sample(range(n), 2)
        if i > j:
            i, j = j, i
        store.insert_relationship(RelationshipRow(nodes[i], "edge", nodes[j]))
    return store


def random_path_regex(rng: random.Random, depth: int = 2):
    """A regex whose words alternate edge, node, ..., edge by construction,
    plus kind-consistent constraints for its variables."""
    counter = [0]
    constraints: dict[Variable, ElementConstraint] = {}

    def edge_leaf():
        counter[0] += 1
        var = Variable(f"e{counter[0]}")
        requirements = ()
        if rng.random() < 0.4:
            requirements = (("@label", Atom(rng.choice(("citedBy", "wasTriggeredBy", "used")))),)
        constraints[var] = ElementConstraint(var, "edge", requirements)
        return ElementVar(var)

    def node_leaf():
        counter[0] += 1
        var = Variable(f"n{counter[0]}")
        requirements = ()
        if rng.random() < 0.4:
            requirements = (("@type", Atom(rng.choice(("Event", "artifact", "agent")))),)
        constraints[var] = ElementConstraint(var, "node", requirements)
        return ElementVar(var)

    def fragment(d: int):
        roll = rng.random()
        if d <= 0 or roll < 0.35:
            return edge_leaf()
        if roll < 0.6:
            return Concat((fragment(d - 1), node_leaf(), fragment(d - 1)))
        if roll < 0.8:
            return Alternation((fragment(d - 1), fragment(d - 1)))
        kind = rng.choice("*+?")
        looped = Group(Concat((fragment(d - 1), node_leaf())))
        return Concat((Repeat(looped, kind), fragment(d - 1)))

    return fragment(depth), constraints
