import itertools
import random

import pytest

from fpsparql import corpus
from fpsparql.ast import SelectQuery, TriplePattern, Variable
from fpsparql.evaluator import eval_select, eval_tree
from fpsparql.parser import parse
from fpsparql.planner import (
    Filter,
    Join,
    Project,
    Scan,
    ScopeContext,
    eliminate_redundancies,
    estimate_cardinality,
    explain,
    plan,
)
from fpsparql.values import Atom

from conftest import random_select, random_store
from oracle import nested_loop_select


def V(name: str) -> Variable:
    return Variable(name)


class TestEliminateRedundancies:
    def test_exact_duplicate_removed(self):
        pattern = TriplePattern(V("p"), "@type", Atom("paper"))
        assert eliminate_redundancies((pattern, pattern)) == (pattern,)

    def test_no_redundancy_untouched(self):
        query = parse(corpus.AUTHOR_IN_FOLDER)
        patterns = query.inner.patterns
        assert eliminate_redundancies(patterns, frozenset(query.inner.projection)) == patterns

    def test_fresh_variable_pattern_subsumed(self):
        keep = TriplePattern(V("p"), "@type", Atom("paper"))
        junk = TriplePattern(V("p"), "@type", V("x"))
        assert eliminate_redundancies((keep, junk)) == (keep,)
        assert eliminate_redundancies((junk, keep)) == (keep,)

    def test_projected_variable_not_disposable(self):
        keep = TriplePattern(V("p"), "@type", Atom("paper"))
        wanted = TriplePattern(V("p"), "@type", V("x"))
        out = eliminate_redundancies((keep, wanted), protected=frozenset((V("x"),)))
        assert set(out) == {keep, wanted}

    def test_shared_variable_not_disposable(self):
        a = TriplePattern(V("p"), "@type", V("x"))
        b = TriplePattern(V("q"), "@kind", V("x"))
        c = TriplePattern(V("p"), "@type", Atom("paper"))
        assert set(eliminate_redundancies((a, b, c))) == {a, b, c}

    def test_classification_mismatch_blocks_subsumption(self):
        attr = TriplePattern(V("p"), "@type", Atom("paper"))
        rel = TriplePattern(V("p"), V("q"), V("x"))
        assert set(eliminate_redundancies((attr, rel))) == {attr, rel}

    def test_mutual_subsumption_keeps_one(self):
        a = TriplePattern(V("p"), "@type", V("x"))
        b = TriplePattern(V("p"), "@type", V("y"))
        assert len(eliminate_redundancies((a, b))) == 1

    def test_equivalence_on_random_stores(self):
        rng = random.Random(2024)
        for _ in range(60):
            store = random_store(rng, max_nodes=20)
            query = random_select(rng)
            doubled = SelectQuery(
                query.projection,
                query.patterns + query.patterns[:1] + (
                    TriplePattern(query.patterns[0].subject, query.patterns[0].predicate,
                                  V("fresh_unused")),
                ),
                query.filters,
            )
            assert nested_loop_select(store, doubled) == nested_loop_select(store, query)
            reduced = SelectQuery(
                query.projection,
                eliminate_redundancies(doubled.patterns, frozenset(query.projection)),
                query.filters,
            )
            assert nested_loop_select(store, reduced) == nested_loop_select(store, query)


class TestEstimates:
    def test_literal_pair_uses_index_count(self, biblio_engine):
        store = biblio_engine.store
        pattern = TriplePattern(V("p"), "@type", Atom("paper"))
        assert estimate_cardinality(pattern, store) == 4

    def test_unknown_value_estimates_zero(self, biblio_engine):
        pattern = TriplePattern(V("p"), "@type", Atom("nonexistent"))
        assert estimate_cardinality(pattern, biblio_engine.store) == 0

    def test_unconstrained_patterns_use_store_size(self, biblio_engine):
        store = biblio_engine.store
        rel = TriplePattern(V("s"), V("p"), V("o"))
        assert estimate_cardinality(rel, store) == store.graph_size()
        attr = TriplePattern(V("s"), "@type", V("t"))
        assert estimate_cardinality(attr, store) == store.entity_size()


class TestPlanShape:
    def test_single_pattern_is_project_over_scan(self, biblio_engine):
        tree = plan(parse(corpus.PAPERS_BY_TYPE), biblio_engine.store)
        assert isinstance(tree, Project)
        assert isinstance(tree.child, Scan)

    def test_left_deep_join_ordering(self, biblio_engine):
        query = parse(corpus.AUTHOR_IN_FOLDER).inner
        tree = plan(query, biblio_engine.store)
        # smallest scan first: @name 'author1' matches a single row
        node = tree
        while not isinstance(node, Scan):
            node = node.child if not isinstance(node, Join) else node.left
        assert node.pattern.predicate == "@name"

    def test_scope_restricts_matching_subject_scans(self, biblio_engine):
        store = biblio_engine.store
        query = parse(corpus.AUTHOR_IN_FOLDER).inner
        members = store.members_of(store.folder_id("CAiSEPapers"), recursive=True)
        ctx = ScopeContext("folder", "CAiSEPapers", members, frozenset((V("p"),)))
        tree = plan(query, store, ctx)

        scans = []

        def collect(node):
            if isinstance(node, Scan):
                scans.append(node)
            elif isinstance(node, Join):
                collect(node.left)
                collect(node.right)
            else:
                collect(node.child)

        collect(tree)
        for scan in scans:
            if scan.pattern.subject == V("p"):
                assert scan.restrict == members
            else:
                assert scan.restrict is None

    def test_cartesian_product_ordered_last(self, biblio_engine):
        query = parse(
            "select ?p ?v where { ?p @type paper. ?v @type venue. }"
        )
        tree = plan(query, biblio_engine.store)
        join = tree.child
        assert isinstance(join, Join)
        assert join.on == ()
        table = eval_tree(tree, biblio_engine.store)
        assert len(table) == 8  # 4 papers x 2 venues

    def test_explain_renders_one_operator_per_line(self, biblio_engine):
        text = explain(plan(parse(corpus.AUTHOR_IN_FOLDER).inner, biblio_engine.store))
        lines = text.splitlines()
        assert lines[0].startswith("Project")
        assert all(line.strip() for line in lines)
        assert any(line.startswith("  ") for line in lines)


class TestPlanSoundness:
    def test_corpus_bodies_match_nested_loop_on_random_stores(self):
        rng = random.Random(99)
        bodies = [parse(text) for text in corpus.SELECT_BODIES.values()]
        for _ in range(40):
            store = random_store(rng, max_nodes=25)
            for query in bodies:
                planned = eval_select(query, store)
                assert frozenset(planned.rows) == nested_loop_select(store, query)

    def test_random_selects_match_nested_loop(self):
        rng = random.Random(4242)
        for _ in range(80):
            store = random_store(rng, max_nodes=20)
            query = random_select(rng)
            planned = eval_select(query, store)
            assert frozenset(planned.rows) == nested_loop_select(store, query)

    def test_filters_forced_to_root_equal_sunk_filters(self):
        rng = random.Random(7)
        text = (
            "select ?e where { ?e @type Event. ?e @activityType ?a. "
            "filter (?a = 'update'). }"
        )
        query = parse(text)
        rootless = SelectQuery((V("e"), V("a")), query.patterns, ())
        for _ in range(30):
            store = random_store(rng, max_nodes=25)
            sunk = eval_select(query, store)
            unfiltered = eval_select(rootless, store)
            from fpsparql.evaluator import eval_filter

            manual = {
                (row[0],) for row in unfiltered.rows
                if all(
                    eval_filter(f, dict(zip(unfiltered.variables, row)))
                    for f in query.filters
                )
            }
            assert sunk.rows == manual

    def test_join_order_permutations_agree(self):
        rng = random.Random(11)
        for _ in range(12):
            store = random_store(rng, max_nodes=12)
            query = random_select(rng, max_patterns=3)
            reference = None
            for perm in itertools.permutations(query.patterns):
                permuted = SelectQuery(query.projection, tuple(perm), query.filters)
                got = eval_select(permuted, store).rows
                if reference is None:
                    reference = got
                assert got == reference
