"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``. The scale smoke test is
marked slow but runs by default; deselect with ``-m "not slow"`` when
iterating.
"""

import io
import random
import time

import pytest

from fpsparql import Engine, corpus
from fpsparql.ast import SelectQuery
from fpsparql.datagen import gen_events
from fpsparql.evaluator import (
    eval_apply,
    eval_select,
    resolve_scope,
    scoped_variables,
)
from fpsparql.parser import parse
from fpsparql.paths import (
    ElementConstraint,
    SearchConfig,
    TraversalReachability,
    build_closure,
    compile_path_regex,
    element_constraints,
    find_paths,
)
from fpsparql.ast import render
from fpsparql.store import PathWord, TripleStore
from fpsparql.values import Atom

from conftest import (
    build_biblio_engine,
    build_events_engine,
    random_dag,
    random_graph,
    random_path_regex,
    random_select,
    random_store,
)
from oracle import (
    bfs_reachable_set,
    bulk_environments,
    bulk_select,
    nested_loop_select,
    oracle_find_paths,
    scoped_select,
)

EVENTS_SEED = 42
EVENTS_COUNT = 5000

PLANTED_CHAIN = PathWord(
    tuple(f"chain{i}" for i in range(7)),
    tuple(("wasTriggeredBy", None) for _ in range(6)),
)


@pytest.fixture(scope="module")
def biblio():
    return build_biblio_engine()


@pytest.fixture(scope="module")
def events():
    return build_events_engine(seed=EVENTS_SEED, event_count=EVENTS_COUNT)


def _passed(criterion: int, message: str) -> None:
    print(f"[criterion {criterion}] PASS — {message}")


def _timed(limit: float, fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    return result


def _oracle_members(store: TripleStore, construct_text: str) -> frozenset[str]:
    """Recompute a corpus folder's membership with the nested-loop oracle."""
    query = parse(construct_text)
    body = SelectQuery((query.member_var,), query.patterns, query.filters)
    return frozenset(v.text for (v,) in bulk_select(store, body))


def test_criterion_1_worked_examples_exact(biblio):
    store = biblio.store

    def folder_members():
        return store.members_of(store.folder_id("CAiSEPapers"), recursive=True)

    members = _timed(1.0, folder_members)
    assert members == {"paper1", "paper3"}
    assert members == _oracle_members(store, corpus.CAISE_FOLDER)

    record = store.path_record(store.path_node_id("p2p1Path"))
    assert record.paths == (
        PathWord(("paper2", "paper4", "paper3", "paper1"),
                 (("citedBy", None),) * 3),
    )

    for text, expected in [
        (corpus.AUTHOR_IN_FOLDER, {(Atom("paper1"),)}),
        (corpus.AUTHOR_IN_FOLDER_UNION, {(Atom("paper1"),), (Atom("paper2"),)}),
        (corpus.KEYWORD_ON_PATH, {(Atom("paper3"),)}),
    ]:
        query = parse(text)
        table = _timed(1.0, eval_apply, query, store)
        assert table.rows == expected
        oracle_rows = scoped_select(
            store, query.inner, resolve_scope(query.scope, store),
            scoped_variables(query.inner), environments=bulk_environments,
        )
        assert frozenset(table.rows) == oracle_rows
    _passed(1, "folder {paper1, paper3}, single citation path, applies match oracle")


def test_criterion_2_event_corpus_matches_oracle(events):
    start = time.perf_counter()
    store = events.store

    # folder construction: members equal the oracle evaluation of the body
    brainstorming = _oracle_members(store, corpus.BRAINSTORMING_FOLDER)
    assert store.members_of(store.folder_id("brainstorming09s2"), True) == brainstorming
    assert brainstorming, "fixture must give the folder some members"

    # folder selection scoped to the stored folder
    q2 = parse(corpus.TRIGGERED_UPDATE_ARTIFACTS)
    got = eval_apply(q2, store)
    expected = scoped_select(store, q2.inner, brainstorming, scoped_variables(q2.inner))
    assert frozenset(got.rows) == expected
    assert expected, "fixture must produce triggered updates inside the folder"

    # selection over a union of folders
    union_members = frozenset()
    for name in ("brainstorming10s1", "design10s1"):
        text = dict(corpus.EVENTS_SETUP)[name]
        union_members |= _oracle_members(store, text)
    q3 = parse(corpus.PHASE_UNION_UPDATERS)
    got = eval_apply(q3, store)
    expected = scoped_select(store, q3.inner, union_members, scoped_variables(q3.inner))
    assert frozenset(got.rows) == expected
    assert expected

    # path construction: exactly the planted chain
    q4 = parse(corpus.DOC_CHAIN_PATH)
    constraints = element_constraints(q4.patterns, q4.filters)
    nodes = store.nodes()
    oracle_starts = frozenset(
        n for n in nodes if constraints[q4.start_var].matches_node(n, store)
    )
    oracle_ends = frozenset(
        n for n in nodes if constraints[q4.end_var].matches_node(n, store)
    )
    oracle_paths = oracle_find_paths(store, oracle_starts, oracle_ends, q4.regex,
                                     constraints, max_edges=10)
    stored = store.path_record(store.path_node_id("myPathNode")).paths
    assert frozenset(stored) == oracle_paths == {PLANTED_CHAIN}

    # path selection scoped to the stored path node
    q5 = parse(corpus.GENERATED_ON_PATH)
    got = eval_apply(q5, store)
    elements = frozenset(n for word in oracle_paths for n in word.nodes)
    expected = scoped_select(store, q5.inner, elements, scoped_variables(q5.inner))
    assert frozenset(got.rows) == expected
    assert got.rows == {(Atom("brainDoc.doc"),), (Atom("designDoc.doc"),)}

    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"corpus + oracle took {elapsed:.1f}s"
    _passed(2, f"five event queries match the brute-force oracle in {elapsed:.1f}s")


def test_criterion_3_planner_soundness_200_stores():
    rng = random.Random(20090719)
    bodies = [parse(text) for text in corpus.SELECT_BODIES.values()]
    stores_checked = 0
    for _ in range(200):
        store = random_store(rng, max_nodes=40)
        for query in bodies + [random_select(rng)]:
            planned = frozenset(eval_select(query, store).rows)
            assert planned == nested_loop_select(store, query)
        stores_checked += 1
    assert stores_checked == 200
    _passed(3, "optimized plans equal nested-loop evaluation on 200 random stores")


def test_criterion_4_path_completeness_100_graphs():
    rng = random.Random(1337)
    graphs_checked = 0
    regex_shapes: set[str] = set()
    nonempty = 0
    while graphs_checked < 100:
        store = random_graph(rng, max_nodes=30, edge_factor=1.3)
        regex, constraints = random_path_regex(rng, depth=2)
        automaton = compile_path_regex(regex, constraints)
        nodes = sorted(store.nodes())
        starts = frozenset(rng.sample(nodes, min(3, len(nodes))))
        ends = frozenset(rng.sample(nodes, min(3, len(nodes))))
        cfg = SearchConfig(max_edges=rng.randint(1, 8))
        got = frozenset(find_paths(starts, ends, automaton, cfg, store).paths)
        expected = oracle_find_paths(store, starts, ends, regex, constraints,
                                     cfg.max_edges)
        assert got == expected
        graphs_checked += 1
        regex_shapes.add(render(regex))
        nonempty += bool(got)
    assert len(regex_shapes) >= 20
    assert nonempty >= 10, "sampling should produce some non-empty results"
    _passed(4, f"search equals the walk oracle on 100 graphs / "
               f"{len(regex_shapes)} regex shapes ({nonempty} non-empty)")


def test_criterion_5_reachability_strategies_agree():
    rng = random.Random(404)
    for _ in range(50):
        store = random_dag(rng, max_nodes=100)
        closure = build_closure(store)
        traversal = TraversalReachability(store)
        nodes = sorted(store.nodes())
        for u in nodes:
            oracle_row = bfs_reachable_set(store, u)
            assert closure.reachable_from(u) == oracle_row
            assert closure.contains(u, u)
        pair_sample = [(rng.choice(nodes), rng.choice(nodes)) for _ in range(150)]
        if len(nodes) <= 30:
            pair_sample = [(u, v) for u in nodes for v in nodes]
        for u, v in pair_sample:
            assert traversal.reachable(u, v) == closure.contains(u, v)
        # transitivity: every successor of a reachable node is reachable
        for u in nodes:
            row = closure.reachable_from(u)
            for mid in row:
                for edge in store.out_edges(mid):
                    assert edge.object in row
    _passed(5, "traversal and closure agree on 50 random DAGs; closure axioms hold")


def test_criterion_6_folder_scoping_reads_fewer_rows(events):
    store = events.store
    folder = store.folder_id("design10s1")
    members = store.members_of(folder, recursive=True)
    coverage = len(members) / len(store.nodes())
    assert coverage <= 0.10, f"folder covers {coverage:.1%} of subjects"

    inner_text = corpus.SELECT_BODIES["triggered_select"]
    scoped_query = parse(f"(design10s1) apply ({inner_text})")
    plain_query = parse(inner_text)

    store.counters.reset()
    eval_apply(scoped_query, store)
    scoped_reads = store.counters.graph_rows

    store.counters.reset()
    eval_select(plain_query, store)
    plain_reads = store.counters.graph_rows

    assert scoped_reads < plain_reads, (scoped_reads, plain_reads)
    _passed(6, f"scoped apply read {scoped_reads} relationship rows vs "
               f"{plain_reads} whole-graph")


def test_criterion_7_set_composition_laws(biblio):
    store = biblio.store
    inner = corpus.SELECT_BODIES["author_select"]

    def rows(scope: str):
        return eval_apply(parse(f"({scope}) apply ({inner})"), store).rows

    a, b = "CAiSEPapers", "SIGMODPapers"
    assert rows(f"{a} union {b}") == rows(a) | rows(b)
    assert rows(f"{a} minus {a}") == set()
    assert rows(f"{a} intersect {a}") == rows(a)
    _passed(7, "apply distributes over union; minus-self empty; intersect-self identity")


@pytest.mark.slow
def test_criterion_8_million_triple_smoke(tmp_path):
    target = 1_000_000
    fixture = tmp_path / "million.nt"
    start = time.perf_counter()
    text = gen_events(seed=EVENTS_SEED, event_count=107_000)
    fixture.write_text(text, encoding="utf-8")
    gen_time = time.perf_counter() - start

    engine = Engine()
    start = time.perf_counter()
    with open(fixture, encoding="utf-8") as fh:
        report = engine.load(fh)
    load_time = time.perf_counter() - start
    assert report.triples_read >= target, report.summary()
    assert not report.rejected_lines

    start = time.perf_counter()
    for _, query in corpus.EVENTS_SETUP:
        engine.execute(query)
    results = {name: engine.execute(q) for name, q in corpus.EVENTS_QUERIES.items()}
    query_time = time.perf_counter() - start

    record = engine.store.path_record(engine.store.path_node_id("myPathNode"))
    assert record.paths == (PLANTED_CHAIN,)
    assert results["generated_on_path"].table.rows == {
        (Atom("brainDoc.doc"),), (Atom("designDoc.doc"),)
    }
    _passed(8, f"{report.triples_read:,} triples: generate {gen_time:.1f}s, "
               f"load {load_time:.1f}s, corpus {query_time:.1f}s (informational)")


def test_criterion_9_round_trips(biblio, events, tmp_path):
    for name, text in corpus.ALL_QUERIES.items():
        ast = parse(text)
        assert parse(render(ast)) == ast, name

    for label, engine in (("biblio", biblio), ("events", events)):
        directory = tmp_path / label
        engine.persist(str(directory))
        reopened = TripleStore.open(str(directory))
        store = engine.store
        assert reopened.entity_rows() == store.entity_rows()
        assert reopened.graph_rows() == store.graph_rows()
        assert {
            (f.folder_id, f.member_rows, f.child_folders)
            for f in reopened.folders().values()
        } == {
            (f.folder_id, f.member_rows, f.child_folders)
            for f in store.folders().values()
        }
        assert {
            (p.path_node_id, p.element_rows) for p in reopened.path_records().values()
        } == {
            (p.path_node_id, p.element_rows) for p in store.path_records().values()
        }
    _passed(9, "parser render/reparse identity; store persist/open identity")
