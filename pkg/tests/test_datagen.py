import io

import pytest

from fpsparql import Engine
from fpsparql.datagen import PHASES, gen_biblio, gen_events, gen_fixture, phase_range
from fpsparql.errors import ValidationError
from fpsparql.values import Atom


def test_biblio_contains_worked_example_rows():
    text = gen_biblio()
    assert "paper1 publishedIn CAiSE .\n" in text
    for edge in ("paper2 citedBy paper4", "paper4 citedBy paper3", "paper3 citedBy paper1"):
        assert f"{edge} .\n" in text


def test_biblio_ignores_seed():
    assert gen_fixture("biblio", seed=1) == gen_fixture("biblio", seed=999)


def test_events_deterministic_for_fixed_seed():
    assert gen_events(42, 400) == gen_events(42, 400)
    assert gen_events(42, 400) != gen_events(43, 400)


def test_unknown_kind_rejected():
    with pytest.raises(ValidationError):
        gen_fixture("social", seed=1)


def test_phase_calendar_is_ordered():
    for semester, phases in PHASES.items():
        for name, start, end in phases:
            assert start <= end, (semester, name)
        boundaries = [p[1] for p in phases]
        assert boundaries == sorted(boundaries)


def test_phase_range_lookup():
    start, end = phase_range("09s2", "brainstorming")
    assert (start.isoformat(), end.isoformat()) == ("2009-07-19", "2009-08-08")
    with pytest.raises(KeyError):
        phase_range("09s2", "vacation")


def test_events_load_cleanly_and_contain_the_planted_chain():
    engine = Engine()
    report = engine.load(io.StringIO(gen_events(3, 300)))
    assert report.rejected_lines == []
    store = engine.store
    # chain endpoints are the only generate events for the reserved documents
    starts = store.scan_by_attribute("@artifactName", Atom("brainDoc.doc"))
    assert starts == {"chain0"}
    ends = store.scan_by_attribute("@artifactName", Atom("designDoc.doc"))
    assert ends == {"chain6"}
    # the chain is wired head to tail and isolated
    for i in range(6):
        assert store.has_relationship(f"chain{i}", "wasTriggeredBy", f"chain{i + 1}")
    for i in range(1, 6):
        assert len(store.out_edges(f"chain{i}")) == 1
        assert len(store.in_edges(f"chain{i}")) == 1


def test_event_count_scales_output():
    small = gen_events(42, 100).count("\n")
    large = gen_events(42, 200).count("\n")
    assert large > small * 1.5
