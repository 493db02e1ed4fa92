"""Deterministic fixture generators: a small bibliographic graph and a
provenance-style event log.

The bibliographic fixture is a fixed citation/authorship graph (four papers,
two venues, a short derivation chain, and a handful of grouped publications).

The event fixture simulates a project-course log: events carry activity
type, timestamp, user, group, and subsystem layer attributes and are wired
with used / wasGeneratedBy / wasTriggeredBy / wasControledBy /
wasDerivedFrom relations across two semesters of phases. One seven-event
chain is planted: it runs from the event generating brainDoc.doc to the
event generating designDoc.doc for project4, all timestamped in the final
delivery phase, with exactly one Wiki bug-response event in its interior,
and no other edges in or out of the chain. Output is a pure function of the
seed.
"""

from __future__ import annotations

import random
from datetime import date, timedelta

from .errors import ValidationError

# Phase calendar; corpus queries reference these ranges.
PHASES = {
    "09s2": (
        ("brainstorming", date(2009, 7, 19), date(2009, 8, 8)),
        ("requirements", date(2009, 8, 9), date(2009, 8, 31)),
        ("design", date(2009, 9, 1), date(2009, 9, 25)),
        ("prototype", date(2009, 9, 26), date(2009, 10, 20)),
        ("testing", date(2009, 10, 21), date(2009, 11, 4)),
        ("delivery", date(2009, 11, 5), date(2009, 11, 30)),
    ),
    "10s1": (
        ("brainstorming", date(2010, 3, 1), date(2010, 3, 14)),
        ("requirements", date(2010, 3, 15), date(2010, 3, 31)),
        ("design", date(2010, 4, 1), date(2010, 4, 21)),
        ("prototype", date(2010, 4, 22), date(2010, 5, 15)),
        ("testing", date(2010, 5, 16), date(2010, 5, 31)),
        ("delivery", date(2010, 6, 1), date(2010, 6, 20)),
    ),
}

def phase_range(semester: str, phase: str) -> tuple[date, date]:
    for name, start, end in PHASES[semester]:
        if name == phase:
            return start, end
    raise KeyError(f"no phase {phase} in {semester}")


LAYERS = ("MessageBoard", "Wiki", "Blog", "FileShare", "SVN")
ACTIVITIES = ("update", "comment", "generate", "response", "create", "delete")
ACTIVITY_WEIGHTS = (30, 20, 15, 15, 10, 10)
LAYER_PARTS = ("bug", "feature", "question")
GROUPS = tuple(f"project{i}" for i in range(1, 16))
USERS_PER_GROUP = 4

CHAIN_DOCS = ("brainDoc.doc", "designDoc.doc")

BIBLIO_LINES = """\
# bibliographic fixture: papers, venues, authors, citations, derivations
paper1 @type paper .
paper1 @id p1 .
paper1 @title "Graph Data Models" .
paper2 @type paper .
paper2 @id p2 .
paper2 @title "Folder Abstractions for Process Logs" .
paper3 @type paper .
paper3 @id p3 .
paper3 @title "Querying SQL Graphs" .
paper4 @type paper .
paper4 @id p4 .
paper4 @title "Provenance in Workflow Systems" .
CAiSE @type venue .
SIGMOD @type venue .
author1 @type author .
author1 @name "author1" .
author2 @type author .
author2 @name "author2" .
document1 @type document .
file1 @type ITEM .
paper1 publishedIn CAiSE .
paper3 publishedIn CAiSE .
paper2 publishedIn SIGMOD .
paper4 publishedIn SIGMOD .
paper1 authoredBy author1 .
paper2 authoredBy author1 .
paper3 authoredBy author2 .
paper4 authoredBy author2 .
paper2 citedBy paper4 .
paper4 citedBy paper3 .
paper3 citedBy paper1 .
paper1 wasDerivedFrom document1 .
document1 wasDerivedFrom file1 .
# grouped conference proceedings used by the folder-of-folders queries
inproc08a @type publication .
inproc08b @type publication .
inproc09a @type publication .
inproc10a @type publication .
inproc08a publishedIn SIGMOD08 .
inproc08b publishedIn SIGMOD08 .
inproc09a publishedIn SIGMOD09 .
inproc10a publishedIn SIGMOD10 .
# fixture for the web-page lookup query
chapter1 @type chapter .
chapter1 @title "Querying RDF Data" .
chapter1 authoredBy person1 .
person1 @type person .
person1 @webPage "http://example.org/~jdoe" .
"""


def gen_biblio() -> str:
    """The fixed bibliographic fixture (seed-independent)."""
    return BIBLIO_LINES


def _days_between(start: date, end: date) -> int:
    return (end - start).days


def gen_events(seed: int, event_count: int) -> str:
    """Generate an event-log fixture of ``event_count`` events (plus the
    seven-event planted chain and supporting artifact/agent nodes)."""
    if event_count < 1:
        raise ValidationError("event_count must be >= 1")
    rng = random.Random(seed)
    lines: list[str] = [f"# event-log fixture (seed={seed}, events={event_count})"]

    users = {
        group: [f"u{gi * USERS_PER_GROUP + ui + 1:02d}" for ui in range(USERS_PER_GROUP)]
        for gi, group in enumerate(GROUPS)
    }
    for group, members in users.items():
        for user in members:
            lines.append(f"{user} @type agent .")
            lines.append(f"{user} @name \"{user}\" .")

    artifacts = {
        group: [f"{group}_file{i}.doc" for i in range(1, 41)]
        for group in GROUPS
    }
    for group, names in artifacts.items():
        for name in names:
            lines.append(f"{name} @type artifact .")

    semesters = list(PHASES)
    spans = {
        s: (PHASES[s][0][1], PHASES[s][-1][2]) for s in semesters
    }

    events_by_group: dict[str, list[tuple[str, str]]] = {g: [] for g in GROUPS}
    update_quota = 0
    for i in range(1, event_count + 1):
        event = f"e{i}"
        group = rng.choice(GROUPS)
        user = rng.choice(users[group])
        semester = semesters[0] if rng.random() < 0.6 else semesters[1]
        start, end = spans[semester]
        stamp = start + timedelta(days=rng.randrange(_days_between(start, end) + 1))
        layer = rng.choice(LAYERS)
        forced_update_pair = i % 40 == 0
        if forced_update_pair:
            activity = "update"
        else:
            activity = rng.choices(ACTIVITIES, weights=ACTIVITY_WEIGHTS, k=1)[0]
        lines.append(f"{event} @type Event .")
        lines.append(f"{event} @activityType {activity} .")
        lines.append(f"{event} @timestamp \"{stamp.isoformat()}\"^^xsd:date .")
        lines.append(f"{event} @UseName \"{user}\" .")
        lines.append(f"{event} @UserGroup {group} .")
        lines.append(f"{event} @layer {layer} .")
        if activity == "response":
            lines.append(f"{event} @layerPart {rng.choice(LAYER_PARTS)} .")
        if activity in ("update", "generate", "create", "delete"):
            artifact = rng.choice(artifacts[group])
            lines.append(f"{event} @ArtifactName \"{artifact}\" .")
            lines.append(f"{event} @artifactName \"{artifact}\" .")
            if activity == "generate":
                lines.append(f"{artifact} wasGeneratedBy {event} .")
            else:
                lines.append(f"{event} used {artifact} .")
        if rng.random() < 0.7:
            lines.append(f"{event} wasControledBy {user} .")
        prior = events_by_group[group]
        if forced_update_pair:
            comment = f"e{i}c"
            lines.append(f"{comment} @type Event .")
            lines.append(f"{comment} @activityType comment .")
            lines.append(f"{comment} @timestamp \"{stamp.isoformat()}\"^^xsd:date .")
            lines.append(f"{comment} @UseName \"{user}\" .")
            lines.append(f"{comment} @UserGroup {group} .")
            lines.append(f"{comment} @layer {layer} .")
            lines.append(f"{event} wasTriggeredBy {comment} .")
            update_quota += 1
        elif prior and rng.random() < 0.3:
            target, _ = rng.choice(prior)
            lines.append(f"{event} wasTriggeredBy {target} .")
        if rng.random() < 0.05 and len(artifacts[group]) >= 2:
            a, b = rng.sample(artifacts[group], 2)
            lines.append(f"{a} wasDerivedFrom {b} .")
        prior.append((event, activity))
        if len(prior) > 50:
            del prior[0]

    lines.extend(_planted_chain())
    return "\n".join(lines) + "\n"


def _planted_chain() -> list[str]:
    """Seven events from the brainDoc generator to the designDoc generator,
    linked head-to-tail, isolated from the background graph."""
    group = "project4"
    user = "u13"
    stamps = [date(2009, 11, 7) + timedelta(days=2 * i) for i in range(7)]
    activities = ["generate", "update", "comment", "response", "update", "comment", "generate"]
    lines = []
    for doc in CHAIN_DOCS:
        lines.append(f"{doc} @type artifact .")
    for i, (stamp, activity) in enumerate(zip(stamps, activities)):
        event = f"chain{i}"
        lines.append(f"{event} @type Event .")
        lines.append(f"{event} @activityType {activity} .")
        lines.append(f"{event} @timestamp \"{stamp.isoformat()}\"^^xsd:date .")
        lines.append(f"{event} @UseName \"{user}\" .")
        lines.append(f"{event} @UserGroup {group} .")
        if i == 3:
            lines.append(f"{event} @layer Wiki .")
            lines.append(f"{event} @layerPart bug .")
        else:
            lines.append(f"{event} @layer FileShare .")
    lines.append(f"chain0 @ArtifactName \"{CHAIN_DOCS[0]}\" .")
    lines.append(f"chain0 @artifactName \"{CHAIN_DOCS[0]}\" .")
    lines.append(f"{CHAIN_DOCS[0]} wasGeneratedBy chain0 .")
    lines.append(f"chain6 @ArtifactName \"{CHAIN_DOCS[1]}\" .")
    lines.append(f"chain6 @artifactName \"{CHAIN_DOCS[1]}\" .")
    lines.append(f"{CHAIN_DOCS[1]} wasGeneratedBy chain6 .")
    for i in range(6):
        lines.append(f"chain{i} wasTriggeredBy chain{i + 1} .")
    return lines


def gen_fixture(kind: str, seed: int = 0, event_count: int = 5000) -> str:
    """Dispatch by fixture kind: 'biblio' (fixed) or 'events' (seeded)."""
    if kind == "biblio":
        return gen_biblio()
    if kind == "events":
        return gen_events(seed, event_count)
    raise ValidationError(f"unknown fixture kind: {kind}")
