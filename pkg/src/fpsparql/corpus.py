"""Canonical query corpus over the two generated fixtures.

Setup sequences construct the folders and path nodes the selection queries
refer to; run them in order on a freshly loaded fixture. The events corpus
keeps its phase-window filters in sync with the generator's phase calendar.
"""

from __future__ import annotations

from .datagen import phase_range

# --- bibliographic fixture ---

CAISE_FOLDER = """\
fconstruct CAiSEPapers as ?fn
select ?p
where {
  ?fn @description 'set of papers published in CAiSE'.
  ?p @type paper.
  ?p publishedIn 'CAiSE'.
}
"""

SIGMOD_FOLDER = """\
fconstruct SIGMODPapers as ?fn
select ?p
where {
  ?fn @description 'set of papers published in SIGMOD'.
  ?p @type paper.
  ?p publishedIn 'SIGMOD'.
}
"""

PROCEEDINGS_FOLDERS = tuple(
    f"""\
fconstruct {name}
select ?x
where {{
  ?x publishedIn '{name}'.
}}
"""
    for name in ("SIGMOD08", "SIGMOD09", "SIGMOD10")
)

SIGMOD_GROUP_FOLDER = """\
fconstruct SIGMOD as ?fn
(SIGMOD08, SIGMOD09, SIGMOD10)
where {
  ?fn @description 'set of related folder nodes'.
}
"""

CITATION_PATH = """\
pconstruct p2p1Path
(?startNode, ?endNode, (?e ?n)* ?citedByEdge (?n ?e)*)
where {
  ?startNode @id p2.
  ?endNode @id p1.
  ?n @isA entityNode.
  ?e @isA edge.
  ?citedByEdge @isA edge.
  ?citedByEdge @label citedBy.
}
"""

AUTHOR_IN_FOLDER = """\
(CAiSEPapers) apply (
select ?p
where {
  ?p @type paper.
  ?p authoredBy ?a.
  ?a @type author.
  ?a @name 'author1'.
})
"""

AUTHOR_IN_FOLDER_UNION = """\
(CAiSEPapers union SIGMODPapers) apply (
select ?p
where {
  ?p @type paper.
  ?p authoredBy ?a.
  ?a @type author.
  ?a @name 'author1'.
})
"""

KEYWORD_ON_PATH = """\
(p2p1Path) apply (
select ?p
where {
  ?p @type paper.
  ?p @title ?t.
  filter regex(?t, "SQL").
})
"""

WEBPAGE_LOOKUP = """\
select ?w
where {
  ?c @type chapter.
  ?c @title 'Querying RDF Data'.
  ?c authoredBy ?a.
  ?a @webPage ?w.
}
"""

PAPERS_BY_TYPE = """\
select ?p
where {
  ?p @type paper.
}
"""

BIBLIO_SETUP = (
    ("CAiSEPapers", CAISE_FOLDER),
    ("SIGMODPapers", SIGMOD_FOLDER),
    ("SIGMOD08", PROCEEDINGS_FOLDERS[0]),
    ("SIGMOD09", PROCEEDINGS_FOLDERS[1]),
    ("SIGMOD10", PROCEEDINGS_FOLDERS[2]),
    ("SIGMOD", SIGMOD_GROUP_FOLDER),
    ("p2p1Path", CITATION_PATH),
)

BIBLIO_QUERIES = {
    "papers_by_type": PAPERS_BY_TYPE,
    "webpage_lookup": WEBPAGE_LOOKUP,
    "author_in_folder": AUTHOR_IN_FOLDER,
    "author_in_folder_union": AUTHOR_IN_FOLDER_UNION,
    "keyword_on_path": KEYWORD_ON_PATH,
}

# --- event-log fixture ---


def _window_folder(name: str, description: str, semester: str, phase: str) -> str:
    start, end = phase_range(semester, phase)
    return f"""\
fconstruct {name} as ?fn
select ?e
where {{
  ?fn @description '{description}'.
  ?e @type Event.
  ?e @timestamp ?date.
  FILTER (?date >= "{start.isoformat()}"^^xsd:date &&
  ?date <= "{end.isoformat()}"^^xsd:date).
}}
"""


BRAINSTORMING_FOLDER = """\
fconstruct brainstorming09s2 as ?fn
select ?e
where {
  ?fn @description 'related events from the brainstorming phase'.
  ?e @type Event.
  ?e @timestamp ?date.
  FILTER (?date > "2009-07-19"^^xsd:date &&
  ?date > "2009-08-08"^^xsd:date).
}
"""

TRIGGERED_UPDATE_ARTIFACTS = """\
(brainstorming09s2) apply (
select ?a
where {
  ?e @type 'Event'.
  ?e @activityType 'update'.
  ?e @ArtifactName ?a.
  ?e wasTriggeredBy ?x.
  ?x @type 'Event'.
  ?x @activityType 'comment'.
})
"""

PHASE_UNION_UPDATERS = """\
(brainstorming10s1 union design10s1) apply (
select ?u
where {
  ?e @type 'Event'.
  ?e @activityType 'update'.
  ?e @UseName ?u.
})
"""

DOC_CHAIN_PATH = """\
pconstruct myPathNode
(?startNode, ?endNode, (?e ?n)* ?e ?node ?e (?n ?e)*)
where {
  ?startNode @type 'Event'.
  ?startNode @activityType 'generate'.
  ?startNode @artifactName 'brainDoc.doc'.
  ?startNode @UserGroup 'project4'.
  ?startNode @timestamp ?date.
  ?endNode @type 'Event'.
  ?endNode @activityType 'generate'.
  ?endNode @artifactName 'designDoc.doc'.
  ?endNode @UserGroup 'project4'.
  ?endNode @timestamp ?date.
  ?n @isA 'entityNode'.
  ?n @type 'Event'.
  ?n @timestamp ?date.
  ?e @isA 'edge'.
  ?node @type 'Event'.
  ?node @activityType 'response'.
  ?node @layer 'Wiki'.
  ?node @layerPart 'bug'.
  ?node @timestamp ?date.
  FILTER (?date > "2009-07-19"^^xsd:date &&
  ?date > "2009-11-04"^^xsd:date).
}
"""

GENERATED_ON_PATH = """\
(myPathNode) apply (
select ?a
where {
  ?e @type 'Event'.
  ?e @activityType 'generate'.
  ?e @ArtifactName ?a.
})
"""

EVENTS_SETUP = (
    ("brainstorming09s2", BRAINSTORMING_FOLDER),
    ("brainstorming10s1",
     _window_folder("brainstorming10s1", "events in the 2010s1 brainstorming phase",
                    "10s1", "brainstorming")),
    ("design10s1",
     _window_folder("design10s1", "events in the 2010s1 design phase", "10s1", "design")),
    ("myPathNode", DOC_CHAIN_PATH),
)

EVENTS_QUERIES = {
    "triggered_update_artifacts": TRIGGERED_UPDATE_ARTIFACTS,
    "phase_union_updaters": PHASE_UNION_UPDATERS,
    "generated_on_path": GENERATED_ON_PATH,
}

ALL_QUERIES = dict(
    [(name, text) for name, text in BIBLIO_SETUP]
    + list(BIBLIO_QUERIES.items())
    + [(name, text) for name, text in EVENTS_SETUP]
    + list(EVENTS_QUERIES.items())
)

# Plain basic-graph-pattern queries (select bodies of the corpus), reusable on
# arbitrary stores for planner soundness checks.
SELECT_BODIES = {
    "papers_by_type": PAPERS_BY_TYPE,
    "webpage_lookup": WEBPAGE_LOOKUP,
    "author_select": AUTHOR_IN_FOLDER[AUTHOR_IN_FOLDER.index("select"):].rstrip().rstrip(")"),
    "keyword_select": KEYWORD_ON_PATH[KEYWORD_ON_PATH.index("select"):].rstrip().rstrip(")"),
    "triggered_select":
        TRIGGERED_UPDATE_ARTIFACTS[TRIGGERED_UPDATE_ARTIFACTS.index("select"):].rstrip().rstrip(")"),
    "updaters_select":
        PHASE_UNION_UPDATERS[PHASE_UNION_UPDATERS.index("select"):].rstrip().rstrip(")"),
    "generated_select":
        GENERATED_ON_PATH[GENERATED_ON_PATH.index("select"):].rstrip().rstrip(")"),
}
