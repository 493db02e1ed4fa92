"""Embedded storage for the four stores: entity, graph, folder, and path.

Facts arrive as whitespace-tokenized triple lines and are routed by predicate
prefix: ``@``-prefixed predicates become attribute rows in the entity store,
everything else becomes relationship rows in the graph store. Folder records
snapshot the graph rows of their members (plus one ``@memberOf`` marker row
per member so edge-less members survive), and path records decompose each
stored path into (path_index, seq) element rows so the exact alternating
node/edge sequence can be rebuilt.

Indexes kept alongside the row sets:

- (attribute, value) -> subjects, backing ``scan_by_attribute``
- attribute -> subjects, for patterns that fix only the attribute
- (subject, attribute) -> values, for per-node constraint checks
- subject -> out rows, object -> in rows, predicate -> rows on the graph side

Concurrency: many concurrent readers OR one exclusive writer. All read
operations are safe to call from multiple threads; construction operations
(loads, inserts, folder/path creation) serialize on an internal lock and
commit atomically, so a failed construction leaves no partial records.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from .errors import ConflictError, StoreFormatError, UnknownNameError, ValidationError
from .values import (
    Atom,
    NodeId,
    TypedLiteral,
    Value,
    is_valid_literal,
    render_value,
    string_form,
)

ATTRIBUTE_PREFIX = "@"
MEMBER_MARKER = "@memberOf"
NESTING_PREDICATE = "partOf"
FOLDER_NAME_ATTRIBUTE = "@Name"
PATH_NAME_ATTRIBUTE = "@name"
EDGE_LABEL_ATTRIBUTE = "@label"
FOLDER_ID_PREFIX = "fnode."
PATH_ID_PREFIX = "pnode."

FORMAT_FILE = "version.txt"
FORMAT_LINE = "fpsparql-store/1"

ENTITY_FILE = "entity.tsv"
GRAPH_FILE = "graph.tsv"
FOLDER_FILE = "folder.tsv"
PATH_FILE = "path.tsv"


@dataclass(frozen=True, slots=True)
class AttributeRow:
    """One entity-store fact: subject has @-prefixed attribute with value."""

    subject: NodeId
    attribute: str
    value: Value


@dataclass(frozen=True, slots=True)
class RelationshipRow:
    """One graph-store fact: a directed, labeled edge between two nodes.

    ``edge_id`` reifies the edge as a node of its own; when present, the
    entity store also holds (edge_id, @label, predicate).
    """

    subject: NodeId
    predicate: str
    object: NodeId
    edge_id: NodeId | None = None


@dataclass(frozen=True, slots=True)
class PathWord:
    """One concrete path: k+1 nodes joined by k labeled edges (k >= 1)."""

    nodes: tuple[NodeId, ...]
    edges: tuple[tuple[str, NodeId | None], ...]

    def length(self) -> int:
        return len(self.edges)

    def node_set(self) -> frozenset[NodeId]:
        return frozenset(self.nodes)


@dataclass(frozen=True)
class FolderRecord:
    """A named snapshot grouping of member nodes, possibly nesting folders."""

    folder_id: NodeId
    name: str
    attrs: frozenset[AttributeRow]
    member_rows: frozenset[tuple[NodeId, NodeId, str, str]]
    child_folders: frozenset[NodeId]

    def members(self) -> frozenset[NodeId]:
        return frozenset(s for _, s, p, _ in self.member_rows if p == MEMBER_MARKER)


@dataclass(frozen=True)
class PathRecord:
    """A named set of stored paths plus their flattened element rows."""

    path_node_id: NodeId
    name: str
    paths: tuple[PathWord, ...]
    element_rows: frozenset[tuple[NodeId, int, int, NodeId, str, NodeId]]


@dataclass
class LoadReport:
    """Outcome of one bulk load; every counted line lands in one bucket."""

    triples_read: int = 0
    attribute_rows: int = 0
    relationship_rows: int = 0
    rejected_lines: list[tuple[int, str]] = field(default_factory=list)

    def summary(self) -> str:
        return (
            f"loaded {self.triples_read} triples: {self.attribute_rows} attributes, "
            f"{self.relationship_rows} relationships, {len(self.rejected_lines)} rejected"
        )


@dataclass
class ScanCounters:
    """Rows enumerated by scans since the last reset."""

    entity_rows: int = 0
    graph_rows: int = 0

    def reset(self) -> None:
        self.entity_rows = 0
        self.graph_rows = 0


def _check_token(token: str, what: str) -> None:
    if not token:
        raise ValidationError(f"{what} must be non-empty")
    if any(ch.isspace() for ch in token):
        raise ValidationError(f"{what} must not contain whitespace: {token!r}")


# --- object-token parsing (shared by the triple loader and TSV reload) ---


def parse_object_token(text: str) -> tuple[Value, str]:
    """Parse one object token from ``text``; return (value, remaining text).

    Accepts a bare run of non-whitespace, a quoted string with backslash
    escapes, or a quoted string followed by ^^datatype.
    """
    if not text:
        raise ValidationError("empty object")
    if text[0] in "\"'":
        quote = text[0]
        out = []
        i = 1
        while i < len(text):
            ch = text[i]
            if ch == "\\":
                if i + 1 >= len(text):
                    raise ValidationError("unterminated escape")
                nxt = text[i + 1]
                rep = {"\\": "\\", '"': '"', "'": "'", "t": "\t", "n": "\n", "r": "\r"}.get(nxt)
                if rep is None:
                    raise ValidationError(f"unknown escape \\{nxt}")
                out.append(rep)
                i += 2
                continue
            if ch == quote:
                rest = text[i + 1 :]
                if rest.startswith("^^") or rest.lstrip(" \t").startswith("^^"):
                    rest = rest.lstrip(" \t")[2:].lstrip(" \t")
                    dt = rest.split(None, 1)
                    datatype = dt[0] if dt else ""
                    if not datatype:
                        raise ValidationError("missing datatype after ^^")
                    remaining = rest[len(datatype) :]
                    return TypedLiteral("".join(out), datatype), remaining
                return Atom("".join(out)), rest
            out.append(ch)
            i += 1
        raise ValidationError("unterminated quote")
    parts = text.split(None, 1)
    return Atom(parts[0]), parts[1] if len(parts) > 1 else ""


def _parse_triple_line(line: str) -> tuple[str, str, Value]:
    parts = line.split(None, 1)
    if len(parts) < 2:
        raise ValidationError("fewer than 3 tokens")
    subject = parts[0]
    if subject[0] in "\"'":
        raise ValidationError("subject must be a bare identifier")
    parts = parts[1].split(None, 1)
    if len(parts) < 2:
        raise ValidationError("fewer than 3 tokens")
    predicate = parts[0]
    if predicate[0] in "\"'":
        raise ValidationError("predicate must be a bare identifier")
    value, rest = parse_object_token(parts[1].strip())
    rest = rest.strip()
    if rest != ".":
        raise ValidationError("missing terminating ' .'" if not rest else f"trailing input {rest!r}")
    if not is_valid_literal(value):
        raise ValidationError(f"invalid xsd:date literal {string_form(value)!r}")
    return subject, predicate, value


class TripleStore:
    """In-memory store behind the query engine; persists to a TSV directory."""

    def __init__(self) -> None:
        self._entity_rows: set[AttributeRow] = set()
        self._graph_rows: set[RelationshipRow] = set()
        self._attr_index: dict[tuple[str, Value], set[NodeId]] = {}
        self._attr_subjects: dict[str, set[NodeId]] = {}
        self._subject_values: dict[tuple[NodeId, str], set[Value]] = {}
        self._out: dict[NodeId, set[RelationshipRow]] = {}
        self._in: dict[NodeId, set[RelationshipRow]] = {}
        self._pred_index: dict[str, set[RelationshipRow]] = {}
        self._nodes: set[NodeId] = set()
        self._folders: dict[NodeId, FolderRecord] = {}
        self._paths: dict[NodeId, PathRecord] = {}
        self._names: dict[str, NodeId] = {}  # folder and path names share one namespace
        self._write_lock = threading.Lock()
        self.counters = ScanCounters()

    # --- basic row access ---

    def entity_rows(self) -> frozenset[AttributeRow]:
        return frozenset(self._entity_rows)

    def graph_rows(self) -> frozenset[RelationshipRow]:
        return frozenset(self._graph_rows)

    def entity_size(self) -> int:
        return len(self._entity_rows)

    def graph_size(self) -> int:
        return len(self._graph_rows)

    def nodes(self) -> frozenset[NodeId]:
        return frozenset(self._nodes)

    def is_node(self, node: NodeId) -> bool:
        return node in self._nodes

    # --- inserts ---

    def _insert_attribute_nolock(self, row: AttributeRow) -> None:
        self._entity_rows.add(row)
        self._attr_index.setdefault((row.attribute, row.value), set()).add(row.subject)
        self._attr_subjects.setdefault(row.attribute, set()).add(row.subject)
        self._subject_values.setdefault((row.subject, row.attribute), set()).add(row.value)
        self._nodes.add(row.subject)

    def _insert_relationship_nolock(self, row: RelationshipRow) -> None:
        self._graph_rows.add(row)
        self._out.setdefault(row.subject, set()).add(row)
        self._in.setdefault(row.object, set()).add(row)
        self._pred_index.setdefault(row.predicate, set()).add(row)
        self._nodes.add(row.subject)
        self._nodes.add(row.object)
        if row.edge_id is not None:
            self._insert_attribute_nolock(
                AttributeRow(row.edge_id, EDGE_LABEL_ATTRIBUTE, Atom(row.predicate))
            )

    @staticmethod
    def _validate_attribute(row: AttributeRow) -> None:
        _check_token(row.subject, "subject")
        _check_token(row.attribute, "attribute")
        if not row.attribute.startswith(ATTRIBUTE_PREFIX) or len(row.attribute) < 2:
            raise ValidationError(f"attribute must start with '@': {row.attribute!r}")
        if not is_valid_literal(row.value):
            raise ValidationError(f"invalid xsd:date literal {string_form(row.value)!r}")

    @staticmethod
    def _validate_relationship(row: RelationshipRow) -> None:
        _check_token(row.subject, "subject")
        _check_token(row.predicate, "predicate")
        _check_token(row.object, "object")
        if row.predicate.startswith(ATTRIBUTE_PREFIX):
            raise ValidationError(f"relationship predicate must not start with '@': {row.predicate!r}")
        if row.edge_id is not None:
            _check_token(row.edge_id, "edge_id")

    def insert_attribute(self, row: AttributeRow) -> None:
        """Add one attribute row; idempotent."""
        self._validate_attribute(row)
        with self._write_lock:
            self._insert_attribute_nolock(row)

    def insert_relationship(self, row: RelationshipRow) -> None:
        """Add one relationship row; idempotent. A reified edge also gets its @label row."""
        self._validate_relationship(row)
        with self._write_lock:
            self._insert_relationship_nolock(row)

    # --- bulk load ---

    def load_triples(self, source: TextIO) -> LoadReport:
        """Load the triple text format: one ``subject predicate object .`` per line.

        Lines starting with '#' and blank lines are skipped. Malformed lines
        are recorded in the report and never abort the load.
        """
        report = LoadReport()
        staged_attrs: list[AttributeRow] = []
        staged_rels: list[RelationshipRow] = []
        for lineno, raw in enumerate(source, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            report.triples_read += 1
            try:
                subject, predicate, value = _parse_triple_line(line)
                if predicate.startswith(ATTRIBUTE_PREFIX):
                    row = AttributeRow(subject, predicate, value)
                    self._validate_attribute(row)
                    staged_attrs.append(row)
                    report.attribute_rows += 1
                else:
                    if not isinstance(value, Atom):
                        raise ValidationError("relationship object must be a node id")
                    rel = RelationshipRow(subject, predicate, value.text)
                    self._validate_relationship(rel)
                    staged_rels.append(rel)
                    report.relationship_rows += 1
            except ValidationError as exc:
                report.rejected_lines.append((lineno, str(exc)))
        with self._write_lock:
            for row in staged_attrs:
                self._insert_attribute_nolock(row)
            for rel in staged_rels:
                self._insert_relationship_nolock(rel)
        return report

    # --- indexed reads ---

    def scan_by_attribute(self, attribute: str, value: Value) -> frozenset[NodeId]:
        """Subjects holding the exact (attribute, value) pair; empty when unknown."""
        return frozenset(self._attr_index.get((attribute, value), ()))

    def subjects_with_attribute(self, attribute: str) -> frozenset[NodeId]:
        return frozenset(self._attr_subjects.get(attribute, ()))

    def attribute_values(self, subject: NodeId, attribute: str) -> frozenset[Value]:
        return frozenset(self._subject_values.get((subject, attribute), ()))

    def has_attribute(self, subject: NodeId, attribute: str, value: Value) -> bool:
        return value in self._subject_values.get((subject, attribute), ())

    def out_edges(self, subject: NodeId) -> frozenset[RelationshipRow]:
        return frozenset(self._out.get(subject, ()))

    def out_degree(self, subject: NodeId) -> int:
        return len(self._out.get(subject, ()))

    def in_edges(self, obj: NodeId) -> frozenset[RelationshipRow]:
        return frozenset(self._in.get(obj, ()))

    def rows_with_predicate(self, predicate: str) -> frozenset[RelationshipRow]:
        return frozenset(self._pred_index.get(predicate, ()))

    def predicate_count(self, predicate: str) -> int:
        return len(self._pred_index.get(predicate, ()))

    def attribute_pair_count(self, attribute: str, value: Value) -> int:
        return len(self._attr_index.get((attribute, value), ()))

    def has_relationship(self, subject: NodeId, predicate: str, obj: NodeId,
                         edge_id: NodeId | None = None) -> bool:
        rows = self._out.get(subject, ())
        if edge_id is None:
            return any(r.predicate == predicate and r.object == obj for r in rows)
        return RelationshipRow(subject, predicate, obj, edge_id) in self._graph_rows

    # internal iterators used by scans; counting happens at the call site
    def iter_out(self, subject: NodeId) -> Iterator[RelationshipRow]:
        return iter(self._out.get(subject, ()))

    def iter_in(self, obj: NodeId) -> Iterator[RelationshipRow]:
        return iter(self._in.get(obj, ()))

    def iter_pred(self, predicate: str) -> Iterator[RelationshipRow]:
        return iter(self._pred_index.get(predicate, ()))

    def iter_graph(self) -> Iterator[RelationshipRow]:
        return iter(self._graph_rows)

    def iter_entity(self) -> Iterator[AttributeRow]:
        return iter(self._entity_rows)

    # --- folders ---

    def folder_id(self, name: str) -> NodeId | None:
        node = self._names.get(name)
        return node if node in self._folders else None

    def path_node_id(self, name: str) -> NodeId | None:
        node = self._names.get(name)
        return node if node in self._paths else None

    def folder(self, folder: NodeId) -> FolderRecord:
        try:
            return self._folders[folder]
        except KeyError:
            raise UnknownNameError(f"unknown folder: {folder}") from None

    def path_record(self, path_node: NodeId) -> PathRecord:
        try:
            return self._paths[path_node]
        except KeyError:
            raise UnknownNameError(f"unknown path node: {path_node}") from None

    def folders(self) -> dict[NodeId, FolderRecord]:
        return dict(self._folders)

    def path_records(self) -> dict[NodeId, PathRecord]:
        return dict(self._paths)

    def _claim_name(self, name: str, node: NodeId) -> None:
        _check_token(name, "name")
        if name in self._names:
            raise ConflictError(f"name already bound: {name}")
        if node in self._nodes or node in self._folders or node in self._paths:
            raise ConflictError(f"node id already in use: {node}")
        self._names[name] = node

    def create_folder(self, name: str, attrs: Iterable[tuple[str, Value]] = (),
                      members: Iterable[NodeId] = ()) -> NodeId:
        """Materialize a folder: snapshot members' graph rows plus marker rows.

        Writes the folder's @Name (and any supplied attributes) to the entity
        store and returns the generated folder node id.
        """
        member_set = frozenset(members)
        for m in member_set:
            if m not in self._nodes:
                raise UnknownNameError(f"unknown member node: {m}")
        with self._write_lock:
            folder_id = FOLDER_ID_PREFIX + name
            self._claim_name(name, folder_id)
            attr_rows = {AttributeRow(folder_id, FOLDER_NAME_ATTRIBUTE, Atom(name))}
            for attribute, value in attrs:
                row = AttributeRow(folder_id, attribute, value)
                self._validate_attribute(row)
                attr_rows.add(row)
            member_rows = set()
            for m in member_set:
                member_rows.add((folder_id, m, MEMBER_MARKER, folder_id))
                for edge in self._out.get(m, ()):
                    member_rows.add((folder_id, edge.subject, edge.predicate, edge.object))
            for row in attr_rows:
                self._insert_attribute_nolock(row)
            record = FolderRecord(folder_id, name, frozenset(attr_rows),
                                  frozenset(member_rows), frozenset())
            self._folders[folder_id] = record
            return folder_id

    def create_folder_of_folders(self, name: str, attrs: Iterable[tuple[str, Value]] = (),
                                 children: Iterable[str] = ()) -> NodeId:
        """Group existing folders under a new one via partOf edges."""
        child_names = list(children)
        child_ids = []
        for child in child_names:
            if child == name:
                raise ValidationError(f"folder {name!r} cannot nest under itself")
            node = self.folder_id(child)
            if node is None:
                raise UnknownNameError(f"unknown child folder: {child}")
            child_ids.append(node)
        with self._write_lock:
            folder_id = FOLDER_ID_PREFIX + name
            self._claim_name(name, folder_id)
            attr_rows = {AttributeRow(folder_id, FOLDER_NAME_ATTRIBUTE, Atom(name))}
            for attribute, value in attrs:
                row = AttributeRow(folder_id, attribute, value)
                self._validate_attribute(row)
                attr_rows.add(row)
            for row in attr_rows:
                self._insert_attribute_nolock(row)
            for child_id in child_ids:
                self._insert_relationship_nolock(
                    RelationshipRow(child_id, NESTING_PREDICATE, folder_id)
                )
            record = FolderRecord(folder_id, name, frozenset(attr_rows),
                                  frozenset(), frozenset(child_ids))
            self._folders[folder_id] = record
            return folder_id

    def members_of(self, folder: NodeId, recursive: bool = False) -> frozenset[NodeId]:
        """Direct members, or the union over all descendant folders' members."""
        record = self.folder(folder)
        if not recursive:
            return record.members()
        members: set[NodeId] = set()
        seen: set[NodeId] = set()
        stack = [folder]
        while stack:
            fid = stack.pop()
            if fid in seen:
                continue
            seen.add(fid)
            rec = self._folders[fid]
            members |= rec.members()
            stack.extend(rec.child_folders)
        return frozenset(members)

    def folder_nesting_edges(self) -> frozenset[tuple[NodeId, NodeId]]:
        """(child, parent) pairs of the folder nesting graph."""
        return frozenset(
            (child, fid)
            for fid, rec in self._folders.items()
            for child in rec.child_folders
        )

    # --- path nodes ---

    def create_path_node(self, name: str, attrs: Iterable[tuple[str, Value]] = (),
                         paths: Iterable[PathWord] = ()) -> NodeId:
        """Store a named set of paths, validated edge-by-edge against the graph."""
        words = tuple(paths)
        for word in words:
            if len(word.edges) < 1 or len(word.nodes) != len(word.edges) + 1:
                raise ValidationError("a path needs k+1 nodes and k >= 1 edges")
            for i, (predicate, edge_id) in enumerate(word.edges):
                if not self.has_relationship(word.nodes[i], predicate, word.nodes[i + 1], edge_id):
                    raise ValidationError(
                        f"path references a non-existent edge: "
                        f"{word.nodes[i]} {predicate} {word.nodes[i + 1]}"
                    )
        with self._write_lock:
            path_id = PATH_ID_PREFIX + name
            self._claim_name(name, path_id)
            attr_rows = {AttributeRow(path_id, PATH_NAME_ATTRIBUTE, Atom(name))}
            for attribute, value in attrs:
                row = AttributeRow(path_id, attribute, value)
                self._validate_attribute(row)
                attr_rows.add(row)
            element_rows = set()
            for index, word in enumerate(words):
                for seq, (predicate, _) in enumerate(word.edges):
                    element_rows.add(
                        (path_id, index, seq, word.nodes[seq], predicate, word.nodes[seq + 1])
                    )
            for row in attr_rows:
                self._insert_attribute_nolock(row)
            record = PathRecord(path_id, name, words, frozenset(element_rows))
            self._paths[path_id] = record
            return path_id

    def elements_of(self, path_node: NodeId) -> frozenset[NodeId]:
        """Every node occurring in any stored path of the path node."""
        record = self.path_record(path_node)
        out: set[NodeId] = set()
        for _, _, _, subject, _, obj in record.element_rows:
            out.add(subject)
            out.add(obj)
        return frozenset(out)

    # --- persistence ---

    def persist(self, directory: str) -> None:
        """Write the four stores as sorted TSV files plus a format marker."""
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, FORMAT_FILE), "w", encoding="utf-8") as fh:
            fh.write(FORMAT_LINE + "\n")
        self._write_tsv(
            os.path.join(directory, ENTITY_FILE),
            "subject\tattribute\tvalue",
            (f"{r.subject}\t{r.attribute}\t{render_value(r.value)}" for r in self._entity_rows),
        )
        self._write_tsv(
            os.path.join(directory, GRAPH_FILE),
            "subject\tpredicate\tobject\tedge_id",
            (
                f"{r.subject}\t{r.predicate}\t{r.object}\t{r.edge_id or ''}"
                for r in self._graph_rows
            ),
        )
        self._write_tsv(
            os.path.join(directory, FOLDER_FILE),
            "folder_id\tsubject\tpredicate\tobject",
            (
                "\t".join(row)
                for rec in self._folders.values()
                for row in rec.member_rows
            ),
        )
        self._write_tsv(
            os.path.join(directory, PATH_FILE),
            "path_node_id\tpath_index\tseq\tsubject\tpredicate\tobject",
            (
                f"{pid}\t{index}\t{seq}\t{s}\t{p}\t{o}"
                for rec in self._paths.values()
                for (pid, index, seq, s, p, o) in rec.element_rows
            ),
        )

    @staticmethod
    def _write_tsv(path: str, header: str, lines: Iterable[str]) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header + "\n")
            for line in sorted(lines):
                fh.write(line + "\n")

    @classmethod
    def open(cls, directory: str) -> "TripleStore":
        """Rebuild a store (rows, indexes, folder and path registries) from disk."""
        marker = os.path.join(directory, FORMAT_FILE)
        if not os.path.isfile(marker):
            raise StoreFormatError(f"not a store directory (missing {FORMAT_FILE}): {directory}")
        with open(marker, encoding="utf-8") as fh:
            line = fh.readline().strip()
        if line != FORMAT_LINE:
            raise StoreFormatError(f"unsupported store format {line!r} (expected {FORMAT_LINE!r})")
        store = cls()
        for cols in cls._read_tsv(os.path.join(directory, ENTITY_FILE), 3):
            subject, attribute, rendered = cols
            value, rest = parse_object_token(rendered)
            if rest.strip():
                raise StoreFormatError(f"bad entity value field: {rendered!r}")
            store._insert_attribute_nolock(AttributeRow(subject, attribute, value))
        for cols in cls._read_tsv(os.path.join(directory, GRAPH_FILE), 4):
            subject, predicate, obj, edge_id = cols
            store._insert_relationship_nolock(
                RelationshipRow(subject, predicate, obj, edge_id or None)
            )
        folder_rows: dict[NodeId, set[tuple[NodeId, NodeId, str, str]]] = {}
        for cols in cls._read_tsv(os.path.join(directory, FOLDER_FILE), 4):
            folder_rows.setdefault(cols[0], set()).add(tuple(cols))
        path_elements: dict[NodeId, set[tuple[NodeId, int, int, NodeId, str, NodeId]]] = {}
        for cols in cls._read_tsv(os.path.join(directory, PATH_FILE), 6):
            pid, index, seq, s, p, o = cols
            try:
                row = (pid, int(index), int(seq), s, p, o)
            except ValueError as exc:
                raise StoreFormatError(f"bad path row: {cols!r}") from exc
            path_elements.setdefault(pid, set()).add(row)
        store._recover_registries(folder_rows, path_elements)
        return store

    def _recover_registries(
        self,
        folder_rows: dict[NodeId, set[tuple[NodeId, NodeId, str, str]]],
        path_elements: dict[NodeId, set[tuple[NodeId, int, int, NodeId, str, NodeId]]],
    ) -> None:
        folder_ids = {
            row.subject
            for row in self._entity_rows
            if row.attribute == FOLDER_NAME_ATTRIBUTE
            and isinstance(row.value, Atom)
            and row.subject == FOLDER_ID_PREFIX + row.value.text
        }
        path_ids = {
            row.subject
            for row in self._entity_rows
            if row.attribute == PATH_NAME_ATTRIBUTE
            and isinstance(row.value, Atom)
            and row.subject == PATH_ID_PREFIX + row.value.text
        }
        for fid in sorted(folder_ids):
            name = fid[len(FOLDER_ID_PREFIX):]
            attrs = frozenset(r for r in self._entity_rows if r.subject == fid)
            children = frozenset(
                r.subject
                for r in self._in.get(fid, ())
                if r.predicate == NESTING_PREDICATE and r.subject in folder_ids
            )
            record = FolderRecord(fid, name, attrs,
                                  frozenset(folder_rows.get(fid, ())), children)
            self._folders[fid] = record
            self._names[name] = fid
        for pid in sorted(path_ids):
            name = pid[len(PATH_ID_PREFIX):]
            rows = path_elements.get(pid, set())
            by_index: dict[int, list[tuple[int, NodeId, str, NodeId]]] = {}
            for _, index, seq, s, p, o in rows:
                by_index.setdefault(index, []).append((seq, s, p, o))
            words = []
            for index in sorted(by_index):
                steps = sorted(by_index[index])
                nodes = [steps[0][1]]
                edges = []
                for seq, s, p, o in steps:
                    if seq != len(edges) or s != nodes[-1]:
                        raise StoreFormatError(f"non-contiguous path rows for {pid}")
                    edges.append((p, None))
                    nodes.append(o)
                words.append(PathWord(tuple(nodes), tuple(edges)))
            record = PathRecord(pid, name, tuple(words), frozenset(rows))
            self._paths[pid] = record
            self._names[name] = pid

    @staticmethod
    def _read_tsv(path: str, width: int) -> Iterator[list[str]]:
        if not os.path.isfile(path):
            raise StoreFormatError(f"missing store file: {path}")
        with open(path, encoding="utf-8") as fh:
            header = fh.readline()
            if not header:
                raise StoreFormatError(f"empty store file: {path}")
            for raw in fh:
                line = raw.rstrip("\n")
                if not line:
                    continue
                cols = line.split("\t")
                if len(cols) != width:
                    raise StoreFormatError(f"bad row in {os.path.basename(path)}: {line!r}")
                yield cols
