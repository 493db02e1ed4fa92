"""Engine facade: one store plus configuration, executing parsed query text."""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    ApplyQuery,
    FconstructQuery,
    PconstructQuery,
    QueryAst,
    SelectQuery,
    render_regex,
)
from .evaluator import (
    BindingTable,
    eval_apply,
    eval_fconstruct,
    eval_select,
    scope_context,
)
from .parser import parse
from .paths import SearchConfig, eval_pconstruct
from .planner import explain as render_plan, plan
from .store import LoadReport, NodeId, TripleStore


@dataclass(frozen=True)
class TableResult:
    table: BindingTable


@dataclass(frozen=True)
class FolderResult:
    name: str
    node_id: NodeId
    member_count: int


@dataclass(frozen=True)
class PathNodeResult:
    name: str
    node_id: NodeId
    path_count: int
    truncated: bool


QueryResult = TableResult | FolderResult | PathNodeResult


class Engine:
    """An embedded query engine over one triple store."""

    def __init__(self, store: TripleStore | None = None,
                 config: SearchConfig = SearchConfig()):
        self.store = store if store is not None else TripleStore()
        self.config = config

    @classmethod
    def open(cls, directory: str, config: SearchConfig = SearchConfig()) -> "Engine":
        return cls(TripleStore.open(directory), config)

    def persist(self, directory: str) -> None:
        self.store.persist(directory)

    def load(self, source) -> LoadReport:
        return self.store.load_triples(source)

    def execute(self, text: str) -> QueryResult:
        return self.execute_ast(parse(text))

    def execute_ast(self, query: QueryAst) -> QueryResult:
        if isinstance(query, SelectQuery):
            return TableResult(eval_select(query, self.store))
        if isinstance(query, ApplyQuery):
            return TableResult(eval_apply(query, self.store))
        if isinstance(query, FconstructQuery):
            node_id = eval_fconstruct(query, self.store)
            count = len(self.store.members_of(node_id, recursive=True))
            return FolderResult(query.folder_name, node_id, count)
        outcome = eval_pconstruct(query, self.store, self.config)
        return PathNodeResult(query.path_name, outcome.node_id,
                              outcome.path_count, outcome.truncated)

    def explain(self, text: str) -> str:
        """Render the logical plan for a query without executing it."""
        query = parse(text)
        if isinstance(query, SelectQuery):
            return render_plan(plan(query, self.store))
        if isinstance(query, ApplyQuery):
            ctx = scope_context(query.scope, query.inner, self.store)
            return render_plan(plan(query.inner, self.store, ctx))
        if isinstance(query, FconstructQuery):
            if query.member_var is None:
                return f"GroupFolders {query.folder_name} <- " + ", ".join(query.child_folders)
            inner = SelectQuery((query.member_var,), query.patterns, query.filters)
            head = f"ConstructFolder {query.folder_name}\n"
            return head + render_plan(plan(inner, self.store), indent=1)
        head = (f"ConstructPath {query.path_name} "
                f"start={query.start_var} end={query.end_var} "
                f"regex=({render_regex(query.regex)}) max_edges={self.config.max_edges}")
        return head

    def stats(self) -> dict[str, int]:
        return {
            "entity rows": self.store.entity_size(),
            "graph rows": self.store.graph_size(),
            "nodes": len(self.store.nodes()),
            "folders": len(self.store.folders()),
            "path nodes": len(self.store.path_records()),
        }
