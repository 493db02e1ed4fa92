"""Embedded graph query engine with stored folder and path nodes.

Facts are (subject, predicate, object) triples split across an entity store
(@-prefixed attribute edges) and a graph store (relationships). Queries are
SPARQL-style basic graph patterns extended with folder construction
(fconstruct), regular-expression path construction (pconstruct), and scoped
querying of stored folders/paths (apply).
"""

from .engine import Engine, FolderResult, PathNodeResult, QueryResult, TableResult
from .errors import (
    ConflictError,
    EngineError,
    EvaluationError,
    QueryParseError,
    ReachabilityGuardError,
    StoreFormatError,
    UnknownNameError,
    ValidationError,
)
from .evaluator import BindingTable, eval_apply, eval_fconstruct, eval_select, resolve_scope
from .parser import parse
from .paths import (
    PathAutomaton,
    SearchConfig,
    TransitiveClosure,
    build_closure,
    compile_path_regex,
    find_paths,
    make_reachability,
    reachable,
)
from .planner import ScopeContext, eliminate_redundancies, estimate_cardinality, plan
from .store import (
    AttributeRow,
    FolderRecord,
    LoadReport,
    PathRecord,
    PathWord,
    RelationshipRow,
    TripleStore,
)
from .values import Atom, TypedLiteral, Value

__all__ = [
    "Atom",
    "AttributeRow",
    "BindingTable",
    "ConflictError",
    "Engine",
    "EngineError",
    "EvaluationError",
    "FolderRecord",
    "FolderResult",
    "LoadReport",
    "PathAutomaton",
    "PathNodeResult",
    "PathRecord",
    "PathWord",
    "QueryParseError",
    "QueryResult",
    "ReachabilityGuardError",
    "RelationshipRow",
    "ScopeContext",
    "SearchConfig",
    "StoreFormatError",
    "TableResult",
    "TransitiveClosure",
    "TripleStore",
    "TypedLiteral",
    "UnknownNameError",
    "ValidationError",
    "Value",
    "build_closure",
    "compile_path_regex",
    "eliminate_redundancies",
    "estimate_cardinality",
    "eval_apply",
    "eval_fconstruct",
    "eval_select",
    "find_paths",
    "make_reachability",
    "parse",
    "plan",
    "reachable",
    "resolve_scope",
]
