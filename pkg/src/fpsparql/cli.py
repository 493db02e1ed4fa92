"""Command-line front end: load triples, run queries (batch or REPL), explain
plans, export folder/path contents, generate fixtures, show store stats.

Exit codes: 0 success, 1 usage, 2 query parse error, 3 evaluation error,
4 I/O or store-format error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .engine import Engine, FolderResult, PathNodeResult, QueryResult, TableResult
from .errors import (
    EXIT_EVAL,
    EXIT_IO,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_USAGE,
    EngineError,
    QueryParseError,
    StoreFormatError,
)
from .datagen import gen_fixture
from .paths import SearchConfig
from .store import FORMAT_FILE, TripleStore


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="fpsparql", description=__doc__.splitlines()[0])
    parser.add_argument("--store", metavar="DIR",
                        help="store directory (required for every command but gen-fixture)")
    parser.add_argument("--explain", action="store_true",
                        help="print the query plan instead of executing")
    parser.add_argument("--max-edges", type=int, default=10, metavar="N",
                        help="path search edge bound (default 10)")
    parser.add_argument("--reachability", choices=("traversal", "closure"),
                        default="traversal", help="reachability strategy")
    parser.add_argument("--max-paths", type=int, default=None, metavar="N",
                        help="cap on stored paths per path node")
    parser.add_argument("--format", choices=("tsv",), default="tsv",
                        help="result format (tsv only)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("load", help="load a triple file into the store")
    p.add_argument("file")

    p = sub.add_parser("query", help="run one or more queries (';' line separates)")
    p.add_argument("text", nargs="?")
    p.add_argument("--file", dest="query_file")

    sub.add_parser("repl", help="interactive session; finish a statement with a lone ';'")

    p = sub.add_parser("export", help="write folder members or path contents to a file")
    p.add_argument("name")
    p.add_argument("file")

    p = sub.add_parser("explain", help="print the logical plan for a query")
    p.add_argument("text", nargs="?")
    p.add_argument("--file", dest="query_file")

    p = sub.add_parser("gen-fixture", help="generate a triple fixture file")
    p.add_argument("kind", choices=("biblio", "events"))
    p.add_argument("out")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--events", type=int, default=5000, dest="event_count")

    sub.add_parser("stats", help="print store row counts")
    return parser


def _config(opts: argparse.Namespace) -> SearchConfig:
    return SearchConfig(max_edges=opts.max_edges, reachability=opts.reachability,
                        max_paths=opts.max_paths)


def _open_engine(opts: argparse.Namespace, create: bool = False) -> Engine:
    directory = opts.store
    if os.path.isfile(os.path.join(directory, FORMAT_FILE)):
        return Engine.open(directory, _config(opts))
    if create:
        return Engine(TripleStore(), _config(opts))
    raise StoreFormatError(f"not a store directory: {directory}")


def _split_statements(text: str) -> list[str]:
    statements: list[str] = []
    current: list[str] = []
    for line in text.splitlines():
        if line.strip() == ";":
            if "".join(current).strip():
                statements.append("\n".join(current))
            current = []
        else:
            current.append(line)
    if "".join(current).strip():
        statements.append("\n".join(current))
    return statements


def _render(result: QueryResult) -> str:
    if isinstance(result, TableResult):
        return result.table.to_tsv()
    if isinstance(result, FolderResult):
        return f"folder {result.name} created: {result.member_count} members"
    suffix = " (truncated)" if result.truncated else ""
    return f"path node {result.name} created: {result.path_count} paths{suffix}"


def _run_statement(engine: Engine, opts: argparse.Namespace, text: str, out) -> bool:
    """Execute one statement; returns True when it mutated the store."""
    if opts.explain:
        print(engine.explain(text), file=out)
        return False
    result = engine.execute(text)
    print(_render(result), file=out)
    return isinstance(result, (FolderResult, PathNodeResult))


def _query_text(opts: argparse.Namespace) -> str:
    if opts.text is not None and opts.query_file:
        raise QueryParseError("give query text or --file, not both")
    if opts.text is not None:
        return opts.text
    if opts.query_file:
        with open(opts.query_file, encoding="utf-8") as fh:
            return fh.read()
    raise QueryParseError("no query given")


def cmd_load(opts: argparse.Namespace) -> int:
    engine = _open_engine(opts, create=True)
    with open(opts.file, encoding="utf-8") as fh:
        report = engine.load(fh)
    for lineno, reason in report.rejected_lines:
        print(f"line {lineno}: {reason}", file=sys.stderr)
    engine.persist(opts.store)
    print(report.summary())
    return EXIT_OK


def cmd_query(opts: argparse.Namespace) -> int:
    engine = _open_engine(opts)
    mutated = False
    for statement in _split_statements(_query_text(opts)):
        mutated = _run_statement(engine, opts, statement, sys.stdout) or mutated
    if mutated:
        engine.persist(opts.store)
    return EXIT_OK


def cmd_explain(opts: argparse.Namespace) -> int:
    engine = _open_engine(opts)
    for statement in _split_statements(_query_text(opts)):
        print(engine.explain(statement))
    return EXIT_OK


def cmd_repl(opts: argparse.Namespace) -> int:
    engine = _open_engine(opts)
    interactive = sys.stdin.isatty()
    current: list[str] = []
    while True:
        if interactive:
            sys.stdout.write("fpsparql> " if not current else "......... ")
            sys.stdout.flush()
        line = sys.stdin.readline()
        if not line:
            break
        if line.strip() != ";":
            current.append(line.rstrip("\n"))
            continue
        text = "\n".join(current)
        current = []
        if not text.strip():
            continue
        try:
            if _run_statement(engine, opts, text, sys.stdout):
                engine.persist(opts.store)
        except EngineError as exc:
            print(f"error: {exc}", file=sys.stderr)
        except NotImplementedError as exc:
            print(f"error: {exc}", file=sys.stderr)
    return EXIT_OK


def cmd_export(opts: argparse.Namespace) -> int:
    engine = _open_engine(opts)
    store = engine.store
    folder = store.folder_id(opts.name)
    path_node = store.path_node_id(opts.name)
    lines: list[str]
    if folder is not None:
        lines = sorted(store.members_of(folder, recursive=True))
    elif path_node is not None:
        lines = []
        for word in store.path_record(path_node).paths:
            parts = [word.nodes[0]]
            for i, (predicate, _) in enumerate(word.edges):
                parts.append(predicate)
                parts.append(word.nodes[i + 1])
            lines.append(" ".join(parts))
    else:
        raise EngineError(f"unknown folder or path node: {opts.name}")
    with open(opts.file, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")
    return EXIT_OK


def cmd_gen_fixture(opts: argparse.Namespace) -> int:
    text = gen_fixture(opts.kind, opts.seed, opts.event_count)
    with open(opts.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return EXIT_OK


def cmd_stats(opts: argparse.Namespace) -> int:
    engine = _open_engine(opts)
    for key, value in engine.stats().items():
        print(f"{key}\t{value}")
    return EXIT_OK


_COMMANDS = {
    "load": cmd_load,
    "query": cmd_query,
    "repl": cmd_repl,
    "export": cmd_export,
    "explain": cmd_explain,
    "gen-fixture": cmd_gen_fixture,
    "stats": cmd_stats,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    opts = parser.parse_args(argv)
    if opts.command != "gen-fixture" and not opts.store:
        parser.error("--store DIR is required")
    try:
        return _COMMANDS[opts.command](opts)
    except QueryParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (StoreFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EngineError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
