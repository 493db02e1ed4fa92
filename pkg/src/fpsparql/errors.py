"""Exception types and CLI exit codes shared across the engine."""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_EVAL = 3
EXIT_IO = 4


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class QueryParseError(EngineError):
    """Lexical or syntactic error in query text; carries a source position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class ValidationError(EngineError):
    """Input data or arguments violate a store invariant."""


class ConflictError(EngineError):
    """A name or id is already bound."""


class UnknownNameError(EngineError):
    """A folder, path node, or node id does not exist."""


class EvaluationError(EngineError):
    """A query failed during evaluation."""


class StoreFormatError(EngineError):
    """A persisted store directory is missing, corrupt, or has a different format version."""


class ReachabilityGuardError(EngineError):
    """Transitive-closure construction refused because the graph exceeds the node-count guard."""
