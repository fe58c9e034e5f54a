"""Python surface for the comp-typed language core.

Everything operates on source text: programs, schemas, type spellings and
SQL fragments go in as strings, results come back as plain dicts so callers
can inspect diagnostics, rewritten programs, runtime outcomes and artificial
queries without touching the C++ object model.
"""

from ._complang import (
    __version__,
    check,
    check_sql,
    is_subtype,
    join_types,
    normalize_type,
    run,
)

__all__ = [
    "__version__",
    "check",
    "check_sql",
    "is_subtype",
    "join_types",
    "normalize_type",
    "run",
]
