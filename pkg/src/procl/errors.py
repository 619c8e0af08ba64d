"""Exception hierarchy shared across the package.

Everything user-facing derives from ProclError so the CLI can map any
expected failure to exit status 2 in one place.
"""

from __future__ import annotations


class ProclError(Exception):
    """Base class for all errors raised by this package."""


class SourceError(ProclError):
    """An error anchored to a position in a PROCL source text."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class LexError(SourceError):
    """Illegal character or malformed literal."""


class ParseError(SourceError):
    """Token stream does not match the grammar."""


class TypeCheckError(SourceError):
    """Expression is ill-typed or references unknown bindings/attributes."""


class ResolveError(ProclError):
    """Process definition cannot be flattened (unknown name, cyclic
    extends chain, bad override/remove/add)."""


class LoadError(ProclError):
    """A trace document failed schema validation.

    Carries the full list of SchemaError records (see procl.ingest).
    """

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "; ".join(f"{e.path}: {e.message}" for e in self.errors[:5])
        more = "" if len(self.errors) <= 5 else f" (+{len(self.errors) - 5} more)"
        super().__init__(f"invalid trace document: {lines}{more}")


class BindingFailure(ProclError):
    """One or more process bindings could not be matched to the project."""

    def __init__(self, errors):
        self.errors = list(errors)
        detail = ", ".join(f"{e.binding} ({e.reason})" for e in self.errors)
        super().__init__(f"binding failure: {detail}")


class GenerationError(ProclError):
    """Trace generation gave up (process unsatisfiable under template)."""


class MutationError(ProclError):
    """No mutation from the catalog applies to the given project/process."""
