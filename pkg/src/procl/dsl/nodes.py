"""AST node types for PROCL sources.

Source positions (and, on expressions, the inferred type) never take part
in equality: two trees compare equal iff they are structurally identical,
which is what the parse/pretty-print round-trip guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def _pos():
    return field(default=0, compare=False, repr=False)


@dataclass
class Expr:
    """Base class; concrete expressions carry `line`, `col` and, once
    typechecked, `ty` in {"int", "string", "bool"}."""


@dataclass
class IntLit(Expr):
    value: int
    line: int = _pos()
    col: int = _pos()
    ty: str | None = field(default=None, compare=False, repr=False)


@dataclass
class StrLit(Expr):
    value: str
    line: int = _pos()
    col: int = _pos()
    ty: str | None = field(default=None, compare=False, repr=False)


@dataclass
class BoolLit(Expr):
    value: bool
    line: int = _pos()
    col: int = _pos()
    ty: str | None = field(default=None, compare=False, repr=False)


@dataclass
class PathExpr(Expr):
    """Attribute path: binding or quantifier variable, then attributes."""

    parts: tuple[str, ...]
    line: int = _pos()
    col: int = _pos()
    ty: str | None = field(default=None, compare=False, repr=False)


@dataclass
class BinOp(Expr):
    """op in {+, -, <, <=, >, >=, ==, !=, and, or, implies}."""

    op: str
    left: Expr
    right: Expr
    line: int = _pos()
    col: int = _pos()
    ty: str | None = field(default=None, compare=False, repr=False)


@dataclass
class Not(Expr):
    operand: Expr
    line: int = _pos()
    col: int = _pos()
    ty: str | None = field(default=None, compare=False, repr=False)


@dataclass
class Quantifier(Expr):
    """kind in {"forall", "exists"}; collection names a collection binding."""

    kind: str
    var: str
    collection: tuple[str, ...]
    body: Expr
    line: int = _pos()
    col: int = _pos()
    ty: str | None = field(default=None, compare=False, repr=False)


@dataclass
class CountExpr(Expr):
    collection: tuple[str, ...]
    line: int = _pos()
    col: int = _pos()
    ty: str | None = field(default=None, compare=False, repr=False)


@dataclass
class ExistsEntity(Expr):
    binding: str
    line: int = _pos()
    col: int = _pos()
    ty: str | None = field(default=None, compare=False, repr=False)


@dataclass
class Binding:
    """`requires KIND name [optional];` item."""

    kind: str
    name: str
    optional: bool = False
    line: int = _pos()
    col: int = _pos()


@dataclass
class RuleDef:
    name: str
    expr: Expr
    optional: bool = False  # optional rules are advisory (mandatory=False)
    line: int = _pos()
    col: int = _pos()


@dataclass
class OverrideRule:
    name: str
    expr: Expr
    line: int = _pos()
    col: int = _pos()


@dataclass
class RemoveRule:
    name: str
    line: int = _pos()
    col: int = _pos()


Item = Binding | RuleDef | OverrideRule | RemoveRule


@dataclass
class ProcessDef:
    name: str
    extends: str | None
    items: tuple[Item, ...]
    line: int = _pos()
    col: int = _pos()

    @property
    def bindings(self) -> tuple[Binding, ...]:
        return tuple(i for i in self.items if isinstance(i, Binding))


@dataclass
class SpecAst:
    """A parsed PROCL source file: a sequence of process definitions."""

    defs: tuple[ProcessDef, ...]
