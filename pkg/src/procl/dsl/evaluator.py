"""Three-valued evaluator for typechecked PROCL expressions.

Recorded project data is routinely incomplete: an optional phase may be
absent, a running phase has no end time yet, a meeting may not belong to
any sprint.  Rather than failing, evaluation produces a third value,
Undetermined, carrying a human-readable reason, and combines values with
Kleene logic:

    false and U = false        true or U = true
    true  and U = U            false or U = U
    not U = U                  x implies y = (not x) or y

Comparisons and arithmetic propagate Undetermined from their operands.
Quantifiers fold their bodies with the Kleene connectives over the bound
collection (a single false element settles a forall even when other
elements are undetermined).  `exists_entity` only inspects whether a
binding matched, so it is always a plain boolean.

Evaluation is total on typechecked input: it never raises.  Environments
are never mutated, so independent rules can be evaluated concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from procl.dsl import schema
from procl.dsl.nodes import (
    BinOp,
    BoolLit,
    CountExpr,
    ExistsEntity,
    Expr,
    IntLit,
    Not,
    PathExpr,
    Quantifier,
    StrLit,
)


class Value:
    """Result of evaluating an expression."""

    __slots__ = ()


@dataclass(frozen=True)
class Int(Value):
    value: int


@dataclass(frozen=True)
class Str(Value):
    value: str


@dataclass(frozen=True)
class Bool(Value):
    value: bool


@dataclass(frozen=True)
class Undetermined(Value):
    reason: str


@dataclass(frozen=True)
class BoundEntity:
    """A single entity bound to a name, tagged with its schema kind."""

    entity_kind: str
    entity: object


@dataclass(frozen=True)
class BoundCollection:
    entity_kind: str
    entities: tuple


@dataclass(frozen=True)
class AbsentEntity:
    """Marks an unmatched binding; the reason explains why it is absent."""

    entity_kind: str
    reason: str


EnvEntry = BoundEntity | BoundCollection | AbsentEntity


@dataclass(frozen=True)
class Environment:
    """Binding table an expression is evaluated against.

    Collection bindings are always present (possibly empty); single-entity
    bindings may be AbsentEntity.  `project` is the source project, kept
    for report rendering; evaluation itself never touches it.
    """

    bindings: Mapping[str, EnvEntry]
    project: object = None
    _vars: Mapping[str, BoundEntity] = field(default_factory=dict)

    def lookup(self, name: str) -> EnvEntry:
        entry = self._vars.get(name)
        if entry is None:
            entry = self.bindings.get(name)
        if entry is None:
            raise KeyError(f"name '{name}' is not bound in this environment")
        return entry

    def with_var(self, name: str, entry: BoundEntity) -> "Environment":
        inner = dict(self._vars)
        inner[name] = entry
        return replace(self, _vars=inner)


def _kleene_not(v: Value) -> Value:
    if isinstance(v, Undetermined):
        return v
    assert isinstance(v, Bool)
    return Bool(not v.value)


def _kleene_and(a: Value, b: Value) -> Value:
    if isinstance(a, Bool) and not a.value:
        return a
    if isinstance(b, Bool) and not b.value:
        return b
    if isinstance(a, Undetermined):
        return a
    if isinstance(b, Undetermined):
        return b
    return Bool(True)


def _kleene_or(a: Value, b: Value) -> Value:
    if isinstance(a, Bool) and a.value:
        return a
    if isinstance(b, Bool) and b.value:
        return b
    if isinstance(a, Undetermined):
        return a
    if isinstance(b, Undetermined):
        return b
    return Bool(False)


_COMPARE = {
    "<": lambda x, y: x < y,
    "<=": lambda x, y: x <= y,
    ">": lambda x, y: x > y,
    ">=": lambda x, y: x >= y,
    "==": lambda x, y: x == y,
    "!=": lambda x, y: x != y,
}


def eval_expr(expr: Expr, env: Environment) -> Value:
    """Evaluate a typechecked expression; total, never raises."""
    if isinstance(expr, IntLit):
        return Int(expr.value)
    if isinstance(expr, StrLit):
        return Str(expr.value)
    if isinstance(expr, BoolLit):
        return Bool(expr.value)
    if isinstance(expr, PathExpr):
        return _eval_path(expr, env)
    if isinstance(expr, Not):
        return _kleene_not(eval_expr(expr.operand, env))
    if isinstance(expr, BinOp):
        return _eval_binop(expr, env)
    if isinstance(expr, Quantifier):
        return _eval_quantifier(expr, env)
    if isinstance(expr, CountExpr):
        entry = env.lookup(expr.collection[0])
        assert isinstance(entry, BoundCollection)
        return Int(len(entry.entities))
    if isinstance(expr, ExistsEntity):
        entry = env.lookup(expr.binding)
        return Bool(not isinstance(entry, AbsentEntity))
    raise TypeError(f"cannot evaluate {type(expr).__name__}")


def _eval_path(expr: PathExpr, env: Environment) -> Value:
    entry = env.lookup(expr.parts[0])
    if isinstance(entry, AbsentEntity):
        return Undetermined(entry.reason)
    assert isinstance(entry, BoundEntity), "collection used as a value"
    attr = expr.parts[1]
    raw = schema.attribute_value(entry.entity_kind, entry.entity, attr)
    if raw is None:
        label = schema.ENTITY_LABEL[entry.entity_kind]
        ref = schema.entity_ref(entry.entity_kind, entry.entity)
        return Undetermined(f"{label} '{ref}' has no {attr} recorded")
    if schema.ATTRIBUTES[entry.entity_kind][attr].type == "int":
        return Int(raw)
    return Str(raw)


def _eval_binop(expr: BinOp, env: Environment) -> Value:
    op = expr.op
    left = eval_expr(expr.left, env)
    right = eval_expr(expr.right, env)
    if op == "and":
        return _kleene_and(left, right)
    if op == "or":
        return _kleene_or(left, right)
    if op == "implies":
        return _kleene_or(_kleene_not(left), right)
    # arithmetic and comparisons propagate the first undetermined operand
    if isinstance(left, Undetermined):
        return left
    if isinstance(right, Undetermined):
        return right
    if op == "+":
        return Int(left.value + right.value)
    if op == "-":
        return Int(left.value - right.value)
    return Bool(_COMPARE[op](left.value, right.value))


def quantifier_elements(expr: Quantifier, env: Environment):
    """Yield (entity, body value) pairs in collection order.

    Shared with the conformance layer, which uses it to pick the witness
    element of a violated top-level quantifier.
    """
    entry = env.lookup(expr.collection[0])
    assert isinstance(entry, BoundCollection)
    for entity in entry.entities:
        bound = BoundEntity(entry.entity_kind, entity)
        yield entity, eval_expr(expr.body, env.with_var(expr.var, bound))


def _eval_quantifier(expr: Quantifier, env: Environment) -> Value:
    first_undetermined: Undetermined | None = None
    if expr.kind == "forall":
        for _, value in quantifier_elements(expr, env):
            if isinstance(value, Bool) and not value.value:
                return Bool(False)
            if isinstance(value, Undetermined) and first_undetermined is None:
                first_undetermined = value
        return first_undetermined or Bool(True)
    for _, value in quantifier_elements(expr, env):
        if isinstance(value, Bool) and value.value:
            return Bool(True)
        if isinstance(value, Undetermined) and first_undetermined is None:
            first_undetermined = value
    return first_undetermined or Bool(False)
