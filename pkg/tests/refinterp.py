"""Naive reference interpreter: structural recursion, two-valued logic.

Operates on plain dict environments, independently of the production
evaluator and its Value machinery.  Only meaningful on fully determined
environments (no absent entities, no absent attributes).
"""

from __future__ import annotations

from procl.dsl import schema
from procl.dsl.evaluator import BoundCollection, BoundEntity, Environment
from procl.dsl.nodes import (
    BinOp,
    BoolLit,
    CountExpr,
    ExistsEntity,
    IntLit,
    Not,
    PathExpr,
    Quantifier,
    StrLit,
)


def plain_env(env: Environment) -> dict:
    """Re-encode an Environment as plain dicts and lists."""

    def entity_dict(entity_kind, entity):
        return {attr: getattr(entity, attr)
                for attr in schema.ATTRIBUTES[entity_kind]}

    out = {}
    for name, entry in env.bindings.items():
        if isinstance(entry, BoundEntity):
            out[name] = entity_dict(entry.entity_kind, entry.entity)
        elif isinstance(entry, BoundCollection):
            out[name] = [entity_dict(entry.entity_kind, e)
                         for e in entry.entities]
        else:
            out[name] = None  # absent
    return out


def ref_eval(expr, env: dict, vars_: dict | None = None):
    """Returns a plain int, str or bool."""
    vars_ = vars_ or {}
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, StrLit):
        return expr.value
    if isinstance(expr, BoolLit):
        return expr.value
    if isinstance(expr, PathExpr):
        head = expr.parts[0]
        entity = vars_[head] if head in vars_ else env[head]
        value = entity[expr.parts[1]]
        assert value is not None, "reference interpreter needs full data"
        return value
    if isinstance(expr, Not):
        return not ref_eval(expr.operand, env, vars_)
    if isinstance(expr, BinOp):
        a = ref_eval(expr.left, env, vars_)
        b = ref_eval(expr.right, env, vars_)
        return {
            "+": lambda: a + b,
            "-": lambda: a - b,
            "<": lambda: a < b,
            "<=": lambda: a <= b,
            ">": lambda: a > b,
            ">=": lambda: a >= b,
            "==": lambda: a == b,
            "!=": lambda: a != b,
            "and": lambda: a and b,
            "or": lambda: a or b,
            "implies": lambda: (not a) or b,
        }[expr.op]()
    if isinstance(expr, Quantifier):
        collection = env[expr.collection[0]]
        results = []
        for element in collection:
            inner = dict(vars_)
            inner[expr.var] = element
            results.append(ref_eval(expr.body, env, inner))
        return all(results) if expr.kind == "forall" else any(results)
    if isinstance(expr, CountExpr):
        return len(env[expr.collection[0]])
    if isinstance(expr, ExistsEntity):
        return env[expr.binding] is not None
    raise AssertionError(type(expr).__name__)
