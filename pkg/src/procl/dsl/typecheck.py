"""Type checker for PROCL.

Annotates every expression node with its result type (int, string or
bool) and rejects unknown bindings, unknown attributes, ill-typed
operators, shadowing quantifier variables, and rules whose expression is
not boolean.  Checking a whole SpecAst accumulates bindings along each
definition's extends chain, so rules may refer to inherited bindings.
"""

from __future__ import annotations

from typing import Mapping

from procl.errors import TypeCheckError
from procl.dsl import schema
from procl.dsl.nodes import (
    BinOp,
    Binding,
    BoolLit,
    CountExpr,
    ExistsEntity,
    Expr,
    IntLit,
    Not,
    OverrideRule,
    PathExpr,
    ProcessDef,
    Quantifier,
    RuleDef,
    SpecAst,
    StrLit,
)

_ORDER_OPS = ("<", "<=", ">", ">=")
_EQ_OPS = ("==", "!=")
_BOOL_OPS = ("and", "or", "implies")


def typecheck_expr(expr: Expr,
                   bindings: Mapping[str, str],
                   _vars: Mapping[str, str] | None = None) -> str:
    """Check `expr` against a binding table (name -> binding kind).

    Returns the result type and annotates `expr.ty` in place, including
    all sub-expressions.  `_vars` maps quantifier variables in scope to
    their element entity kind.
    """
    vars_in_scope = dict(_vars or {})
    ty = _check(expr, bindings, vars_in_scope)
    return ty


def _fail(msg: str, node) -> TypeCheckError:
    return TypeCheckError(msg, node.line, node.col)


def _check(expr: Expr, bindings: Mapping[str, str], vars_: dict[str, str]) -> str:
    if isinstance(expr, IntLit):
        expr.ty = "int"
    elif isinstance(expr, StrLit):
        expr.ty = "string"
    elif isinstance(expr, BoolLit):
        expr.ty = "bool"
    elif isinstance(expr, PathExpr):
        expr.ty = _check_path(expr, bindings, vars_)
    elif isinstance(expr, Not):
        if _check(expr.operand, bindings, vars_) != "bool":
            raise _fail("'not' needs a boolean operand", expr)
        expr.ty = "bool"
    elif isinstance(expr, BinOp):
        expr.ty = _check_binop(expr, bindings, vars_)
    elif isinstance(expr, Quantifier):
        expr.ty = _check_quantifier(expr, bindings, vars_)
    elif isinstance(expr, CountExpr):
        _collection_kind(expr.collection, expr, bindings, vars_)
        expr.ty = "int"
    elif isinstance(expr, ExistsEntity):
        if expr.binding not in bindings:
            raise _fail(f"unknown binding '{expr.binding}'", expr)
        expr.ty = "bool"
    else:
        raise _fail(f"unsupported expression node {type(expr).__name__}", expr)
    return expr.ty


def _check_binop(expr: BinOp, bindings, vars_) -> str:
    lt = _check(expr.left, bindings, vars_)
    rt = _check(expr.right, bindings, vars_)
    op = expr.op
    if op in ("+", "-"):
        if lt != "int" or rt != "int":
            raise _fail(f"'{op}' needs integer operands, got {lt} and {rt}", expr)
        return "int"
    if op in _ORDER_OPS:
        if lt != "int" or rt != "int":
            raise _fail(f"'{op}' compares integers, got {lt} and {rt}", expr)
        return "bool"
    if op in _EQ_OPS:
        if lt != rt:
            raise _fail(f"'{op}' needs operands of one type, got {lt} and {rt}",
                        expr)
        return "bool"
    if op in _BOOL_OPS:
        if lt != "bool" or rt != "bool":
            raise _fail(f"'{op}' needs boolean operands, got {lt} and {rt}", expr)
        return "bool"
    raise _fail(f"unknown operator '{op}'", expr)


def _check_quantifier(expr: Quantifier, bindings, vars_) -> str:
    if expr.var in bindings or expr.var in vars_:
        raise _fail(f"quantifier variable '{expr.var}' shadows an existing name",
                    expr)
    kind = _collection_kind(expr.collection, expr, bindings, vars_)
    element_kind, _ = schema.BINDING_TO_ENTITY[kind]
    inner = dict(vars_)
    inner[expr.var] = element_kind
    if _check(expr.body, bindings, inner) != "bool":
        raise _fail("quantifier body must be boolean", expr)
    return "bool"


def _collection_kind(parts: tuple[str, ...], node, bindings, vars_) -> str:
    if len(parts) != 1:
        raise _fail(f"'{'.'.join(parts)}' does not name a collection binding",
                    node)
    name = parts[0]
    if name in vars_:
        raise _fail(f"'{name}' is a quantifier variable, not a collection", node)
    kind = bindings.get(name)
    if kind is None:
        raise _fail(f"unknown binding '{name}'", node)
    if kind not in schema.COLLECTION_KINDS:
        raise _fail(f"binding '{name}' is a {kind}, not a collection", node)
    return kind


def _check_path(expr: PathExpr, bindings, vars_) -> str:
    head = expr.parts[0]
    if head in vars_:
        entity_kind = vars_[head]
        what = f"variable '{head}'"
    elif head in bindings:
        kind = bindings[head]
        if kind in schema.COLLECTION_KINDS:
            raise _fail(f"collection binding '{head}' cannot be used as a value",
                        expr)
        entity_kind, _ = schema.BINDING_TO_ENTITY[kind]
        what = f"binding '{head}'"
    else:
        raise _fail(f"unknown binding '{head}'", expr)
    if len(expr.parts) == 1:
        raise _fail(f"{what} needs an attribute (e.g. '{head}.start_time')",
                    expr)
    if len(expr.parts) > 2:
        raise _fail(f"'{'.'.join(expr.parts)}' nests too deep; entities have "
                    f"no entity-valued attributes", expr)
    attr = expr.parts[1]
    spec = schema.ATTRIBUTES[entity_kind].get(attr)
    if spec is None:
        raise _fail(f"unknown attribute '{attr}' on {entity_kind} {what}", expr)
    return spec.type


def _chain_bindings(process: ProcessDef,
                    registry: Mapping[str, ProcessDef]) -> dict[str, str]:
    """Bindings visible in `process`: its own plus all inherited ones."""
    chain: list[ProcessDef] = []
    seen: set[str] = set()
    current: ProcessDef | None = process
    while current is not None:
        if current.name in seen:
            raise TypeCheckError(
                f"cyclic extends chain through '{current.name}'",
                current.line, current.col)
        seen.add(current.name)
        chain.append(current)
        if current.extends is None:
            current = None
        else:
            parent = registry.get(current.extends)
            if parent is None:
                raise TypeCheckError(
                    f"unknown parent process '{current.extends}'",
                    current.line, current.col)
            current = parent
    table: dict[str, str] = {}
    for d in reversed(chain):
        for item in d.items:
            if isinstance(item, Binding):
                if item.name in table:
                    raise TypeCheckError(
                        f"binding '{item.name}' already declared",
                        item.line, item.col)
                table[item.name] = item.kind
    return table


def typecheck(ast: SpecAst,
              registry: Mapping[str, ProcessDef] | None = None) -> SpecAst:
    """Check every rule of every definition; returns the annotated ast.

    `registry` supplies definitions that extends-chains may reach outside
    this source file; the file's own definitions always take part.
    """
    combined: dict[str, ProcessDef] = dict(registry or {})
    for d in ast.defs:
        combined[d.name] = d
    for d in ast.defs:
        table = _chain_bindings(d, combined)
        for item in d.items:
            if isinstance(item, (RuleDef, OverrideRule)):
                ty = typecheck_expr(item.expr, table)
                if ty != "bool":
                    raise TypeCheckError(
                        f"rule '{item.name}' has type {ty}, not bool",
                        item.line, item.col)
    return ast
