"""Canonical formatter for PROCL trees.

pretty_print is deterministic and parse(pretty_print(ast)) is
structurally identical to ast: parentheses are emitted exactly where the
grammar needs them to reproduce the tree shape.
"""

from __future__ import annotations

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
    RemoveRule,
    RuleDef,
    SpecAst,
    StrLit,
)

_INDENT = "    "

# Binding tightness; higher binds tighter. Quantifiers are the loosest
# construct, atoms never need parentheses.
_LEVEL = {"implies": 1, "or": 2, "and": 3,
          "<": 5, "<=": 5, ">": 5, ">=": 5, "==": 5, "!=": 5,
          "+": 6, "-": 6}
_QUANT_LEVEL = 0
_NOT_LEVEL = 4
_ATOM_LEVEL = 7

# implies and comparisons are non-associative; the rest associate left.
_NON_ASSOC = frozenset(("implies", "<", "<=", ">", ">=", "==", "!="))


def _level(expr: Expr) -> int:
    if isinstance(expr, Quantifier):
        return _QUANT_LEVEL
    if isinstance(expr, Not):
        return _NOT_LEVEL
    if isinstance(expr, BinOp):
        return _LEVEL[expr.op]
    return _ATOM_LEVEL


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def expr_to_text(expr: Expr) -> str:
    """One-line canonical rendering of an expression."""
    return _render(expr, 0)


def _render(expr: Expr, min_level: int) -> str:
    text, level = _render_bare(expr)
    if level < min_level:
        return f"({text})"
    return text


def _render_bare(expr: Expr) -> tuple[str, int]:
    if isinstance(expr, IntLit):
        return str(expr.value), _ATOM_LEVEL
    if isinstance(expr, BoolLit):
        return ("true" if expr.value else "false"), _ATOM_LEVEL
    if isinstance(expr, StrLit):
        return f'"{_escape(expr.value)}"', _ATOM_LEVEL
    if isinstance(expr, PathExpr):
        return ".".join(expr.parts), _ATOM_LEVEL
    if isinstance(expr, CountExpr):
        return f"count({'.'.join(expr.collection)})", _ATOM_LEVEL
    if isinstance(expr, ExistsEntity):
        return f"exists_entity({expr.binding})", _ATOM_LEVEL
    if isinstance(expr, Not):
        return f"not {_render(expr.operand, _NOT_LEVEL)}", _NOT_LEVEL
    if isinstance(expr, Quantifier):
        body = _render(expr.body, _QUANT_LEVEL)
        head = f"{expr.kind} {expr.var} in {'.'.join(expr.collection)}"
        return f"{head}: {body}", _QUANT_LEVEL
    if isinstance(expr, BinOp):
        level = _LEVEL[expr.op]
        if expr.op in _NON_ASSOC:
            left = _render(expr.left, level + 1)
            right = _render(expr.right, level + 1)
        else:
            left = _render(expr.left, level)
            right = _render(expr.right, level + 1)
        return f"{left} {expr.op} {right}", level
    raise TypeError(f"cannot render {type(expr).__name__}")


def _render_item(item) -> str:
    if isinstance(item, Binding):
        suffix = " optional" if item.optional else ""
        return f"requires {item.kind} {item.name}{suffix};"
    if isinstance(item, RuleDef):
        prefix = "optional " if item.optional else ""
        return f"{prefix}rule {item.name}: {expr_to_text(item.expr)};"
    if isinstance(item, OverrideRule):
        return f"override rule {item.name}: {expr_to_text(item.expr)};"
    if isinstance(item, RemoveRule):
        return f"remove rule {item.name};"
    raise TypeError(f"cannot render {type(item).__name__}")


def pretty_print(ast: SpecAst) -> str:
    """Canonical text for a whole source file."""
    chunks: list[str] = []
    for d in ast.defs:
        extends = f" extends {d.extends}" if d.extends else ""
        lines = [f"process {d.name}{extends} {{"]
        lines.extend(_INDENT + _render_item(item) for item in d.items)
        lines.append("}")
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)
