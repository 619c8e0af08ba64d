"""The PROCL rule language: lexer, parser, type checker, printer, evaluator."""

from procl.dsl.evaluator import (
    AbsentEntity,
    Bool,
    BoundCollection,
    BoundEntity,
    Environment,
    Int,
    Str,
    Undetermined,
    Value,
    eval_expr,
)
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
from procl.dsl.parser import parse, parse_expression, parse_source
from procl.dsl.printer import expr_to_text, pretty_print
from procl.dsl.tokens import Token, tokenize
from procl.dsl.typecheck import typecheck, typecheck_expr

__all__ = [
    "AbsentEntity",
    "BinOp",
    "Binding",
    "Bool",
    "BoolLit",
    "BoundCollection",
    "BoundEntity",
    "CountExpr",
    "Environment",
    "ExistsEntity",
    "Expr",
    "Int",
    "IntLit",
    "Not",
    "OverrideRule",
    "PathExpr",
    "ProcessDef",
    "Quantifier",
    "RemoveRule",
    "RuleDef",
    "SpecAst",
    "Str",
    "StrLit",
    "Token",
    "Undetermined",
    "Value",
    "eval_expr",
    "expr_to_text",
    "parse",
    "parse_expression",
    "parse_source",
    "pretty_print",
    "tokenize",
    "typecheck",
    "typecheck_expr",
]
