"""Recursive-descent parser for PROCL.

Grammar (binding kinds are contextual words, not reserved):

    spec        := processdef* ;
    processdef  := "process" IDENT ("extends" IDENT)? "{" item* "}" ;
    item        := binding | ruledef | overriderule | removerule ;
    binding     := "requires" KIND IDENT ("optional")? ";" ;
    KIND        := "phase" | "sprints" | "meetings" | "milestones"
                 | "products" | "increments" | "work" ;
    ruledef     := ("optional")? "rule" IDENT ":" expr ";" ;
    overriderule:= "override" "rule" IDENT ":" expr ";" ;
    removerule  := "remove" "rule" IDENT ";" ;
    expr        := ("forall"|"exists") IDENT "in" path ":" expr | implies ;
    implies     := orexp ("implies" orexp)? ;
    orexp       := andexp ("or" andexp)* ;
    andexp      := notexp ("and" notexp)* ;
    notexp      := "not" notexp | cmp ;
    cmp         := sum (("<"|"<="|">"|">="|"=="|"!=") sum)? ;
    sum         := term (("+"|"-") term)* ;
    term        := INT | STRING | "true" | "false"
                 | "count" "(" path ")" | "exists_entity" "(" IDENT ")"
                 | path | "(" expr ")" ;
    path        := IDENT ("." IDENT)* ;

Parentheses group only; they leave no trace in the AST.  There is no
error recovery: the first syntax error aborts the parse.
"""

from __future__ import annotations

from typing import Sequence

from procl.errors import ParseError
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
from procl.dsl.tokens import Token, tokenize

BINDING_KINDS = ("phase", "sprints", "meetings", "milestones",
                 "products", "increments", "work")

_CMP_OPS = ("<", "<=", ">", ">=", "==", "!=")


class _Parser:
    def __init__(self, tokens: Sequence[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at(self, *kinds: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind in kinds

    def take(self, *kinds: str) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            line = last.line if last else 1
            col = last.col + len(last.text) if last else 1
            raise ParseError(f"expected {_describe(kinds)}, found end of input",
                             line, col)
        if tok.kind not in kinds:
            raise ParseError(
                f"expected {_describe(kinds)}, found {tok.text!r}",
                tok.line, tok.col)
        self.pos += 1
        return tok

    # ---- declarations ----

    def spec(self) -> SpecAst:
        defs = []
        while self.peek() is not None:
            defs.append(self.processdef())
        return SpecAst(tuple(defs))

    def processdef(self) -> ProcessDef:
        kw = self.take("process")
        name = self.take("ident").text
        extends = None
        if self.at("extends"):
            self.take("extends")
            extends = self.take("ident").text
        self.take("{")
        items = []
        while not self.at("}"):
            items.append(self.item())
        self.take("}")
        return ProcessDef(name, extends, tuple(items), line=kw.line, col=kw.col)

    def item(self):
        if self.at("requires"):
            return self.binding()
        if self.at("override"):
            return self.overriderule()
        if self.at("remove"):
            return self.removerule()
        if self.at("optional", "rule"):
            return self.ruledef()
        # reuse take() so end-of-input and wrong-token errors share phrasing
        self.take("requires", "optional", "rule", "override", "remove")
        raise AssertionError("unreachable")

    def binding(self) -> Binding:
        kw = self.take("requires")
        kind_tok = self.take("ident")
        if kind_tok.text not in BINDING_KINDS:
            raise ParseError(
                f"expected a binding kind {_describe(BINDING_KINDS)}, "
                f"found {kind_tok.text!r}", kind_tok.line, kind_tok.col)
        name = self.take("ident").text
        optional = False
        if self.at("optional"):
            self.take("optional")
            optional = True
        self.take(";")
        return Binding(kind_tok.text, name, optional, line=kw.line, col=kw.col)

    def ruledef(self) -> RuleDef:
        optional = False
        first = self.peek()
        assert first is not None
        if self.at("optional"):
            self.take("optional")
            optional = True
        self.take("rule")
        name = self.take("ident").text
        self.take(":")
        expr = self.expr()
        self.take(";")
        return RuleDef(name, expr, optional, line=first.line, col=first.col)

    def overriderule(self) -> OverrideRule:
        kw = self.take("override")
        self.take("rule")
        name = self.take("ident").text
        self.take(":")
        expr = self.expr()
        self.take(";")
        return OverrideRule(name, expr, line=kw.line, col=kw.col)

    def removerule(self) -> RemoveRule:
        kw = self.take("remove")
        self.take("rule")
        name = self.take("ident").text
        self.take(";")
        return RemoveRule(name, line=kw.line, col=kw.col)

    # ---- expressions ----

    def expr(self) -> Expr:
        if self.at("forall", "exists"):
            kw = self.take("forall", "exists")
            var = self.take("ident").text
            self.take("in")
            collection = self.path_parts()
            self.take(":")
            body = self.expr()  # quantifier body extends maximally right
            return Quantifier(kw.kind, var, collection, body,
                              line=kw.line, col=kw.col)
        return self.implies()

    def implies(self) -> Expr:
        left = self.orexp()
        if self.at("implies"):
            op = self.take("implies")
            right = self.orexp()
            return BinOp("implies", left, right, line=op.line, col=op.col)
        return left

    def orexp(self) -> Expr:
        left = self.andexp()
        while self.at("or"):
            op = self.take("or")
            right = self.andexp()
            left = BinOp("or", left, right, line=op.line, col=op.col)
        return left

    def andexp(self) -> Expr:
        left = self.notexp()
        while self.at("and"):
            op = self.take("and")
            right = self.notexp()
            left = BinOp("and", left, right, line=op.line, col=op.col)
        return left

    def notexp(self) -> Expr:
        if self.at("not"):
            kw = self.take("not")
            return Not(self.notexp(), line=kw.line, col=kw.col)
        return self.cmp()

    def cmp(self) -> Expr:
        left = self.sum()
        if self.at(*_CMP_OPS):
            op = self.take(*_CMP_OPS)
            right = self.sum()
            return BinOp(op.kind, left, right, line=op.line, col=op.col)
        return left

    def sum(self) -> Expr:
        left = self.term()
        while self.at("+", "-"):
            op = self.take("+", "-")
            right = self.term()
            left = BinOp(op.kind, left, right, line=op.line, col=op.col)
        return left

    def term(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected an expression, found end of input", 1, 1)
        if tok.kind == "int":
            self.take("int")
            return IntLit(int(tok.text), line=tok.line, col=tok.col)
        if tok.kind == "string":
            self.take("string")
            return StrLit(tok.text, line=tok.line, col=tok.col)
        if tok.kind in ("true", "false"):
            self.take(tok.kind)
            return BoolLit(tok.kind == "true", line=tok.line, col=tok.col)
        if tok.kind == "count":
            self.take("count")
            self.take("(")
            collection = self.path_parts()
            self.take(")")
            return CountExpr(collection, line=tok.line, col=tok.col)
        if tok.kind == "exists_entity":
            self.take("exists_entity")
            self.take("(")
            binding = self.take("ident").text
            self.take(")")
            return ExistsEntity(binding, line=tok.line, col=tok.col)
        if tok.kind == "ident":
            parts = self.path_parts()
            return PathExpr(parts, line=tok.line, col=tok.col)
        if tok.kind == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"expected an expression, found {tok.text!r}",
                         tok.line, tok.col)

    def path_parts(self) -> tuple[str, ...]:
        parts = [self.take("ident").text]
        while self.at("."):
            self.take(".")
            parts.append(self.take("ident").text)
        return tuple(parts)


def _describe(kinds: Sequence[str]) -> str:
    quoted = [f"'{k}'" for k in kinds]
    if len(quoted) == 1:
        return quoted[0]
    return ", ".join(quoted[:-1]) + " or " + quoted[-1]


def parse(tokens: Sequence[Token]) -> SpecAst:
    """Parse a token stream into a SpecAst; raises ParseError."""
    parser = _Parser(tokens)
    return parser.spec()


def parse_source(source: str) -> SpecAst:
    return parse(tokenize(source))


def parse_expression(source: str) -> Expr:
    """Parse a single expression (no trailing tokens allowed)."""
    parser = _Parser(tokenize(source))
    expr = parser.expr()
    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(f"unexpected trailing input {trailing.text!r}",
                         trailing.line, trailing.col)
    return expr
