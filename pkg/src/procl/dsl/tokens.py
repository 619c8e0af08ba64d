"""Tokenizer for PROCL sources.

Comments run from `--` to end of line.  A token's `kind` is the keyword or
symbol text itself for keywords/symbols, and "ident" / "int" / "string"
for the variable-content tokens.  Positions are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass

from procl.errors import LexError

KEYWORDS = frozenset({
    "process", "extends", "requires", "optional", "rule", "override",
    "remove", "forall", "exists", "in", "and", "or", "not", "implies",
    "true", "false", "count", "exists_entity",
})

# Two-character symbols must be tried before their one-char prefixes.
_SYMBOLS = ("<=", ">=", "==", "!=", "<", ">", "+", "-",
            "{", "}", "(", ")", ":", ";", ".")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def _is_ident_start(ch: str) -> bool:
    return ch.isascii() and (ch.isalpha() or ch == "_")


def _is_ident_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


def tokenize(source: str) -> list[Token]:
    """Split source text into tokens, discarding whitespace and comments."""
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def advance(count: int) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if source.startswith("--", i):
            while i < n and source[i] != "\n":
                advance(1)
            continue
        start_line, start_col = line, col
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            word = source[i:j]
            kind = word if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, start_line, start_col))
            advance(j - i)
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j], start_line, start_col))
            advance(j - i)
            continue
        if ch == '"':
            text, length = _scan_string(source, i, start_line, start_col)
            tokens.append(Token("string", text, start_line, start_col))
            advance(length)
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token(sym, sym, start_line, start_col))
                advance(len(sym))
                break
        else:
            raise LexError(f"illegal character {ch!r}", start_line, start_col)
    return tokens


def _scan_string(source: str, start: int, line: int, col: int) -> tuple[str, int]:
    """Scan a double-quoted literal with \\" and \\\\ escapes.

    Returns the decoded text and the consumed source length.
    """
    chars: list[str] = []
    i = start + 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == '"':
            return "".join(chars), i + 1 - start
        if ch == "\n":
            break
        if ch == "\\":
            if i + 1 < n and source[i + 1] in ('"', "\\"):
                chars.append(source[i + 1])
                i += 2
                continue
            raise LexError("unsupported escape in string literal", line, col)
        chars.append(ch)
        i += 1
    raise LexError("unterminated string literal", line, col)
