"""Tokenizer for ECO-mini source and core text."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .diagnostics import (
    E_ILLEGAL_CHAR,
    E_INT_RANGE,
    E_UNTERMINATED_STRING,
    CompileError,
    Diagnostic,
)

INT_MAX = 2**63 - 1


class TokenKind(enum.Enum):
    KW_EXTENSIBLE = "extensible"
    KW_DYNAMIC = "dynamic"
    KW_EXTEND = "extend"
    KW_CLASS = "class"
    KW_EXTENDS = "extends"
    KW_VAR = "var"
    KW_STATIC = "static"
    KW_METHOD = "method"
    KW_PRIVATE = "private"
    KW_CONSTRUCTOR = "constructor"
    KW_IF = "if"
    KW_ELSE = "else"
    KW_WHILE = "while"
    KW_RETURN = "return"
    KW_THROW = "throw"
    KW_TRY = "try"
    KW_CATCH = "catch"
    KW_DELETE = "delete"
    KW_NEW = "new"
    KW_THIS = "this"
    KW_TRUE = "true"
    KW_FALSE = "false"
    KW_NULL = "null"
    KW_CALL_E_METHOD = "call_e_method"

    IDENT = "identifier"
    INT = "integer"
    STRING = "string"

    LBRACE = "{"
    RBRACE = "}"
    LPAREN = "("
    RPAREN = ")"
    LBRACKET = "["
    RBRACKET = "]"
    DOT = "."
    COMMA = ","
    SEMI = ";"
    ASSIGN = "="
    PLUS = "+"
    MINUS = "-"
    STAR = "*"
    SLASH = "/"
    PERCENT = "%"
    EQ = "=="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    AND = "&&"
    OR = "||"
    NOT = "!"

    EOI = "end of input"


KEYWORDS = {k.value: k for k in TokenKind if k.name.startswith("KW_")}

# Longest operators first so that maximal munch falls out of the lookup order.
_PUNCT = sorted(
    (k for k in TokenKind if not k.name.startswith("KW_") and k not in (TokenKind.IDENT, TokenKind.INT, TokenKind.STRING, TokenKind.EOI)),
    key=lambda k: -len(k.value),
)
_PUNCT2 = {k.value: k for k in _PUNCT if len(k.value) == 2}
_PUNCT1 = {k.value: k for k in _PUNCT if len(k.value) == 1}

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    col: int
    offset: int = 0

    @property
    def value(self):
        """Decoded literal value for INT and STRING tokens."""
        if self.kind is TokenKind.INT:
            return int(self.text)
        if self.kind is TokenKind.STRING:
            return decode_string(self.text)
        return self.text

    def describe(self) -> str:
        if self.kind is TokenKind.EOI:
            return "end of input"
        if self.kind in (TokenKind.IDENT, TokenKind.INT, TokenKind.STRING):
            return f"{self.kind.value} '{self.text}'"
        return f"'{self.text}'"


def decode_string(text: str) -> str:
    out = []
    i = 1
    end = len(text) - 1
    while i < end:
        c = text[i]
        if c == "\\":
            out.append(_ESCAPES[text[i + 1]])
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def encode_string(value: str) -> str:
    body = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{body}"'


def _is_ident_start(c: str) -> bool:
    return c == "_" or ("a" <= c <= "z") or ("A" <= c <= "Z")


def _is_ident_char(c: str) -> bool:
    return _is_ident_start(c) or ("0" <= c <= "9")


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    """Split ``source`` into tokens ending with an EOI token.

    Raises CompileError carrying one diagnostic per lexical error.
    """
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    i = 0
    n = len(source)
    line = 1
    line_start = 0

    while i < n:
        c = source[i]
        col = i - line_start + 1
        if c == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if c in " \t\r":
            i += 1
            continue
        if c == "/" and source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
            continue
        if _is_ident_start(c):
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                j += 1
            text = source[i:j]
            tokens.append(Token(KEYWORDS.get(text, TokenKind.IDENT), text, line, col, i))
            i = j
            continue
        if "0" <= c <= "9":
            j = i + 1
            while j < n and "0" <= source[j] <= "9":
                j += 1
            text = source[i:j]
            if int(text) > INT_MAX:
                diags.append(Diagnostic(file, line, col, E_INT_RANGE, f"integer literal {text} out of 64-bit range"))
            tokens.append(Token(TokenKind.INT, text, line, col, i))
            i = j
            continue
        if c == '"':
            j = i + 1
            closed = False
            bad_escape = None
            while j < n:
                d = source[j]
                if d == "\n":
                    break
                if d == "\\":
                    if j + 1 < n and source[j + 1] in _ESCAPES:
                        j += 2
                        continue
                    bad_escape = bad_escape or j
                    j += 1
                    continue
                if d == '"':
                    closed = True
                    j += 1
                    break
                j += 1
            if not closed:
                diags.append(Diagnostic(file, line, col, E_UNTERMINATED_STRING, "unterminated string literal"))
                i = j
                continue
            if bad_escape is not None:
                diags.append(
                    Diagnostic(file, line, bad_escape - line_start + 1, E_ILLEGAL_CHAR, "invalid escape sequence in string")
                )
            tokens.append(Token(TokenKind.STRING, source[i:j], line, col, i))
            i = j
            continue
        two = source[i : i + 2]
        if two in _PUNCT2:
            tokens.append(Token(_PUNCT2[two], two, line, col, i))
            i += 2
            continue
        if c in _PUNCT1:
            tokens.append(Token(_PUNCT1[c], c, line, col, i))
            i += 1
            continue
        diags.append(Diagnostic(file, line, col, E_ILLEGAL_CHAR, f"illegal character {c!r}"))
        i += 1

    if diags:
        raise CompileError(diags)
    tokens.append(Token(TokenKind.EOI, "", line, i - line_start + 1, n))
    return tokens
