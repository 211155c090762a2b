"""Tokenizer shared by the HGV and HCP concrete syntaxes."""

from __future__ import annotations

from dataclasses import dataclass


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "ident", "num", "sym", "eof"
    text: str
    line: int
    col: int


# Longest symbols first.
_SYMBOLS = (
    "<->",
    "-o",
    "||",
    "->",
    "(",
    ")",
    "{",
    "}",
    "[",
    "]",
    ",",
    ";",
    ":",
    ".",
    "=",
    "|",
    "\\",
    "λ",
    "!",
    "?",
    "+",
    "*",
    "&",
    "~",
    "%",
    "⊸",
    "⊕",
    "⊗",
    "⅋",
    "⊥",
    "⊤",
    "∥",
)


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c.isalpha() and c != "λ" or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'") and src[j] != "λ":
                j += 1
            word = src[i:j]
            if word == "end" and j < n and src[j] in "!?":
                word += src[j]
                j += 1
            toks.append(Token("ident", word, line, col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("num", src[i:j], line, col))
            col += j - i
            i = j
            continue
        for s in _SYMBOLS:
            if src.startswith(s, i):
                toks.append(Token("sym", s, line, col))
                i += len(s)
                col += len(s)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class TokenStream:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.pos = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind != "eof" and t.text == text

    def at_ident(self, k: int = 0) -> bool:
        return self.peek(k).kind == "ident"

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind == "eof":
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        self.pos += 1
        return t

    def error(self, message: str, tok: Token | None = None):
        t = tok or self.peek()
        raise ParseError(message, t.line, t.col)
