"""Tokenizer for the mini-Solidity subset.

Documentation comments (``/** ... */`` and ``///``) are kept as DOC tokens so
the parser can attach them to the following declaration or loop; all other
comments are discarded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from minisolv.errors import LexError
from minisolv.source import Span, line_starts, position


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENT = "ident"
    NUMBER = "number"
    STRING = "string"
    PUNCT = "punct"
    DOC = "doc"
    EOF = "eof"


KEYWORDS = {
    "contract", "library", "interface", "function", "modifier", "constructor",
    "mapping", "returns", "return", "public", "private", "internal", "external",
    "payable", "pure", "view", "constant", "if", "else", "while", "for",
    "require", "assert", "revert", "throw", "true", "false", "using",
    "struct", "enum", "event", "emit", "new", "assembly", "delete", "var",
    "address", "bool", "string", "bytes",
    "ether", "wei", "finney", "szabo",
}

_INT_TYPE_RE = re.compile(r"\A(u?)int(8|16|24|32|40|48|56|64|72|80|88|96|104|112|120|128|"
                          r"136|144|152|160|168|176|184|192|200|208|216|224|232|240|248|256)?\Z")

# Longest first so two-char operators win over their prefixes.
PUNCTUATION = [
    "<<", ">>", "+=", "-=", "*=", "/=", "++", "--", "=>", "==", "!=", "<=", ">=",
    "&&", "||",
    "{", "}", "(", ")", "[", "]", ";", ",", ".", "?", ":",
    "+", "-", "*", "/", "%", "!", "<", ">", "=", "&", "|", "^", "~",
]

_IDENT_START = re.compile(r"[A-Za-z_$]")
_IDENT_CONT = re.compile(r"[A-Za-z0-9_$]")


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span

    def is_kw(self, *names: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.text in names

    def is_punct(self, *names: str) -> bool:
        return self.kind is TokenKind.PUNCT and self.text in names

    def __repr__(self) -> str:
        return f"{self.kind.value}({self.text!r})"


def is_int_type_name(name: str) -> bool:
    return bool(_INT_TYPE_RE.match(name))


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    starts = line_starts(text)

    def span(a: int, b: int) -> Span:
        line, col = position(starts, a)
        return Span(filename, a, b, line, col)

    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if text.startswith("///", i):
            j = text.find("\n", i)
            j = n if j < 0 else j
            tokens.append(Token(TokenKind.DOC, text[i + 3:j], span(i, j)))
            i = j
            continue
        if text.startswith("/**", i):
            j = text.find("*/", i + 3)
            if j < 0:
                raise LexError("unterminated documentation comment", span(i, n))
            tokens.append(Token(TokenKind.DOC, text[i + 3:j], span(i, j + 2)))
            i = j + 2
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                raise LexError("unterminated comment", span(i, n))
            i = j + 2
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise LexError("unterminated string literal", span(i, j))
                j += 1
            if j >= n:
                raise LexError("unterminated string literal", span(i, n))
            tokens.append(Token(TokenKind.STRING, text[i + 1:j], span(i, j + 1)))
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            if text.startswith("0x", i) or text.startswith("0X", i):
                j = i + 2
                while j < n and text[j] in "0123456789abcdefABCDEF":
                    j += 1
                if j == i + 2:
                    raise LexError("malformed hex literal", span(i, j))
            else:
                while j < n and text[j].isdigit():
                    j += 1
            tokens.append(Token(TokenKind.NUMBER, text[i:j], span(i, j)))
            i = j
            continue
        if _IDENT_START.match(ch):
            j = i
            while j < n and _IDENT_CONT.match(text[j]):
                j += 1
            word = text[i:j]
            kind = TokenKind.KEYWORD if (word in KEYWORDS or is_int_type_name(word)) else TokenKind.IDENT
            tokens.append(Token(kind, word, span(i, j)))
            i = j
            continue
        for p in PUNCTUATION:
            if text.startswith(p, i):
                tokens.append(Token(TokenKind.PUNCT, p, span(i, i + len(p))))
                i += len(p)
                break
        else:
            raise LexError(f"illegal character {ch!r}", span(i, i + 1))
    tokens.append(Token(TokenKind.EOF, "", span(n, n)))
    return tokens
