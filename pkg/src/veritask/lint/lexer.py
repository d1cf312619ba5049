"""Total tokenizer for the snippet subset.

Every byte of input lands in some token; characters outside the language
become in-band ``error`` tokens instead of exceptions, so downstream code
can report positions uniformly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Keywords the snippet grammar actually uses. Any other word is an ident;
# out-of-subset keywords ("module", "wire", ...) then fail at parse time,
# which is the intended meaning of "does not compile" here.
KEYWORDS = frozenset(
    {
        "always",
        "assign",
        "begin",
        "case",
        "else",
        "end",
        "endcase",
        "enum",
        "if",
        "or",
        "posedge",
        "reg",
        "unique",
    }
)

# Order matters: sized literals before plain numbers, two-char operators
# before their one-char prefixes.
_TOKEN_RE = re.compile(
    r"""
      (?P<comment>//[^\n]*)
    | (?P<sized_literal>\d+'b[01]+)
    | (?P<number>\d+)
    | (?P<word>[A-Za-z_][A-Za-z0-9_$]*)
    | (?P<operator><=|>=|[=!&|^>%])
    | (?P<punct>[()\[\]{},;:@])
    | (?P<space>\s+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident|keyword|operator|number|sized_literal|punct|comment|error
    text: str
    line: int  # 1-based
    col: int  # 1-based


def tokenize(text: str) -> list[Token]:
    """Split text into tokens; unknown characters yield ``error`` tokens."""
    tokens: list[Token] = []
    line = 1
    col = 1
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            tokens.append(Token("error", text[pos], line, col))
            pos += 1
            col += 1
            continue
        kind = m.lastgroup or ""
        lexeme = m.group()
        if kind == "word":
            kind = "keyword" if lexeme in KEYWORDS else "ident"
        if kind != "space":
            tokens.append(Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    return tokens
