"""Syntax tree for parsed snippets.

Node equality ignores source positions (``pos`` fields compare as equal),
so a tree survives a print/reparse round trip intact. The parser is more
permissive than the emitter: a nonblocking assign can appear at top level
and a continuous assign inside an always block, both representable here so
the checker can point at them with a placement diagnostic instead of a
generic syntax error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

Pos = tuple[int, int]
_NO_POS: Pos = (0, 0)


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Const:
    # Raw literal text: "0", "1", "3'b110". Kept verbatim so printing is lossless.
    text: str


@dataclass(frozen=True)
class UnaryNot:
    operand: ExprNode


@dataclass(frozen=True)
class BinExpr:
    op: str  # symbol as written: & | ^ >= > %
    left: ExprNode
    right: ExprNode


ExprNode = Union[Name, Const, UnaryNot, BinExpr]


@dataclass(frozen=True)
class Comment:
    text: str  # includes the leading //
    pos: Pos = field(default=_NO_POS, compare=False, repr=False)


@dataclass(frozen=True)
class ContinuousAssign:
    target: str
    value: ExprNode
    pos: Pos = field(default=_NO_POS, compare=False, repr=False)


@dataclass(frozen=True)
class RegDecl:
    name: str
    msb: int | None = None  # None for a scalar reg
    lsb: int | None = None
    pos: Pos = field(default=_NO_POS, compare=False, repr=False)


@dataclass(frozen=True)
class EnumDecl:
    members: tuple[str, ...]
    name: str
    pos: Pos = field(default=_NO_POS, compare=False, repr=False)


@dataclass(frozen=True)
class NonBlocking:
    target: str
    value: ExprNode
    pos: Pos = field(default=_NO_POS, compare=False, repr=False)


@dataclass(frozen=True)
class Block:
    # An explicit begin/end group. A bare single-statement if-arm is the
    # statement itself, not a one-element Block; the distinction is real
    # text and must survive reparsing.
    stmts: tuple[Stmt, ...]


@dataclass(frozen=True)
class IfArm:
    cond: ExprNode
    body: Stmt


@dataclass(frozen=True)
class IfChain:
    arms: tuple[IfArm, ...]  # if / else-if conditions in order
    orelse: Stmt | None
    pos: Pos = field(default=_NO_POS, compare=False, repr=False)


@dataclass(frozen=True)
class CaseArm:
    label: str
    body: Stmt


@dataclass(frozen=True)
class CaseStmt:
    selector: str
    arms: tuple[CaseArm, ...]
    unique: bool
    pos: Pos = field(default=_NO_POS, compare=False, repr=False)


Stmt = Union[NonBlocking, IfChain, CaseStmt, Block, Comment, ContinuousAssign]


@dataclass(frozen=True)
class AlwaysBlock:
    edges: tuple[str, ...]  # posedge signal names, in order
    body: tuple[Stmt, ...]
    pos: Pos = field(default=_NO_POS, compare=False, repr=False)


Item = Union[Comment, ContinuousAssign, RegDecl, EnumDecl, AlwaysBlock, NonBlocking]


@dataclass(frozen=True)
class SnippetAst:
    items: tuple[Item, ...]
