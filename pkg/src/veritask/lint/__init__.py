"""Tokenizer, parser, checker, and error classifier for the snippet subset.

The grammar here is exactly the closure of what the emitter produces:
continuous assigns, scalar and vector reg declarations, enum state
declarations, comments, and always blocks built from nonblocking assigns,
if/else-if chains, and unique case statements. A snippet that parses with
no diagnostics is what the toolkit means by "compiles".
"""

from __future__ import annotations

from veritask.lint.classify import ERROR_CLASSES, classify_error, strip_whitespace
from veritask.lint.lexer import KEYWORDS, Token, tokenize
from veritask.lint.nodes import (
    AlwaysBlock,
    BinExpr,
    Block,
    CaseArm,
    CaseStmt,
    Comment,
    Const,
    ContinuousAssign,
    EnumDecl,
    IfArm,
    IfChain,
    Name,
    NonBlocking,
    RegDecl,
    SnippetAst,
    UnaryNot,
)
from veritask.lint.parser import Diagnostic, SnippetSyntaxError, check, parse_snippet
from veritask.lint.printer import print_snippet

__all__ = [
    "AlwaysBlock",
    "BinExpr",
    "Block",
    "CaseArm",
    "CaseStmt",
    "Comment",
    "Const",
    "ContinuousAssign",
    "Diagnostic",
    "ERROR_CLASSES",
    "EnumDecl",
    "IfArm",
    "IfChain",
    "KEYWORDS",
    "Name",
    "NonBlocking",
    "RegDecl",
    "SnippetAst",
    "SnippetSyntaxError",
    "Token",
    "UnaryNot",
    "check",
    "classify_error",
    "parse_snippet",
    "print_snippet",
    "strip_whitespace",
    "tokenize",
]
