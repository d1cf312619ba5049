"""Bucket a prediction's disagreement with its reference.

The classes, in the order they are tested:

  exact                 whitespace-stripped texts are equal
  syntax                the prediction does not lint
  structural_mismatch   the parse trees have different shapes
  operator_mismatch     same shape, some binary operator differs
  identifier_mismatch   same shape and operators, a name or literal differs

One class per pair, by that precedence: a prediction with both a wrong
operator and a wrong signal name counts as operator_mismatch. Literal
values, comment text, and declared widths count as identifier-level
differences. A pair whose trees are fully equal but whose stripped texts
still differ (redundant parentheses, an optional begin/end) falls into
structural_mismatch, since only presentation structure can differ at that
point.
"""

from __future__ import annotations

from veritask.lint.nodes import (
    AlwaysBlock,
    BinExpr,
    Block,
    CaseStmt,
    Comment,
    Const,
    ContinuousAssign,
    EnumDecl,
    IfChain,
    Name,
    NonBlocking,
    RegDecl,
    SnippetAst,
    UnaryNot,
)
from veritask.lint.parser import check, parse_snippet

ERROR_CLASSES = (
    "exact",
    "syntax",
    "operator_mismatch",
    "identifier_mismatch",
    "structural_mismatch",
)


def strip_whitespace(text: str) -> str:
    """Remove every Unicode whitespace character."""
    return "".join(text.split())


def _skeleton(node: object) -> object:
    """Tree shape with operator and name payloads removed."""
    if isinstance(node, SnippetAst):
        return ("snippet", tuple(_skeleton(i) for i in node.items))
    if isinstance(node, Comment):
        return ("comment",)
    if isinstance(node, ContinuousAssign):
        return ("assign", _skeleton(node.value))
    if isinstance(node, RegDecl):
        return ("reg", node.msb is not None)
    if isinstance(node, EnumDecl):
        return ("enum", len(node.members))
    if isinstance(node, NonBlocking):
        return ("nb", _skeleton(node.value))
    if isinstance(node, AlwaysBlock):
        return ("always", len(node.edges), tuple(_skeleton(s) for s in node.body))
    if isinstance(node, Block):
        return ("block", tuple(_skeleton(s) for s in node.stmts))
    if isinstance(node, IfChain):
        arms = tuple((_skeleton(a.cond), _skeleton(a.body)) for a in node.arms)
        orelse = None if node.orelse is None else _skeleton(node.orelse)
        return ("if", arms, orelse)
    if isinstance(node, CaseStmt):
        return ("case", node.unique, tuple(_skeleton(a.body) for a in node.arms))
    if isinstance(node, Name):
        return ("name",)
    if isinstance(node, Const):
        return ("const",)
    if isinstance(node, UnaryNot):
        return ("not", _skeleton(node.operand))
    if isinstance(node, BinExpr):
        return ("bin", _skeleton(node.left), _skeleton(node.right))
    raise TypeError(f"unexpected node: {node!r}")


def _leaves(node: object, ops: list[str], names: list[str]) -> None:
    """Collect operator and name/literal payloads in a fixed walk order."""
    if isinstance(node, SnippetAst):
        for item in node.items:
            _leaves(item, ops, names)
    elif isinstance(node, Comment):
        names.append(node.text)
    elif isinstance(node, ContinuousAssign):
        names.append(node.target)
        _leaves(node.value, ops, names)
    elif isinstance(node, RegDecl):
        names.append(node.name)
        if node.msb is not None:
            names.append(f"{node.msb}:{node.lsb}")
    elif isinstance(node, EnumDecl):
        names.extend(node.members)
        names.append(node.name)
    elif isinstance(node, NonBlocking):
        names.append(node.target)
        _leaves(node.value, ops, names)
    elif isinstance(node, AlwaysBlock):
        names.extend(node.edges)
        for stmt in node.body:
            _leaves(stmt, ops, names)
    elif isinstance(node, Block):
        for stmt in node.stmts:
            _leaves(stmt, ops, names)
    elif isinstance(node, IfChain):
        for arm in node.arms:
            _leaves(arm.cond, ops, names)
            _leaves(arm.body, ops, names)
        if node.orelse is not None:
            _leaves(node.orelse, ops, names)
    elif isinstance(node, CaseStmt):
        names.append(node.selector)
        for arm in node.arms:
            names.append(arm.label)
            _leaves(arm.body, ops, names)
    elif isinstance(node, Name):
        names.append(node.ident)
    elif isinstance(node, Const):
        names.append(node.text)
    elif isinstance(node, UnaryNot):
        _leaves(node.operand, ops, names)
    elif isinstance(node, BinExpr):
        ops.append(node.op)
        _leaves(node.left, ops, names)
        _leaves(node.right, ops, names)
    else:
        raise TypeError(f"unexpected node: {node!r}")


def classify_error(pred: str, ref: str) -> str:
    """Classify how a prediction differs from a lint-clean reference."""
    if strip_whitespace(pred) == strip_whitespace(ref):
        return "exact"
    ref_diags = check(ref)
    if ref_diags:
        raise ValueError(f"reference snippet fails lint: {ref_diags[0]}")
    if check(pred):
        return "syntax"
    pred_ast = parse_snippet(pred)
    ref_ast = parse_snippet(ref)
    if _skeleton(pred_ast) != _skeleton(ref_ast):
        return "structural_mismatch"
    pred_ops: list[str] = []
    pred_names: list[str] = []
    ref_ops: list[str] = []
    ref_names: list[str] = []
    _leaves(pred_ast, pred_ops, pred_names)
    _leaves(ref_ast, ref_ops, ref_names)
    if pred_ops != ref_ops:
        return "operator_mismatch"
    if pred_names != ref_names:
        return "identifier_mismatch"
    return "structural_mismatch"
