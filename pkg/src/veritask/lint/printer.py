"""Canonical text for a parsed snippet.

Printing then reparsing reproduces the tree exactly, and on emitter output
the printed text is byte-identical to the original. Layout rules follow
the emitter: two-space indents, ``if(cond) begin`` heads, one statement
per line, except case arms, which print on one compact line when they
contain no comment.
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
    ExprNode,
    IfChain,
    Item,
    Name,
    NonBlocking,
    RegDecl,
    SnippetAst,
    Stmt,
    UnaryNot,
)


def print_expr(expr: ExprNode) -> str:
    return _expr(expr, None, False)


def _expr(expr: ExprNode, parent_op: str | None, is_right: bool) -> str:
    if isinstance(expr, Name):
        return expr.ident
    if isinstance(expr, Const):
        return expr.text
    if isinstance(expr, UnaryNot):
        if isinstance(expr.operand, (Name, Const)):
            return "!" + _expr(expr.operand, None, False)
        return "!(" + _expr(expr.operand, None, False) + ")"
    text = f"{_expr(expr.left, expr.op, False)} {expr.op} {_expr(expr.right, expr.op, True)}"
    if parent_op is None:
        return text
    # A left child of the same operator stays flat (left associativity);
    # everything else needs parentheses to reparse to the same tree.
    if expr.op == parent_op and not is_right:
        return text
    return "(" + text + ")"


def _has_comment(stmt: Stmt) -> bool:
    if isinstance(stmt, Comment):
        return True
    if isinstance(stmt, Block):
        return any(_has_comment(s) for s in stmt.stmts)
    if isinstance(stmt, IfChain):
        if any(_has_comment(arm.body) for arm in stmt.arms):
            return True
        return stmt.orelse is not None and _has_comment(stmt.orelse)
    if isinstance(stmt, CaseStmt):
        return any(_has_comment(arm.body) for arm in stmt.arms)
    return False


def _compact(stmt: Stmt) -> str:
    if isinstance(stmt, NonBlocking):
        return f"{stmt.target} <= {print_expr(stmt.value)};"
    if isinstance(stmt, ContinuousAssign):
        return f"assign {stmt.target} = {print_expr(stmt.value)};"
    if isinstance(stmt, Block):
        inner = " ".join(_compact(s) for s in stmt.stmts)
        return f"begin {inner} end" if inner else "begin end"
    if isinstance(stmt, IfChain):
        parts = []
        for k, arm in enumerate(stmt.arms):
            head = "if" if k == 0 else "else if"
            parts.append(f"{head}({print_expr(arm.cond)}) {_compact(arm.body)}")
        if stmt.orelse is not None:
            parts.append(f"else {_compact(stmt.orelse)}")
        return " ".join(parts)
    if isinstance(stmt, CaseStmt):
        head = "unique case" if stmt.unique else "case"
        arms = " ".join(f"{arm.label}: {_compact(arm.body)}" for arm in stmt.arms)
        middle = f" {arms} " if arms else " "
        return f"{head} ({stmt.selector}){middle}endcase"
    raise TypeError(f"cannot print {stmt!r} compactly")


def _stmt_lines(stmt: Stmt, depth: int) -> list[str]:
    pad = "  " * depth
    if isinstance(stmt, Comment):
        return [pad + stmt.text]
    if isinstance(stmt, (NonBlocking, ContinuousAssign)):
        return [pad + _compact(stmt)]
    if isinstance(stmt, Block):
        lines = [pad + "begin"]
        for inner in stmt.stmts:
            lines.extend(_stmt_lines(inner, depth + 1))
        lines.append(pad + "end")
        return lines
    if isinstance(stmt, IfChain):
        return _if_lines(stmt, depth)
    if isinstance(stmt, CaseStmt):
        head = "unique case" if stmt.unique else "case"
        lines = [f"{pad}{head} ({stmt.selector})"]
        for arm in stmt.arms:
            if _has_comment(arm.body):
                body = _stmt_lines(arm.body, depth + 1)
                body[0] = f"{'  ' * (depth + 1)}{arm.label}: {body[0].lstrip()}"
                lines.extend(body)
            else:
                lines.append(f"{'  ' * (depth + 1)}{arm.label}: {_compact(arm.body)}")
        lines.append(pad + "endcase")
        return lines
    raise TypeError(f"not a statement: {stmt!r}")


def _if_lines(stmt: IfChain, depth: int) -> list[str]:
    pad = "  " * depth
    lines: list[str] = []
    open_head = ""
    for k, arm in enumerate(stmt.arms):
        keyword = "if" if k == 0 else f"{open_head}else if"
        cond = print_expr(arm.cond)
        if isinstance(arm.body, Block):
            lines.append(f"{pad}{keyword}({cond}) begin")
            for inner in arm.body.stmts:
                lines.extend(_stmt_lines(inner, depth + 1))
            open_head = "end "
        else:
            # Bare single-statement arm, printed inline on the guard line.
            lines.append(f"{pad}{keyword}({cond}) {_compact(arm.body)}")
            open_head = ""
    if stmt.orelse is not None:
        if isinstance(stmt.orelse, Block):
            lines.append(f"{pad}{open_head}else begin")
            for inner in stmt.orelse.stmts:
                lines.extend(_stmt_lines(inner, depth + 1))
            lines.append(pad + "end")
        else:
            lines.append(f"{pad}{open_head}else {_compact(stmt.orelse)}")
    elif open_head:
        lines.append(pad + "end")
    return lines


def _item_lines(item: Item) -> list[str]:
    if isinstance(item, Comment):
        return [item.text]
    if isinstance(item, (ContinuousAssign, NonBlocking)):
        return [_compact(item)]
    if isinstance(item, RegDecl):
        if item.msb is None:
            return [f"reg {item.name};"]
        return [f"reg [{item.msb}:{item.lsb}] {item.name};"]
    if isinstance(item, EnumDecl):
        members = ", ".join(item.members)
        return [f"enum {{{members}}} {item.name};"]
    if isinstance(item, AlwaysBlock):
        edges = " or ".join(f"posedge {name}" for name in item.edges)
        lines = [f"always @({edges}) begin"]
        for stmt in item.body:
            lines.extend(_stmt_lines(stmt, 1))
        lines.append("end")
        return lines
    raise TypeError(f"not an item: {item!r}")


def print_snippet(ast: SnippetAst) -> str:
    lines: list[str] = []
    for item in ast.items:
        lines.extend(_item_lines(item))
    return "\n".join(lines)
