"""Recursive-descent parser and checker for the snippet subset.

Grammar, with [] optional and * repetition:

    snippet  := item*
    item     := comment | assign | regdecl | enumdecl | always | nonblocking
    assign   := 'assign' IDENT '=' expr ';'
    regdecl  := 'reg' ['[' NUMBER ':' NUMBER ']'] IDENT ';'
    enumdecl := 'enum' '{' IDENT (',' IDENT)* '}' IDENT ';'
    always   := 'always' '@' '(' edge ('or' edge)* ')' 'begin' stmt* 'end'
    edge     := 'posedge' IDENT
    stmt     := comment | nonblocking | ifchain | case | block | assign
    nonblocking := IDENT '<=' expr ';'
    ifchain  := 'if' '(' expr ')' body ['else' (ifchain | body)]
    body     := block | stmt
    case     := ['unique'] 'case' '(' IDENT ')' casearm* 'endcase'
    casearm  := IDENT ':' stmt
    block    := 'begin' stmt* 'end'
    expr     := unary (BINOP unary)*        (single tier, left associative)
    unary    := '!' unary | primary
    primary  := IDENT | NUMBER | SIZED | '(' expr ')'

Binary operators are & | ^ >= > %. There is no precedence ladder: the
emitter parenthesizes every mixed-operator expression, so a flat
left-associative read is faithful on canonical text, and predictions are
judged against that same convention. Comments are statements/items, not
free trivia, so one inside an expression is a syntax error.

Placement mistakes the grammar could reject (a nonblocking assign at top
level, a continuous assign inside an always block) are parsed anyway and
reported by ``check`` as placement diagnostics with exact positions.
"""

from __future__ import annotations

from dataclasses import dataclass

from veritask.errors import VeritaskError
from veritask.lint.lexer import Token, tokenize
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
    ExprNode,
    IfArm,
    IfChain,
    Item,
    Name,
    NonBlocking,
    RegDecl,
    SnippetAst,
    Stmt,
    UnaryNot,
)

_BINOPS = ("&", "|", "^", ">=", ">", "%")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


class SnippetSyntaxError(VeritaskError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class _Parser:
    def __init__(self, tokens: list[Token]):
        self._toks = tokens
        self._i = 0

    # Token plumbing.

    def _peek(self, ahead: int = 0) -> Token | None:
        i = self._i + ahead
        return self._toks[i] if i < len(self._toks) else None

    def _at(self, kind: str, text: str | None = None) -> bool:
        tok = self._peek()
        return tok is not None and tok.kind == kind and (text is None or tok.text == text)

    def _error_pos(self) -> tuple[int, int]:
        tok = self._peek()
        if tok is not None:
            return tok.line, tok.col
        if self._toks:
            last = self._toks[-1]
            return last.line, last.col + len(last.text)
        return 1, 1

    def _fail(self, expected: str) -> SnippetSyntaxError:
        tok = self._peek()
        found = f"'{tok.text}'" if tok is not None else "end of input"
        line, col = self._error_pos()
        return SnippetSyntaxError(line, col, f"expected {expected}, found {found}")

    def _take(self, kind: str, text: str | None = None, expected: str | None = None) -> Token:
        if not self._at(kind, text):
            raise self._fail(expected or (f"'{text}'" if text else kind))
        tok = self._toks[self._i]
        self._i += 1
        return tok

    # Grammar productions.

    def parse(self) -> SnippetAst:
        items: list[Item] = []
        while self._peek() is not None:
            items.append(self._item())
        return SnippetAst(tuple(items))

    def _item(self) -> Item:
        tok = self._peek()
        assert tok is not None
        if tok.kind == "comment":
            self._i += 1
            return Comment(tok.text, pos=(tok.line, tok.col))
        if tok.kind == "keyword":
            if tok.text == "assign":
                return self._assign()
            if tok.text == "reg":
                return self._reg_decl()
            if tok.text == "enum":
                return self._enum_decl()
            if tok.text == "always":
                return self._always()
        if tok.kind == "ident":
            nxt = self._peek(1)
            if nxt is not None and nxt.kind == "operator" and nxt.text == "<=":
                return self._nonblocking()
        raise self._fail("a declaration, assign, always block, or comment")

    def _assign(self) -> ContinuousAssign:
        kw = self._take("keyword", "assign")
        target = self._take("ident", expected="an assign target").text
        self._take("operator", "=")
        value = self._expr()
        self._take("punct", ";")
        return ContinuousAssign(target, value, pos=(kw.line, kw.col))

    def _reg_decl(self) -> RegDecl:
        kw = self._take("keyword", "reg")
        msb: int | None = None
        lsb: int | None = None
        if self._at("punct", "["):
            self._i += 1
            msb = int(self._take("number", expected="a bit index").text)
            self._take("punct", ":")
            lsb = int(self._take("number", expected="a bit index").text)
            self._take("punct", "]")
        name = self._take("ident", expected="a register name").text
        self._take("punct", ";")
        return RegDecl(name, msb, lsb, pos=(kw.line, kw.col))

    def _enum_decl(self) -> EnumDecl:
        kw = self._take("keyword", "enum")
        self._take("punct", "{")
        members = [self._take("ident", expected="a state name").text]
        while self._at("punct", ","):
            self._i += 1
            members.append(self._take("ident", expected="a state name").text)
        self._take("punct", "}")
        name = self._take("ident", expected="a state variable name").text
        self._take("punct", ";")
        return EnumDecl(tuple(members), name, pos=(kw.line, kw.col))

    def _always(self) -> AlwaysBlock:
        kw = self._take("keyword", "always")
        self._take("punct", "@")
        self._take("punct", "(")
        edges = [self._edge()]
        while self._at("keyword", "or"):
            self._i += 1
            edges.append(self._edge())
        self._take("punct", ")")
        self._take("keyword", "begin")
        body: list[Stmt] = []
        while not self._at("keyword", "end"):
            if self._peek() is None:
                raise self._fail("'end'")
            body.append(self._stmt())
        self._i += 1
        return AlwaysBlock(tuple(edges), tuple(body), pos=(kw.line, kw.col))

    def _edge(self) -> str:
        self._take("keyword", "posedge")
        return self._take("ident", expected="a signal name").text

    def _nonblocking(self) -> NonBlocking:
        tok = self._take("ident")
        self._take("operator", "<=")
        value = self._expr()
        self._take("punct", ";")
        return NonBlocking(tok.text, value, pos=(tok.line, tok.col))

    def _stmt(self) -> Stmt:
        tok = self._peek()
        if tok is None:
            raise self._fail("a statement")
        if tok.kind == "comment":
            self._i += 1
            return Comment(tok.text, pos=(tok.line, tok.col))
        if tok.kind == "keyword":
            if tok.text == "if":
                return self._if_chain()
            if tok.text in ("unique", "case"):
                return self._case()
            if tok.text == "begin":
                return self._block()
            if tok.text == "assign":
                return self._assign()
        if tok.kind == "ident":
            return self._nonblocking()
        raise self._fail("a statement")

    def _block(self) -> Block:
        self._take("keyword", "begin")
        stmts: list[Stmt] = []
        while not self._at("keyword", "end"):
            if self._peek() is None:
                raise self._fail("'end'")
            stmts.append(self._stmt())
        self._i += 1
        return Block(tuple(stmts))

    def _if_body(self) -> Stmt:
        if self._at("keyword", "begin"):
            return self._block()
        return self._stmt()

    def _if_chain(self) -> IfChain:
        kw = self._take("keyword", "if")
        self._take("punct", "(")
        cond = self._expr()
        self._take("punct", ")")
        arms = [IfArm(cond, self._if_body())]
        orelse: Stmt | None = None
        while self._at("keyword", "else"):
            self._i += 1
            if self._at("keyword", "if"):
                # Unbraced else-if continues the same chain.
                self._i += 1
                self._take("punct", "(")
                cond = self._expr()
                self._take("punct", ")")
                arms.append(IfArm(cond, self._if_body()))
            else:
                orelse = self._if_body()
                break
        return IfChain(tuple(arms), orelse, pos=(kw.line, kw.col))

    def _case(self) -> CaseStmt:
        unique = False
        kw = self._peek()
        assert kw is not None
        if self._at("keyword", "unique"):
            unique = True
            self._i += 1
        self._take("keyword", "case")
        self._take("punct", "(")
        selector = self._take("ident", expected="a case selector").text
        self._take("punct", ")")
        arms: list[CaseArm] = []
        while not self._at("keyword", "endcase"):
            if self._peek() is None:
                raise self._fail("'endcase'")
            label = self._take("ident", expected="a case label").text
            self._take("punct", ":")
            arms.append(CaseArm(label, self._stmt()))
        self._i += 1
        return CaseStmt(selector, tuple(arms), unique, pos=(kw.line, kw.col))

    def _expr(self) -> ExprNode:
        left = self._unary()
        while True:
            tok = self._peek()
            if tok is None or tok.kind != "operator" or tok.text not in _BINOPS:
                return left
            self._i += 1
            left = BinExpr(tok.text, left, self._unary())

    def _unary(self) -> ExprNode:
        if self._at("operator", "!"):
            self._i += 1
            return UnaryNot(self._unary())
        return self._primary()

    def _primary(self) -> ExprNode:
        tok = self._peek()
        if tok is None:
            raise self._fail("an expression")
        if tok.kind == "ident":
            self._i += 1
            return Name(tok.text)
        if tok.kind in ("number", "sized_literal"):
            self._i += 1
            return Const(tok.text)
        if tok.kind == "punct" and tok.text == "(":
            self._i += 1
            inner = self._expr()
            self._take("punct", ")")
            return inner
        raise self._fail("an expression")


def parse_snippet(text: str) -> SnippetAst:
    """Parse a snippet, raising SnippetSyntaxError on the first problem."""
    tokens = tokenize(text)
    for tok in tokens:
        if tok.kind == "error":
            raise SnippetSyntaxError(tok.line, tok.col, f"unexpected character {tok.text!r}")
    return _Parser(tokens).parse()


def check(text: str) -> list[Diagnostic]:
    """Lint a snippet. An empty list means it compiles under the subset."""
    tokens = tokenize(text)
    lex_diags = [
        Diagnostic(t.line, t.col, f"unexpected character {t.text!r}")
        for t in tokens
        if t.kind == "error"
    ]
    if lex_diags:
        return lex_diags
    try:
        ast = _Parser(tokens).parse()
    except SnippetSyntaxError as exc:
        return [Diagnostic(exc.line, exc.col, exc.message)]
    return _check_semantics(ast)


def _check_semantics(ast: SnippetAst) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    declared: dict[str, str] = {}  # name -> reg | enum | state | wire

    def declare(name: str, kind: str, pos: tuple[int, int]) -> None:
        if name in declared:
            diags.append(Diagnostic(pos[0], pos[1], f"duplicate declaration of '{name}'"))
        else:
            declared[name] = kind

    def walk(stmt: Stmt, in_always: bool) -> None:
        if isinstance(stmt, NonBlocking):
            if not in_always:
                diags.append(
                    Diagnostic(*stmt.pos, "nonblocking assignment outside an always block")
                )
            elif declared.get(stmt.target) not in ("reg", "enum"):
                diags.append(
                    Diagnostic(
                        *stmt.pos,
                        f"nonblocking assignment to '{stmt.target}', "
                        "which is not a declared register",
                    )
                )
        elif isinstance(stmt, ContinuousAssign):
            diags.append(
                Diagnostic(*stmt.pos, "continuous assignment inside an always block")
            )
        elif isinstance(stmt, IfChain):
            for arm in stmt.arms:
                walk(arm.body, in_always)
            if stmt.orelse is not None:
                walk(stmt.orelse, in_always)
        elif isinstance(stmt, CaseStmt):
            for arm in stmt.arms:
                walk(arm.body, in_always)
        elif isinstance(stmt, Block):
            for inner in stmt.stmts:
                walk(inner, in_always)
        # Comments need no checking.

    for item in ast.items:
        if isinstance(item, RegDecl):
            declare(item.name, "reg", item.pos)
        elif isinstance(item, EnumDecl):
            for member in item.members:
                declare(member, "state", item.pos)
            declare(item.name, "enum", item.pos)
        elif isinstance(item, ContinuousAssign):
            kind = declared.get(item.target)
            if kind in ("reg", "enum"):
                diags.append(
                    Diagnostic(*item.pos, f"continuous assignment to register '{item.target}'")
                )
            elif kind == "state":
                diags.append(
                    Diagnostic(*item.pos, f"continuous assignment to state '{item.target}'")
                )
            elif kind == "wire":
                diags.append(Diagnostic(*item.pos, f"multiple drivers for '{item.target}'"))
            else:
                declared[item.target] = "wire"
        elif isinstance(item, AlwaysBlock):
            for stmt in item.body:
                walk(stmt, True)
        elif isinstance(item, NonBlocking):
            walk(item, False)
    return diags
