"""Deterministic Verilog emission for task metastructures.

Every metastructure maps to exactly one snippet string, so exact-match
scoring of model output against the reference is well defined. The layout
is fixed: one statement per line inside blocks, two spaces of indent per
nesting level, a single space around binary operators, guards written as
``if(cond)``, and no trailing whitespace. Sequence generator case arms are
the one deliberate exception to one-statement-per-line: each arm is a
single ``sK: if(g) begin state <= sN; out <= lit; end`` line, which is how
such machines are conventionally written at this size.

Emission order for a register-shaped task: derived-signal assigns (input,
enable, reset, in that order), the inferred-clock comment when no clock
was specified, the declarations, then the always block. Negated Boolean
operators are written as a negated positive form, for example the nand of
x and y becomes ``!(x & y)``. Operand order is never commuted.
"""

from __future__ import annotations

from veritask.meta import (
    AssignmentMeta,
    BinOp,
    Expr,
    MultiMeta,
    Not,
    RegisterMeta,
    Scenario,
    ScenarioRegisterMeta,
    SeqGenMeta,
    TaskMeta,
    Var,
)

INFERRED_CLOCK = "clk"
CLOCK_COMMENT = "// assume clock clk"

_OP_SYMBOL = {
    "and": "&",
    "or": "|",
    "xor": "^",
    "ge": ">=",
    "gt": ">",
    "mod": "%",
}
_NEGATED_BASE = {"nand": "and", "nor": "or", "xnor": "xor"}


def emit_expr(expr: Expr) -> str:
    """Render an expression in the canonical snippet syntax."""
    return _render(expr, parent_op=None)


def _render(expr: Expr, parent_op: str | None) -> str:
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Not):
        if isinstance(expr.operand, Var):
            return "!" + expr.operand.name
        return "!(" + _render(expr.operand, None) + ")"
    if expr.op in _NEGATED_BASE:
        base = _NEGATED_BASE[expr.op]
        sym = _OP_SYMBOL[base]
        inner = f"{_render(expr.left, base)} {sym} {_render(expr.right, base)}"
        return "!(" + inner + ")"
    sym = _OP_SYMBOL[expr.op]
    text = f"{_render(expr.left, expr.op)} {sym} {_render(expr.right, expr.op)}"
    # Same-operator chains stay flat; a differing parent gets parentheses so
    # the printed tree re-parses to itself.
    if parent_op is not None and parent_op != expr.op:
        return "(" + text + ")"
    return text


def reduce_scenario(scenario: Scenario) -> Expr:
    """Collapse a combinational scenario into one expression.

    The asserted condition is the quantifier applied over each input being
    at its asserted level. When most literals would be negated, De Morgan
    turns the chain into its dual with a single leading negation. An
    active-low output negates the whole expression once more, and double
    negations cancel.
    """
    op = "and" if scenario.quantifier == "all" else "or"
    literals = [(sig.name, sig.level == "low") for sig in scenario.inputs]
    negated = sum(1 for _, neg in literals if neg)
    outer_not = False
    if 2 * negated > len(literals):
        op = "or" if op == "and" else "and"
        literals = [(name, not neg) for name, neg in literals]
        outer_not = True
    expr: Expr = None  # type: ignore[assignment]
    for name, neg in literals:
        leaf: Expr = Not(Var(name)) if neg else Var(name)
        expr = leaf if expr is None else BinOp(op, expr, leaf)
    if scenario.output.level == "low":
        outer_not = not outer_not
    return Not(expr) if outer_not else expr


def _sized_literal(value: int, width: int) -> str:
    return f"{width}'b{value:0{width}b}"


def _reg_decl(name: str, width: int) -> str:
    if width == 1:
        return f"reg {name};"
    return f"reg [{width - 1}:0] {name};"


def _guard_text(name: str | None, expr: Expr | None) -> str:
    """An if-guard: a name when one exists, otherwise the inline expression."""
    return name if name is not None else emit_expr(expr)


def _always_head(clock: str, async_signal: str | None) -> str:
    if async_signal:
        return f"always @(posedge {clock} or posedge {async_signal}) begin"
    return f"always @(posedge {clock}) begin"


def _emit_assignment(meta: AssignmentMeta) -> list[str]:
    expr = meta.expr
    if isinstance(expr, Scenario):
        expr = reduce_scenario(expr)
    return [f"assign {meta.target} = {emit_expr(expr)};"]


def _emit_register(meta: RegisterMeta) -> list[str]:
    lines: list[str] = []
    if meta.input.name:
        lines.append(f"assign {meta.input.name} = {emit_expr(meta.input.expr)};")
    if meta.enable and meta.enable.name and meta.enable.expr:
        lines.append(f"assign {meta.enable.name} = {emit_expr(meta.enable.expr)};")
    if meta.reset and meta.reset.expr:
        lines.append(f"assign {meta.reset.name} = {emit_expr(meta.reset.expr)};")
    clock = meta.clock or INFERRED_CLOCK
    if meta.clock is None:
        lines.append(CLOCK_COMMENT)
    lines.append(_reg_decl(meta.reg, meta.width))
    async_rst = meta.reset.name if meta.reset and not meta.reset.sync else None
    lines.append(_always_head(clock, async_rst))
    store = meta.input.name or emit_expr(meta.input.expr)
    body: list[str] = []
    if meta.reset and meta.enable:
        guard = _guard_text(meta.enable.name, meta.enable.expr)
        body += [
            f"if({meta.reset.name}) begin",
            f"  {meta.reg} <= 0;",
            f"end else if({guard}) begin",
            f"  {meta.reg} <= {store};",
            "end",
        ]
    elif meta.reset:
        body += [
            f"if({meta.reset.name}) begin",
            f"  {meta.reg} <= 0;",
            "end else begin",
            f"  {meta.reg} <= {store};",
            "end",
        ]
    elif meta.enable:
        guard = _guard_text(meta.enable.name, meta.enable.expr)
        body += [
            f"if({guard}) begin",
            f"  {meta.reg} <= {store};",
            "end",
        ]
    else:
        body.append(f"{meta.reg} <= {store};")
    lines.extend("  " + line for line in body)
    lines.append("end")
    return lines


def _emit_scenario_register(meta: ScenarioRegisterMeta) -> list[str]:
    lines: list[str] = []
    clock = meta.clock or INFERRED_CLOCK
    if meta.clock is None:
        lines.append(CLOCK_COMMENT)
    lines.append(_reg_decl(meta.output.name, 1))
    async_cancel = meta.cancel.name if not meta.cancel.sync else None
    lines.append(_always_head(clock, async_cancel))
    on_value = 1 if meta.output.level == "high" else 0
    cancel_guard = meta.cancel.name if meta.cancel.level == "high" else "!" + meta.cancel.name
    trigger_guard = (
        meta.trigger.name if meta.trigger.level == "high" else "!" + meta.trigger.name
    )
    lines += [
        f"  if({cancel_guard}) begin",
        f"    {meta.output.name} <= {1 - on_value};",
        f"  end else if({trigger_guard}) begin",
        f"    {meta.output.name} <= {on_value};",
        "  end",
        "end",
    ]
    return lines


def _emit_seqgen(meta: SeqGenMeta) -> list[str]:
    lines: list[str] = []
    if meta.enable.name and meta.enable.expr:
        lines.append(f"assign {meta.enable.name} = {emit_expr(meta.enable.expr)};")
    if meta.reset and meta.reset.expr:
        lines.append(f"assign {meta.reset.name} = {emit_expr(meta.reset.expr)};")
    count = len(meta.elements)
    states = ", ".join(f"s{k}" for k in range(count))
    lines.append(f"enum {{{states}}} state;")
    lines.append(_reg_decl(meta.out, meta.width))
    async_rst = meta.reset.name if meta.reset and not meta.reset.sync else None
    lines.append(_always_head(meta.clock, async_rst))
    guard = _guard_text(meta.enable.name, meta.enable.expr)
    # Each enabled tick moves to the next state and loads that destination
    # state's element, so the registered output and the state agree after
    # every edge. The final state wraps back to the first element.
    arms = []
    for k in range(count):
        nxt = (k + 1) % count
        lit = _sized_literal(meta.elements[nxt], meta.width)
        arms.append(f"s{k}: if({guard}) begin state <= s{nxt}; {meta.out} <= {lit}; end")
    first = _sized_literal(meta.elements[0], meta.width)
    if meta.reset:
        lines += [
            f"  if({meta.reset.name}) begin",
            "    state <= s0;",
            f"    {meta.out} <= {first};",
            "  end else begin",
            "    unique case (state)",
        ]
        lines.extend("      " + arm for arm in arms)
        lines += [
            "    endcase",
            "  end",
            "end",
        ]
    else:
        lines.append("  unique case (state)")
        lines.extend("    " + arm for arm in arms)
        lines += [
            "  endcase",
            "end",
        ]
    return lines


def emit(meta: TaskMeta) -> str:
    """Emit the canonical snippet for a task metastructure."""
    if isinstance(meta, AssignmentMeta):
        return "\n".join(_emit_assignment(meta))
    if isinstance(meta, RegisterMeta):
        return "\n".join(_emit_register(meta))
    if isinstance(meta, ScenarioRegisterMeta):
        return "\n".join(_emit_scenario_register(meta))
    if isinstance(meta, SeqGenMeta):
        return "\n".join(_emit_seqgen(meta))
    if isinstance(meta, MultiMeta):
        return "\n".join(emit(sub) for sub in meta.subtasks)
    raise TypeError(f"not a task meta: {meta!r}")
