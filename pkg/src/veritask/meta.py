"""Task metastructures: the sampled description of one hardware task.

A metastructure captures everything the Verilog emitter needs, independent
of the English wording used to describe it. Prescriptive tasks carry
signals and operators directly; descriptive tasks carry a scenario (a
setting plus asserted-level semantics) that is later reduced to logic.

Signal names are one to three characters, starting with a letter, and are
never Verilog keywords. All declared names within one task are pairwise
distinct; the single exception is the inferred clock, which is always
called ``clk`` and may be shared by several subtasks of a multi task.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

CLASSES = ("pa", "da", "pr", "dr", "pg", "mt")

BOOL_OPS = ("and", "or", "nand", "nor", "xor", "xnor")
# Comparison and arithmetic operators appear only as the top node of a
# derived-signal definition, never nested under a Boolean operator.
CMP_OPS = ("ge", "gt", "mod")
OPS = BOOL_OPS + CMP_OPS

LEVELS = ("high", "low")
QUANTIFIERS = ("any", "all")

IDENT_RE = re.compile(r"[a-z][a-z0-9]{0,2}\Z")

# Verilog-2001/2005 reserved words. Only short lowercase entries can ever
# collide with sampled names, but the full list is kept so nobody has to
# re-derive the filtering rule when widening the identifier space.
VERILOG_KEYWORDS = frozenset("""
always and assign automatic begin buf bufif0 bufif1 case casex casez cell
cmos config deassign default defparam design disable edge else end endcase
endconfig endfunction endgenerate endmodule endprimitive endspecify
endtable endtask event for force forever fork function generate genvar
highz0 highz1 if ifnone incdir include initial inout input instance
integer join large liblist library localparam macromodule medium module
nand negedge nmos nor noshowcancelled not notif0 notif1 or output
parameter pmos posedge primitive pull0 pull1 pulldown pullup
pulsestyle_ondetect pulsestyle_onevent rcmos real realtime reg release
repeat rnmos rpmos rtran rtranif0 rtranif1 scalared showcancelled signed
small specify specparam strong0 strong1 supply0 supply1 table task time
tran tranif0 tranif1 tri tri0 tri1 triand trior trireg unsigned use
vectored wait wand weak0 weak1 while wire wor xnor xor
""".split())

# Names the emitter claims for itself: the inferred clock, the sequence
# generator state register and its enum members.
EMITTER_RESERVED = frozenset({"clk", "state", "s0", "s1", "s2", "s3"})

RESERVED = VERILOG_KEYWORDS | EMITTER_RESERVED


def is_valid_identifier(name: str) -> bool:
    return bool(IDENT_RE.match(name)) and name not in RESERVED


# --------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Var | Not | BinOp


def expr_depth(expr: Expr) -> int:
    if isinstance(expr, Var):
        return 0
    if isinstance(expr, Not):
        return 1 + expr_depth(expr.operand)
    return 1 + max(expr_depth(expr.left), expr_depth(expr.right))


def expr_leaves(expr: Expr) -> list[str]:
    if isinstance(expr, Var):
        return [expr.name]
    if isinstance(expr, Not):
        return expr_leaves(expr.operand)
    return expr_leaves(expr.left) + expr_leaves(expr.right)


def expr_ops(expr: Expr) -> list[str]:
    if isinstance(expr, Var):
        return []
    if isinstance(expr, Not):
        return expr_ops(expr.operand)
    return [expr.op] + expr_ops(expr.left) + expr_ops(expr.right)


def _check_expr(expr: Expr, depth_cap: int, errors: list[str], top: bool = True) -> None:
    if expr_depth(expr) > depth_cap:
        errors.append(f"expression depth {expr_depth(expr)} exceeds cap {depth_cap}")
    for name in expr_leaves(expr):
        if not IDENT_RE.match(name) or name in VERILOG_KEYWORDS:
            errors.append(f"bad signal name {name!r} in expression")
    for i, op in enumerate(expr_ops(expr)):
        if op not in OPS:
            errors.append(f"unknown operator {op!r}")
        elif op in CMP_OPS and (not top or i > 0):
            errors.append(f"operator {op!r} may only head a derived-signal definition")


# --------------------------------------------------------------------------
# Derived signals: a value that is either a plain named signal, a named
# signal with a defining expression, or a bare expression with no name.


@dataclass(frozen=True)
class InputSpec:
    """The data input of a register: an expression, optionally named.

    When the input carries a name the emitter declares it with a
    continuous assign and stores from the name; otherwise the expression
    is written inline in the nonblocking assignment.
    """

    expr: Expr
    name: str | None = None


@dataclass(frozen=True)
class EnableSpec:
    """An enable guard: named, defined, or both.

    ``name`` alone guards on an external signal; ``expr`` alone is written
    inline in the guard; both together get a continuous assign and guard
    on the name.
    """

    name: str | None = None
    expr: Expr | None = None

    def __post_init__(self):
        if self.name is None and self.expr is None:
            raise ValueError("enable needs a name, an expression, or both")


@dataclass(frozen=True)
class ResetSpec:
    """A reset line. Asynchronous resets join the sensitivity list."""

    name: str
    sync: bool = True
    expr: Expr | None = None


# --------------------------------------------------------------------------
# Scenarios (descriptive tasks)


@dataclass(frozen=True)
class ScenarioSignal:
    name: str
    level: str  # asserted level: "high" or "low"


@dataclass(frozen=True)
class CancelSpec:
    name: str
    level: str
    sync: bool = True


@dataclass(frozen=True)
class Scenario:
    """A combinational setting: n sensors, a quantifier, one output.

    The output asserts exactly when the quantifier holds over the inputs
    being at their asserted levels.
    """

    setting: str
    inputs: tuple[ScenarioSignal, ...]
    output: ScenarioSignal
    quantifier: str


# --------------------------------------------------------------------------
# Task variants


@dataclass(frozen=True)
class AssignmentMeta:
    target: str
    expr: Expr | Scenario


@dataclass(frozen=True)
class RegisterMeta:
    reg: str
    width: int
    input: InputSpec
    enable: EnableSpec | None = None
    reset: ResetSpec | None = None
    clock: str | None = None  # None means inferred, emitted as clk


@dataclass(frozen=True)
class ScenarioRegisterMeta:
    """A registered scenario: trigger sets the output, cancel clears it."""

    setting: str
    output: ScenarioSignal
    trigger: ScenarioSignal
    cancel: CancelSpec
    clock: str | None = None


@dataclass(frozen=True)
class SeqGenMeta:
    out: str
    width: int
    elements: tuple[int, ...]
    enable: EnableSpec
    clock: str
    reset: ResetSpec | None = None


@dataclass(frozen=True)
class MultiMeta:
    subtasks: tuple["TaskMeta", ...] = field(default_factory=tuple)


TaskMeta = AssignmentMeta | RegisterMeta | ScenarioRegisterMeta | SeqGenMeta | MultiMeta

SubtaskMeta = (AssignmentMeta, RegisterMeta)


def meta_class(meta: TaskMeta) -> str:
    """The task class tag of a metastructure."""
    if isinstance(meta, AssignmentMeta):
        return "da" if isinstance(meta.expr, Scenario) else "pa"
    if isinstance(meta, RegisterMeta):
        return "pr"
    if isinstance(meta, ScenarioRegisterMeta):
        return "dr"
    if isinstance(meta, SeqGenMeta):
        return "pg"
    if isinstance(meta, MultiMeta):
        return "mt"
    raise TypeError(f"not a task meta: {meta!r}")


def declared_names(meta: TaskMeta) -> list[str]:
    """Names the task declares or drives, in emission order.

    Expression leaves are free inputs and are not included; the inferred
    clock is not included either.
    """
    if isinstance(meta, AssignmentMeta):
        return [meta.target]
    if isinstance(meta, RegisterMeta):
        names = []
        if meta.input.name:
            names.append(meta.input.name)
        if meta.enable and meta.enable.name and meta.enable.expr:
            names.append(meta.enable.name)
        if meta.reset and meta.reset.expr:
            names.append(meta.reset.name)
        names.append(meta.reg)
        return names
    if isinstance(meta, ScenarioRegisterMeta):
        return [meta.output.name]
    if isinstance(meta, SeqGenMeta):
        names = []
        if meta.enable.name and meta.enable.expr:
            names.append(meta.enable.name)
        if meta.reset and meta.reset.expr:
            names.append(meta.reset.name)
        names.append(meta.out)
        return names
    if isinstance(meta, MultiMeta):
        out: list[str] = []
        for sub in meta.subtasks:
            out.extend(declared_names(sub))
        return out
    raise TypeError(f"not a task meta: {meta!r}")


def referenced_names(meta: TaskMeta) -> set[str]:
    """Every signal name the task mentions, declared or free."""
    names = set(declared_names(meta))
    if isinstance(meta, AssignmentMeta):
        if isinstance(meta.expr, Scenario):
            names.update(s.name for s in meta.expr.inputs)
        else:
            names.update(expr_leaves(meta.expr))
    elif isinstance(meta, RegisterMeta):
        names.update(expr_leaves(meta.input.expr))
        if meta.enable:
            if meta.enable.name:
                names.add(meta.enable.name)
            if meta.enable.expr:
                names.update(expr_leaves(meta.enable.expr))
        if meta.reset:
            names.add(meta.reset.name)
            if meta.reset.expr:
                names.update(expr_leaves(meta.reset.expr))
        if meta.clock:
            names.add(meta.clock)
    elif isinstance(meta, ScenarioRegisterMeta):
        names.update({meta.trigger.name, meta.cancel.name})
        if meta.clock:
            names.add(meta.clock)
    elif isinstance(meta, SeqGenMeta):
        if meta.enable.name:
            names.add(meta.enable.name)
        if meta.enable.expr:
            names.update(expr_leaves(meta.enable.expr))
        if meta.reset:
            names.add(meta.reset.name)
            if meta.reset.expr:
                names.update(expr_leaves(meta.reset.expr))
        names.add(meta.clock)
    elif isinstance(meta, MultiMeta):
        for sub in meta.subtasks:
            names.update(referenced_names(sub))
    return names


def validate_meta(meta: TaskMeta, expr_depth_cap: int = 2) -> list[str]:
    """Collect invariant violations; an empty list means the meta is sound."""
    errors: list[str] = []

    def check_name(name: str, what: str) -> None:
        if not IDENT_RE.match(name or ""):
            errors.append(f"{what} {name!r} is not a valid identifier")
        elif name in VERILOG_KEYWORDS:
            errors.append(f"{what} {name!r} is a Verilog keyword")

    def check_scenario_sig(sig: ScenarioSignal, what: str) -> None:
        check_name(sig.name, what)
        if sig.level not in LEVELS:
            errors.append(f"{what} {sig.name!r} has bad level {sig.level!r}")

    def output_name(m: TaskMeta) -> str:
        if isinstance(m, AssignmentMeta):
            return m.target
        if isinstance(m, RegisterMeta):
            return m.reg
        if isinstance(m, ScenarioRegisterMeta):
            return m.output.name
        if isinstance(m, SeqGenMeta):
            return m.out
        return ""

    def check_leaves_clear_of(expr: Expr, out: str) -> None:
        if out in expr_leaves(expr):
            errors.append(f"expression references its own output {out!r}")

    def check_one(m: TaskMeta) -> None:
        out = output_name(m)
        if isinstance(m, AssignmentMeta):
            check_name(m.target, "assignment target")
            if isinstance(m.expr, Scenario):
                sc = m.expr
                if not 2 <= len(sc.inputs) <= 4:
                    errors.append(f"scenario has {len(sc.inputs)} inputs, wanted 2..4")
                for sig in sc.inputs:
                    check_scenario_sig(sig, "scenario input")
                check_scenario_sig(sc.output, "scenario output")
                if sc.output.name != m.target:
                    errors.append("scenario output does not match assignment target")
                if sc.quantifier not in QUANTIFIERS:
                    errors.append(f"bad quantifier {sc.quantifier!r}")
                if m.target in {s.name for s in sc.inputs}:
                    errors.append("scenario inputs include the output")
            else:
                _check_expr(m.expr, expr_depth_cap, errors)
                check_leaves_clear_of(m.expr, out)
        elif isinstance(m, RegisterMeta):
            check_name(m.reg, "register name")
            if not 1 <= m.width <= 8:
                errors.append(f"register width {m.width} outside 1..8")
            _check_expr(m.input.expr, expr_depth_cap, errors)
            check_leaves_clear_of(m.input.expr, out)
            if m.input.name:
                check_name(m.input.name, "input name")
            if m.enable:
                if m.enable.name:
                    check_name(m.enable.name, "enable name")
                if m.enable.expr:
                    _check_expr(m.enable.expr, expr_depth_cap, errors)
                    check_leaves_clear_of(m.enable.expr, out)
            if m.reset:
                check_name(m.reset.name, "reset name")
                if m.reset.expr:
                    _check_expr(m.reset.expr, expr_depth_cap, errors)
                    check_leaves_clear_of(m.reset.expr, out)
            if m.clock:
                check_name(m.clock, "clock name")
        elif isinstance(m, ScenarioRegisterMeta):
            check_scenario_sig(m.output, "scenario output")
            check_scenario_sig(m.trigger, "trigger")
            check_name(m.cancel.name, "cancel name")
            if m.cancel.level not in LEVELS:
                errors.append(f"cancel has bad level {m.cancel.level!r}")
            if not m.cancel.sync and m.cancel.level != "high":
                errors.append("asynchronous cancel must be active-high")
            if m.clock:
                check_name(m.clock, "clock name")
        elif isinstance(m, SeqGenMeta):
            check_name(m.out, "sequence output")
            if not 1 <= m.width <= 3:
                errors.append(f"sequence width {m.width} outside 1..3")
            if not 2 <= len(m.elements) <= 4:
                errors.append(f"sequence has {len(m.elements)} elements, wanted 2..4")
            for value in m.elements:
                if not 0 <= value < (1 << m.width):
                    errors.append(f"element {value} does not fit in {m.width} bits")
            if m.enable.name:
                check_name(m.enable.name, "enable name")
            if m.enable.expr:
                _check_expr(m.enable.expr, expr_depth_cap, errors)
                check_leaves_clear_of(m.enable.expr, out)
            if m.reset:
                check_name(m.reset.name, "reset name")
                if m.reset.expr:
                    _check_expr(m.reset.expr, expr_depth_cap, errors)
            check_name(m.clock, "clock name")
        else:
            errors.append(f"unexpected meta {type(m).__name__}")

    if isinstance(meta, MultiMeta):
        if not 2 <= len(meta.subtasks) <= 4:
            errors.append(f"multi task has {len(meta.subtasks)} subtasks, wanted 2..4")
        for sub in meta.subtasks:
            if not isinstance(sub, SubtaskMeta):
                errors.append(
                    f"multi subtask {type(sub).__name__} is not an assignment or register"
                )
            else:
                check_one(sub)
    else:
        check_one(meta)

    declared = declared_names(meta)
    seen: set[str] = set()
    for name in declared:
        if name in seen:
            errors.append(f"name {name!r} declared twice in one task")
        seen.add(name)
    return errors
