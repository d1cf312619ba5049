"""Render a task metastructure into English through a template.

Feature model: a task's features are the things a template must be able
to say about it. Register tasks carry presence features (``enable``,
``reset``, ``rdef`` for a defined reset, ``clock``) plus a marker for
how the enable is spelled (named, defined, or both). Assignment tasks
carry exactly one expression-shape feature. Scenario assignments carry
none (every descriptive template can tell the whole story). A template
is suitable when its required features are all present and everything
present is supported.
"""

from __future__ import annotations

import random

from veritask.errors import NoSuitableTemplateError, UnfilledSlotError
from veritask.meta import (
    AssignmentMeta,
    BinOp,
    EnableSpec,
    Expr,
    InputSpec,
    MultiMeta,
    Not,
    RegisterMeta,
    Scenario,
    ScenarioRegisterMeta,
    SeqGenMeta,
    TaskMeta,
    Var,
)
from veritask.templates.model import (
    Clause,
    DA_SET_FIELDS,
    DR_SET_FIELDS,
    Lexicon,
    Literal,
    Slot,
    article_for,
    lexicon_word,
    quote,
)
from veritask.templates.registry import Registry, Template
from veritask.vocab import ASSIGN_SETTINGS, REGISTER_SETTINGS

__all__ = [
    "expr_shape",
    "enable_marker",
    "features_of",
    "meta_class",
    "suitable",
    "select_template",
    "render_english",
    "render_multi",
]


def expr_shape(expr: Expr) -> str:
    if isinstance(expr, Var):
        return "atom_plain"
    if isinstance(expr, Not):
        return "atom_negated"
    if isinstance(expr.left, Not) or isinstance(expr.right, Not):
        return "binop_negated"
    return "binop_plain"


def enable_marker(enable: EnableSpec) -> str:
    if enable.name is not None and enable.expr is not None:
        return "en_full"
    if enable.expr is not None:
        return "en_expr"
    return "en_named"


def features_of(meta: TaskMeta) -> frozenset[str]:
    if isinstance(meta, AssignmentMeta):
        if isinstance(meta.expr, Scenario):
            return frozenset()
        return frozenset({expr_shape(meta.expr)})
    if isinstance(meta, RegisterMeta):
        features = set()
        if meta.enable is not None:
            features.add("enable")
            features.add(enable_marker(meta.enable))
        if meta.reset is not None:
            features.add("reset")
            if meta.reset.expr is not None:
                features.add("rdef")
        if meta.clock is not None:
            features.add("clock")
        return frozenset(features)
    if isinstance(meta, ScenarioRegisterMeta):
        return frozenset({"clock"}) if meta.clock is not None else frozenset()
    if isinstance(meta, SeqGenMeta):
        features = {enable_marker(meta.enable)}
        if meta.reset is not None:
            features.add("reset")
            if meta.reset.expr is not None:
                features.add("rdef")
        return frozenset(features)
    raise TypeError(f"no feature set for {type(meta).__name__}")


def meta_class(meta: TaskMeta) -> str:
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
    raise TypeError(f"unknown meta type {type(meta).__name__}")


def suitable(template: Template, meta: TaskMeta) -> bool:
    features = features_of(meta)
    return template.required <= features <= template.supported


def select_template(
    cls: str,
    meta: TaskMeta,
    registry: Registry,
    rng: random.Random,
    pool: str = "all",
) -> Template:
    candidates = registry.templates(cls, pool)
    if not candidates:
        raise NoSuitableTemplateError(cls, set())
    features = features_of(meta)
    fits = [t for t in candidates if t.required <= features <= t.supported]
    if not fits:
        unmet: set[str] = set()
        for template in candidates:
            unmet |= features - template.supported
            unmet |= template.required - features
        raise NoSuitableTemplateError(cls, unmet)
    return rng.choice(fits)


def _render_expr(expr: Expr, lexicon: Lexicon, rng: random.Random) -> str:
    if isinstance(expr, Var):
        return quote(expr.name)
    if isinstance(expr, Not):
        return "not " + quote(expr.operand.name)
    word = lexicon_word(lexicon, "ops", expr.op, rng)
    left = _render_expr(expr.left, lexicon, rng)
    right = _render_expr(expr.right, lexicon, rng)
    return f"{left} {word} {right}"


def _render_input(spec: InputSpec, lexicon: Lexicon, rng: random.Random) -> str:
    rendered = _render_expr(spec.expr, lexicon, rng)
    if spec.name is not None:
        return f"{quote(spec.name)} defined as {rendered}"
    if isinstance(spec.expr, BinOp) and rng.random() < 0.5:
        return "defined as " + rendered
    return rendered


def _render_enable(enable: EnableSpec, lexicon: Lexicon, rng: random.Random) -> str:
    if enable.expr is None:
        return quote(enable.name)
    rendered = _render_expr(enable.expr, lexicon, rng)
    if enable.name is None:
        return "defined as " + rendered
    return f"{quote(enable.name)} defined as {rendered}"


def _render_enable_open(enable: EnableSpec, lexicon: Lexicon, rng: random.Random) -> str:
    if enable.expr is None:
        return quote(enable.name)
    return _render_expr(enable.expr, lexicon, rng)


def _mark(level: str) -> str:
    return "1" if level == "high" else "0"


def _sync_article(sync: bool, lexicon: Lexicon, rng: random.Random) -> str:
    word = lexicon_word(lexicon, "sync", sync, rng)
    return f"{article_for(word)} {word}"


def _pa_value(slot: Slot, meta: AssignmentMeta, lexicon, rng) -> str:
    expr = meta.expr
    if slot.name == "out":
        return meta.target
    if slot.name == "expr":
        return _render_expr(expr, lexicon, rng)
    if slot.name == "x":
        return expr.left.name
    if slot.name == "y":
        return expr.right.name
    if slot.name == "xatom":
        return _render_expr(expr.left, lexicon, rng)
    if slot.name == "yatom":
        return _render_expr(expr.right, lexicon, rng)
    if slot.name == "op":
        return lexicon_word(lexicon, "ops", expr.op, rng)
    raise UnfilledSlotError(f"assignment template slot {slot.name!r} has no value")


def _da_value(slot: Slot, meta: AssignmentMeta, lexicon, rng) -> str:
    scenario = meta.expr
    setting = ASSIGN_SETTINGS[scenario.setting]
    if slot.name in DA_SET_FIELDS:
        value = getattr(setting, DA_SET_FIELDS[slot.name])
        if slot.name == "placecap":
            return value[:1].upper() + value[1:]
        return value
    if slot.name == "count":
        return lexicon_word(lexicon, "number", len(scenario.inputs), rng)
    if slot.name == "inpol":
        return lexicon_word(lexicon, "polarity", scenario.inputs[0].level, rng)
    if slot.name == "names":
        return ", ".join(quote(signal.name) for signal in scenario.inputs)
    if slot.name == "outpol":
        return lexicon_word(lexicon, "polarity", scenario.output.level, rng)
    if slot.name == "out":
        return scenario.output.name
    if slot.name == "quant":
        return lexicon_word(lexicon, "quantifier", scenario.quantifier, rng)
    raise UnfilledSlotError(f"scenario template slot {slot.name!r} has no value")


def _pr_value(slot: Slot, meta: RegisterMeta, lexicon, rng) -> str:
    if slot.name == "width":
        return str(meta.width)
    if slot.name == "reg":
        return meta.reg
    if slot.name == "input":
        return _render_input(meta.input, lexicon, rng)
    if slot.name == "enable":
        return _render_enable(meta.enable, lexicon, rng)
    if slot.name == "rart":
        return _sync_article(meta.reset.sync, lexicon, rng)
    if slot.name == "rword":
        return lexicon_word(lexicon, "sync", meta.reset.sync, rng)
    if slot.name == "rst":
        return meta.reset.name
    if slot.name == "rexpr":
        return _render_expr(meta.reset.expr, lexicon, rng)
    if slot.name == "clk":
        return meta.clock
    raise UnfilledSlotError(f"register template slot {slot.name!r} has no value")


def _dr_value(slot: Slot, meta: ScenarioRegisterMeta, lexicon, rng) -> str:
    setting = REGISTER_SETTINGS[meta.setting]
    if slot.name in DR_SET_FIELDS:
        return getattr(setting, DR_SET_FIELDS[slot.name])
    if slot.name == "trig":
        return meta.trigger.name
    if slot.name == "mark_t":
        return _mark(meta.trigger.level)
    if slot.name == "out":
        return meta.output.name
    if slot.name == "mark_on":
        return _mark(meta.output.level)
    if slot.name == "mark_off":
        return _mark("low" if meta.output.level == "high" else "high")
    if slot.name == "sync":
        return lexicon_word(lexicon, "sync", meta.cancel.sync, rng)
    if slot.name == "cancel":
        return meta.cancel.name
    if slot.name == "mark_c":
        return _mark(meta.cancel.level)
    if slot.name == "clk":
        return meta.clock
    raise UnfilledSlotError(f"latch template slot {slot.name!r} has no value")


def _pg_value(slot: Slot, meta: SeqGenMeta, lexicon, rng) -> str:
    if slot.name == "seq":
        bits = ", ".join(format(element, f"0{meta.width}b") for element in meta.elements)
        return f"[{bits}]"
    if slot.name == "width":
        return str(meta.width)
    if slot.name == "out":
        return meta.out
    if slot.name == "clk":
        return meta.clock
    if slot.name == "enable":
        return _render_enable(meta.enable, lexicon, rng)
    if slot.name == "enopen":
        return _render_enable_open(meta.enable, lexicon, rng)
    if slot.name == "rart":
        return _sync_article(meta.reset.sync, lexicon, rng)
    if slot.name == "rword":
        return lexicon_word(lexicon, "sync", meta.reset.sync, rng)
    if slot.name == "rst":
        return meta.reset.name
    if slot.name == "rexpr":
        return _render_expr(meta.reset.expr, lexicon, rng)
    raise UnfilledSlotError(f"sequence template slot {slot.name!r} has no value")


_VALUE_FNS = {"pa": _pa_value, "da": _da_value, "pr": _pr_value, "dr": _dr_value, "pg": _pg_value}


def render_english(
    template: Template,
    meta: TaskMeta,
    lexicon: Lexicon,
    rng: random.Random,
) -> str:
    """Fill a template's slots from a task, dropping absent clauses."""
    features = features_of(meta)
    if not (template.required <= features <= template.supported):
        raise UnfilledSlotError(
            f"template {template.id} cannot express features {sorted(features)}"
        )
    value_fn = _VALUE_FNS[template.cls]
    parts: list[str] = []

    def walk(segments):
        for segment in segments:
            if isinstance(segment, Literal):
                parts.append(segment.text)
            elif isinstance(segment, Slot):
                parts.append(value_fn(segment, meta, lexicon, rng))
            elif isinstance(segment, Clause):
                if segment.feature in features:
                    walk(segment.segments)

    walk(template.segments)
    return "".join(parts)


def render_multi(
    meta: MultiMeta,
    registry: Registry,
    lexicon: Lexicon,
    rng: random.Random,
    pool: str = "trained",
) -> str:
    """Render a multi task: one sentence per subtask, space separated."""
    parts = []
    for subtask in meta.subtasks:
        template = select_template(meta_class(subtask), subtask, registry, rng, pool)
        parts.append(render_english(template, subtask, lexicon, rng))
    return " ".join(parts)
