"""Rule-based English-to-Verilog translation by template matching.

The translator inverts rendering: every template compiles to a regular
expression whose groups recover the slot values. A prompt must fully
match exactly one candidate template; the recovered metastructure is
validated and then emitted as Verilog. A prompt that matches no template
as a whole is re-read as a space-joined sequence of single-task
sentences (the multi-task form).

Recoveries that are internally inconsistent (echoed names that differ,
on/off marks that are not inverses, sequence elements of unequal width,
a stated width that disagrees with the pattern) reject the candidate
instead of guessing, as does any recovered meta that fails validation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from veritask.emit import emit
from veritask.errors import AmbiguousMatchError, NoMatchError
from veritask.meta import (
    BOOL_OPS,
    OPS,
    AssignmentMeta,
    BinOp,
    CancelSpec,
    EnableSpec,
    Expr,
    InputSpec,
    MultiMeta,
    Not,
    RegisterMeta,
    ResetSpec,
    Scenario,
    ScenarioRegisterMeta,
    ScenarioSignal,
    SeqGenMeta,
    TaskMeta,
    Var,
    validate_meta,
)
from veritask.templates.model import (
    Clause,
    DA_SET_FIELDS,
    DEFAULT_LEXICON,
    DR_SET_FIELDS,
    Lexicon,
    Literal,
    SLOT_KINDS,
    Segment,
    Slot,
    article_for,
)
from veritask.templates.registry import Registry, Template
from veritask.vocab import ASSIGN_SETTINGS, REGISTER_SETTINGS

__all__ = ["Translator", "parse_task", "translate"]

_ID = r"[a-z][a-z0-9]{0,2}"
_QID = rf"`{_ID}'"
_ATOM = rf"(?:not )?{_QID}"

# Classes a multi task may be segmented into.
_MULTI_CLASSES = ("pa", "da", "pr")


class _Reject(Exception):
    """Candidate template produced an inconsistent recovery."""


def _alt(words) -> str:
    ordered = sorted(set(words), key=lambda w: (-len(w), w))
    return "|".join(re.escape(word) for word in ordered)


def _op_alt(lexicon: Lexicon, ops) -> str:
    return _alt(w for op in ops for w in lexicon.ops[op])


@dataclass(frozen=True)
class _Maps:
    """Surface-to-value inversions of one lexicon."""

    op: dict[str, str]
    number: dict[str, int]
    polarity: dict[str, str]
    quantifier: dict[str, str]
    sync: dict[str, bool]

    @classmethod
    def build(cls, lexicon: Lexicon) -> "_Maps":
        return cls(
            op={w: op for op, forms in lexicon.ops.items() for w in forms},
            number={w: n for n, forms in lexicon.number.items() for w in forms},
            polarity={w: p for p, forms in lexicon.polarity.items() for w in forms},
            quantifier={w: q for q, forms in lexicon.quantifier.items() for w in forms},
            sync={w: s for s, forms in lexicon.sync.items() for w in forms},
        )


def _set_values(cls: str, name: str) -> list[str]:
    if cls == "da":
        field = DA_SET_FIELDS[name]
        values = [getattr(s, field) for s in ASSIGN_SETTINGS.values()]
        if name == "placecap":
            values = [v[:1].upper() + v[1:] for v in values]
        return values
    field = DR_SET_FIELDS[name]
    return [getattr(s, field) for s in REGISTER_SETTINGS.values()]


def _slot_pattern(cls: str, slot: Slot, lexicon: Lexicon) -> str:
    """Groupless regex for one slot's rendered surface."""
    bool_alt = _op_alt(lexicon, BOOL_OPS)
    all_alt = _op_alt(lexicon, OPS)
    defexpr = rf"{_ATOM} (?:{all_alt}) {_ATOM}"
    if slot.kind == "sig":
        return _ID
    if slot.kind == "width":
        return r"[0-9]{1,2}"
    if slot.kind == "mark":
        return r"[01]"
    if slot.kind == "count":
        return _alt(w for forms in lexicon.number.values() for w in forms)
    if slot.kind == "quant":
        return _alt(w for forms in lexicon.quantifier.values() for w in forms)
    if slot.kind == "pol":
        return _alt(w for forms in lexicon.polarity.values() for w in forms)
    if slot.kind == "sync":
        return _alt(w for forms in lexicon.sync.values() for w in forms)
    if slot.kind == "rart":
        return _alt(
            f"{article_for(w)} {w}" for forms in lexicon.sync.values() for w in forms
        )
    if slot.kind == "op":
        return bool_alt
    if slot.kind == "names":
        return rf"{_QID}(?:, {_QID})*"
    if slot.kind == "seq":
        return r"\[[01]+(?:, [01]+)*\]"
    if slot.kind == "set":
        return _alt(_set_values(cls, slot.name))
    if slot.kind == "batom":
        return _ATOM
    if slot.kind == "bexpr":
        return rf"{_ATOM}(?: (?:{bool_alt}) {_ATOM})?"
    if slot.kind == "defexpr":
        return defexpr
    if slot.kind == "indef":
        general = rf"{_ATOM}(?: (?:{all_alt}) {_ATOM})?"
        return rf"(?:{_QID} defined as {defexpr}|defined as {defexpr}|{general})"
    if slot.kind == "endef":
        return rf"(?:{_QID} defined as {defexpr}|defined as {defexpr}|{_QID})"
    if slot.kind == "enopen":
        return rf"(?:{defexpr}|{_QID})"
    raise ValueError(f"no pattern for slot kind {slot.kind!r}")


# ------------------------------------------------------- captured parsing


_ATOM_RE = re.compile(rf"(not )?`({_ID})'\Z")


def _parse_atom(text: str) -> Expr:
    match = _ATOM_RE.match(text)
    if not match:
        raise _Reject(text)
    atom: Expr = Var(match.group(2))
    return Not(Var(match.group(2))) if match.group(1) else atom


def _bin_re(lexicon: Lexicon, ops) -> re.Pattern[str]:
    return re.compile(rf"({_ATOM}) ({_op_alt(lexicon, ops)}) ({_ATOM})\Z")


@dataclass(frozen=True)
class _Parsers:
    maps: _Maps
    bin_bool: re.Pattern[str]
    bin_all: re.Pattern[str]
    named_def: re.Pattern[str]
    marked_def: re.Pattern[str]
    quoted: re.Pattern[str]

    @classmethod
    def build(cls, lexicon: Lexicon) -> "_Parsers":
        return cls(
            maps=_Maps.build(lexicon),
            bin_bool=_bin_re(lexicon, BOOL_OPS),
            bin_all=_bin_re(lexicon, OPS),
            named_def=re.compile(rf"`({_ID})' defined as (.+)\Z"),
            marked_def=re.compile(r"defined as (.+)\Z"),
            quoted=re.compile(rf"`({_ID})'\Z"),
        )

    def binop(self, text: str, pattern: re.Pattern[str]) -> Expr:
        match = pattern.match(text)
        if not match:
            raise _Reject(text)
        op = self.maps.op[match.group(2)]
        return BinOp(op, _parse_atom(match.group(1)), _parse_atom(match.group(3)))

    def bexpr(self, text: str) -> Expr:
        if _ATOM_RE.match(text):
            return _parse_atom(text)
        return self.binop(text, self.bin_bool)

    def general_expr(self, text: str) -> Expr:
        if _ATOM_RE.match(text):
            return _parse_atom(text)
        return self.binop(text, self.bin_all)

    def input_spec(self, text: str) -> InputSpec:
        match = self.named_def.match(text)
        if match:
            return InputSpec(self.binop(match.group(2), self.bin_all), name=match.group(1))
        match = self.marked_def.match(text)
        if match:
            return InputSpec(self.binop(match.group(1), self.bin_all))
        return InputSpec(self.general_expr(text))

    def enable_spec(self, text: str) -> EnableSpec:
        match = self.named_def.match(text)
        if match:
            return EnableSpec(
                name=match.group(1), expr=self.binop(match.group(2), self.bin_all)
            )
        match = self.marked_def.match(text)
        if match:
            return EnableSpec(expr=self.binop(match.group(1), self.bin_all))
        match = self.quoted.match(text)
        if match:
            return EnableSpec(name=match.group(1))
        raise _Reject(text)

    def enable_open(self, text: str) -> EnableSpec:
        match = self.quoted.match(text)
        if match:
            return EnableSpec(name=match.group(1))
        return EnableSpec(expr=self.binop(text, self.bin_all))

    def sync_flag(self, values: dict[str, str]) -> bool:
        if "rword" in values:
            return self.maps.sync[values["rword"]]
        if "rart" in values:
            return self.maps.sync[values["rart"].split(" ", 1)[1]]
        raise _Reject("reset without a stated synchrony")


_LEVEL = {"1": "high", "0": "low"}
_QUOTED_ALL_RE = re.compile(rf"`({_ID})'")


def _resolve_setting(cls: str, values: dict[str, str]) -> str:
    """Find the unique scenario setting consistent with every set slot."""
    if cls == "da":
        table, fields = ASSIGN_SETTINGS, DA_SET_FIELDS
    else:
        table, fields = REGISTER_SETTINGS, DR_SET_FIELDS
    set_names = [n for n in values if SLOT_KINDS[cls].get(n) == "set"]
    keys = []
    for key, setting in table.items():
        expected = {}
        for name in set_names:
            value = getattr(setting, fields[name])
            if name == "placecap":
                value = value[:1].upper() + value[1:]
            expected[name] = value
        if all(values[n] == expected[n] for n in set_names):
            keys.append(key)
    if len(keys) != 1:
        raise _Reject(f"setting resolution found {len(keys)} candidates")
    return keys[0]


def _build_pa(values: dict[str, str], parsers: _Parsers) -> AssignmentMeta:
    if "expr" in values:
        expr = parsers.bexpr(values["expr"])
    elif "xatom" in values:
        expr = BinOp(
            parsers.maps.op[values["op"]],
            _parse_atom(values["xatom"]),
            _parse_atom(values["yatom"]),
        )
    else:
        expr = BinOp(
            parsers.maps.op[values["op"]], Var(values["x"]), Var(values["y"])
        )
    return AssignmentMeta(values["out"], expr)


def _build_da(values: dict[str, str], parsers: _Parsers) -> AssignmentMeta:
    setting = _resolve_setting("da", values)
    names = _QUOTED_ALL_RE.findall(values["names"])
    if len(names) != parsers.maps.number[values["count"]]:
        raise _Reject("sensor count does not match the name list")
    in_level = parsers.maps.polarity[values["inpol"]]
    scenario = Scenario(
        setting=setting,
        inputs=tuple(ScenarioSignal(name, in_level) for name in names),
        output=ScenarioSignal(values["out"], parsers.maps.polarity[values["outpol"]]),
        quantifier=parsers.maps.quantifier[values["quant"]],
    )
    return AssignmentMeta(values["out"], scenario)


def _build_pr(values: dict[str, str], parsers: _Parsers) -> RegisterMeta:
    reset = None
    if "rst" in values:
        reset = ResetSpec(
            name=values["rst"],
            sync=parsers.sync_flag(values),
            expr=(
                parsers.binop(values["rexpr"], parsers.bin_all)
                if "rexpr" in values
                else None
            ),
        )
    return RegisterMeta(
        reg=values["reg"],
        width=int(values["width"]),
        input=parsers.input_spec(values["input"]),
        enable=parsers.enable_spec(values["enable"]) if "enable" in values else None,
        reset=reset,
        clock=values.get("clk"),
    )


def _build_dr(values: dict[str, str], parsers: _Parsers) -> ScenarioRegisterMeta:
    setting = _resolve_setting("dr", values)
    if values["mark_off"] == values["mark_on"]:
        raise _Reject("on and off marks must be inverses")
    return ScenarioRegisterMeta(
        setting=setting,
        output=ScenarioSignal(values["out"], _LEVEL[values["mark_on"]]),
        trigger=ScenarioSignal(values["trig"], _LEVEL[values["mark_t"]]),
        cancel=CancelSpec(
            name=values["cancel"],
            level=_LEVEL[values["mark_c"]],
            sync=parsers.maps.sync[values["sync"]],
        ),
        clock=values.get("clk"),
    )


def _build_pg(values: dict[str, str], parsers: _Parsers) -> SeqGenMeta:
    bits = values["seq"][1:-1].split(", ")
    if len({len(b) for b in bits}) != 1:
        raise _Reject("sequence elements have unequal widths")
    width = len(bits[0])
    if "width" in values and int(values["width"]) != width:
        raise _Reject("stated width does not match the sequence elements")
    if "enable" in values:
        enable = parsers.enable_spec(values["enable"])
    else:
        enable = parsers.enable_open(values["enopen"])
    reset = None
    if "rst" in values:
        reset = ResetSpec(
            name=values["rst"],
            sync=parsers.sync_flag(values),
            expr=(
                parsers.binop(values["rexpr"], parsers.bin_all)
                if "rexpr" in values
                else None
            ),
        )
    return SeqGenMeta(
        out=values["out"],
        width=width,
        elements=tuple(int(b, 2) for b in bits),
        enable=enable,
        reset=reset,
        clock=values["clk"],
    )


_BUILDERS = {"pa": _build_pa, "da": _build_da, "pr": _build_pr, "dr": _build_dr, "pg": _build_pg}


# ------------------------------------------------------ compiled template


@dataclass(frozen=True)
class _Compiled:
    template: Template
    pattern: re.Pattern[str]
    groups: tuple[tuple[str, str], ...]  # (group name, slot name)
    slot_res: dict[tuple[str, str], re.Pattern[str]]

    def recover(self, match: re.Match[str], parsers: _Parsers) -> TaskMeta:
        values: dict[str, str] = {}
        for group, name in self.groups:
            value = match.group(group)
            if value is None:
                continue
            if name in values and values[name] != value:
                raise _Reject(f"slot {name!r} recovered two different values")
            values[name] = value
        meta = _BUILDERS[self.template.cls](values, parsers)
        if validate_meta(meta):
            raise _Reject("recovered meta fails validation")
        return meta


def _compile_template(template: Template, lexicon: Lexicon) -> _Compiled:
    groups: list[tuple[str, str]] = []
    slot_res: dict[tuple[str, str], re.Pattern[str]] = {}
    counter = 0

    def walk(segments: tuple[Segment, ...]) -> str:
        nonlocal counter
        parts: list[str] = []
        for segment in segments:
            if isinstance(segment, Literal):
                parts.append(re.escape(segment.text))
            elif isinstance(segment, Slot):
                counter += 1
                group = f"g{counter}_{segment.name}"
                raw = _slot_pattern(template.cls, segment, lexicon)
                parts.append(f"(?P<{group}>{raw})")
                groups.append((group, segment.name))
                key = (segment.name, segment.kind)
                if key not in slot_res:
                    slot_res[key] = re.compile(raw)
            else:
                parts.append("(?:" + walk(segment.segments) + ")?")
        return "".join(parts)

    body = walk(template.segments)
    return _Compiled(template, re.compile(body), tuple(groups), slot_res)


def _progress(compiled: _Compiled, text: str, start: int) -> int:
    """Furthest position a greedy segment-by-segment scan reaches."""

    def scan(segments: tuple[Segment, ...], pos: int) -> int:
        if not segments:
            return pos
        head, rest = segments[0], segments[1:]
        if isinstance(head, Literal):
            if text.startswith(head.text, pos):
                return scan(rest, pos + len(head.text))
            common = 0
            while (
                common < len(head.text)
                and pos + common < len(text)
                and text[pos + common] == head.text[common]
            ):
                common += 1
            return pos + common
        if isinstance(head, Slot):
            match = compiled.slot_res[(head.name, head.kind)].match(text, pos)
            return scan(rest, match.end()) if match else pos
        return max(scan(head.segments + rest, pos), scan(rest, pos))

    return scan(compiled.template.segments, start)


class Translator:
    """Matcher over one registry; compile once, translate many."""

    def __init__(
        self,
        registry: Registry,
        lexicon: Lexicon = DEFAULT_LEXICON,
        include_held_out: bool = False,
    ):
        pool = "all" if include_held_out else "trained"
        self._parsers = _Parsers.build(lexicon)
        self._singles = tuple(
            _compile_template(t, lexicon) for t in registry.templates(pool=pool)
        )
        self._fragments = tuple(
            c for c in self._singles if c.template.cls in _MULTI_CLASSES
        )

    # -- single task

    def _whole_matches(self, text: str) -> list[tuple[str, TaskMeta]]:
        found = []
        for compiled in self._singles:
            match = compiled.pattern.fullmatch(text)
            if match is None:
                continue
            try:
                found.append((compiled.template.id, compiled.recover(match, self._parsers)))
            except _Reject:
                continue
        return found

    # -- multi task

    def _segment(self, text: str) -> tuple[MultiMeta | None, int]:
        furthest = 0

        def rec(pos: int, acc: list[TaskMeta]) -> MultiMeta | None:
            nonlocal furthest
            furthest = max(furthest, pos)
            if pos == len(text):
                if len(acc) < 2:
                    return None
                meta = MultiMeta(subtasks=tuple(acc))
                return meta if not validate_meta(meta) else None
            if len(acc) == 4:
                return None
            for compiled in self._fragments:
                match = compiled.pattern.match(text, pos)
                if match is None:
                    continue
                end = match.end()
                if end != len(text) and text[end] != " ":
                    continue
                try:
                    sub = compiled.recover(match, self._parsers)
                except _Reject:
                    continue
                result = rec(end if end == len(text) else end + 1, acc + [sub])
                if result is not None:
                    return result
            return None

        return rec(0, []), furthest

    def parse(self, text: str) -> TaskMeta:
        """Recover the task a prompt describes, or raise."""
        matches = self._whole_matches(text)
        if len(matches) == 1:
            return matches[0][1]
        if matches:
            raise AmbiguousMatchError(sorted(tid for tid, _ in matches))
        multi, furthest = self._segment(text)
        if multi is not None:
            return multi
        best_end = max(
            (_progress(c, text, 0) for c in self._singles), default=0
        )
        span = (0, best_end)
        if furthest > 0:
            frag_end = max(
                (_progress(c, text, furthest) for c in self._fragments), default=furthest
            )
            if frag_end >= best_end:
                span = (furthest, frag_end)
        raise NoMatchError(text, span)

    def matching_templates(self, text: str) -> list[str]:
        """Ids of every template the whole prompt matches (diagnostics)."""
        return sorted(tid for tid, _ in self._whole_matches(text))

    def translate(self, text: str) -> str:
        return emit(self.parse(text))


def parse_task(
    english: str,
    registry: Registry,
    lexicon: Lexicon = DEFAULT_LEXICON,
    include_held_out: bool = False,
) -> TaskMeta:
    return Translator(registry, lexicon, include_held_out).parse(english)


def translate(
    english: str,
    registry: Registry,
    lexicon: Lexicon = DEFAULT_LEXICON,
    include_held_out: bool = False,
) -> str:
    """Translate one prompt to Verilog; raises when no single reading exists."""
    return Translator(registry, lexicon, include_held_out).translate(english)
