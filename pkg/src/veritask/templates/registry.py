"""Template registry: loading, feature derivation, validation.

Registry files hold one template per record::

    [pr00 trained]
    Define a {width:width}-bit register `{reg:sig}' with input
    {input:indef}[?clock , and clock `{clk:sig}'].

A header line names the template id and whether it is trained or held
out; the following non-blank lines are the body, joined with single
spaces. Lines starting with ``#`` are comments. The template's class is
the two-letter id prefix.

Feature derivation: a feature-bearing slot in the base text makes that
feature required (the template only fits tasks that have it); inside an
optional clause it extends what the template supports. Assignment
templates are handled by expression shape instead: the shapes they can
express are intersected over their expression slots.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

from veritask.errors import RegistryError
from veritask.meta import CLASSES
from veritask.templates.model import (
    Clause,
    DR_SLOT_FEATURE,
    ENDEF_MARKERS,
    ENOPEN_MARKERS,
    Lexicon,
    Literal,
    PA_SHAPES,
    PG_SLOT_FEATURE,
    PR_SLOT_FEATURE,
    SLOT_KINDS,
    Segment,
    Slot,
    check_lexicon,
    iter_slots,
    parse_body,
)

__all__ = [
    "Template",
    "Registry",
    "MT_POOLS",
    "parse_template_text",
    "load_registry",
    "load_default_registry",
    "validate_registry",
    "placeholder_text",
]

# Multi-task plan ids are pseudo-templates: they name a subtask pool
# rather than a body of their own.
MT_POOLS = {"mt00": "trained", "mt01": "non_trained"}


@dataclass(frozen=True)
class Template:
    id: str
    cls: str
    trained: bool
    segments: tuple[Segment, ...]
    required: frozenset[str]
    supported: frozenset[str]


_HEADER_RE = re.compile(r"\[([a-z]{2}[0-9]{2}) (trained|held_out)\]\s*$")

_FEATURE_SLOTS = {"pr": PR_SLOT_FEATURE, "pg": PG_SLOT_FEATURE, "dr": DR_SLOT_FEATURE}


def _derive_features(cls: str, segments: tuple[Segment, ...]):
    if cls == "pa":
        shape_sets = [
            PA_SHAPES[slot.name]
            for slot, _ in iter_slots(segments)
            if slot.name in PA_SHAPES
        ]
        supported = frozenset.intersection(*shape_sets) if shape_sets else frozenset()
        return frozenset(), supported
    if cls == "da":
        return frozenset(), frozenset()
    feature_of = _FEATURE_SLOTS[cls]
    required: set[str] = set()
    supported: set[str] = set()
    for slot, in_clause in iter_slots(segments):
        feature = feature_of.get(slot.name)
        if feature is not None:
            supported.add(feature)
            if not in_clause:
                required.add(feature)
        if slot.kind == "endef":
            supported |= ENDEF_MARKERS
        elif slot.kind == "enopen":
            supported |= ENOPEN_MARKERS
    return frozenset(required), frozenset(supported)


def parse_template_text(text: str, where: str = "?") -> list[Template]:
    """Parse one registry file's text into templates."""
    templates: list[Template] = []
    header: tuple[str, bool] | None = None
    body_lines: list[str] = []

    def finish():
        nonlocal header, body_lines
        if header is None:
            return
        template_id, trained = header
        cls = template_id[:2]
        if cls not in SLOT_KINDS:
            raise RegistryError(f"{where}: unknown template class in id {template_id!r}")
        body = " ".join(body_lines)
        if not body:
            raise RegistryError(f"{where}: template {template_id} has no body")
        segments = parse_body(body, f"{where}:{template_id}")
        required, supported = _derive_features(cls, segments)
        templates.append(
            Template(template_id, cls, trained, segments, required, supported)
        )
        header = None
        body_lines = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if line.startswith("#"):
            continue
        match = _HEADER_RE.match(line)
        if match:
            finish()
            header = (match.group(1), match.group(2) == "trained")
            continue
        if not line.strip():
            continue
        if header is None:
            raise RegistryError(f"{where}:{number}: body text before any header")
        body_lines.append(line.strip())
    finish()
    return templates


class Registry:
    """Immutable collection of templates, ordered by class then id."""

    def __init__(self, templates: Iterable[Template]):
        by_id: dict[str, Template] = {}
        for template in templates:
            if template.id in by_id:
                raise RegistryError(f"duplicate template id {template.id}")
            by_id[template.id] = template
        order = {cls: rank for rank, cls in enumerate(CLASSES)}
        self._by_id = dict(
            sorted(by_id.items(), key=lambda kv: (order[kv[1].cls], kv[0]))
        )

    def __iter__(self) -> Iterator[Template]:
        return iter(self._by_id.values())

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, template_id: str) -> bool:
        return template_id in self._by_id

    def get(self, template_id: str) -> Template | None:
        return self._by_id.get(template_id)

    def __getitem__(self, template_id: str) -> Template:
        try:
            return self._by_id[template_id]
        except KeyError:
            raise RegistryError(f"unknown template id {template_id!r}") from None

    def templates(self, cls: str | None = None, pool: str = "all") -> tuple[Template, ...]:
        if pool not in ("trained", "non_trained", "all"):
            raise RegistryError(f"unknown pool {pool!r}")
        picked = []
        for template in self:
            if cls is not None and template.cls != cls:
                continue
            if pool == "trained" and not template.trained:
                continue
            if pool == "non_trained" and template.trained:
                continue
            picked.append(template)
        return tuple(picked)

    def is_plan_id(self, template_id: str) -> bool:
        return template_id in self._by_id or template_id in MT_POOLS


def load_registry(paths: Iterable[Path]) -> Registry:
    templates: list[Template] = []
    for path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise RegistryError(f"cannot read registry file {path}: {exc}") from exc
        templates.extend(parse_template_text(text, where=Path(path).name))
    return Registry(templates)


def load_default_registry() -> Registry:
    """Load the registry bundled with the package."""
    data = resources.files("veritask.templates").joinpath("data")
    templates: list[Template] = []
    for entry in sorted(data.iterdir(), key=lambda item: item.name):
        if entry.name.endswith(".tpl"):
            templates.extend(
                parse_template_text(entry.read_text(encoding="utf-8"), where=entry.name)
            )
    return Registry(templates)


# Slots that must appear exactly once outside optional clauses, per class.
# da's place slot may be spelled plain or capitalized, hence the pair.
_IDENTITY_SLOTS: dict[str, tuple] = {
    "pa": ("out",),
    "da": (
        ("place", "placecap"),
        "count",
        "inpol",
        "device",
        "devices",
        "state",
        "names",
        "outpol",
        "outnoun",
        "out",
        "outverb",
        "quant",
    ),
    "pr": ("width", "reg", "input"),
    "dr": (
        "system",
        "trignoun",
        "trig",
        "trigverb",
        "mark_t",
        "outnoun",
        "out",
        "onverb",
        "mark_on",
        "offverb",
        "mark_off",
        "sync",
        "cannoun",
        "cancel",
        "canverb",
        "mark_c",
    ),
    "pg": ("seq", "out", "clk", ("enable", "enopen")),
}

_CLAUSE_FEATURES = {
    "pa": frozenset(),
    "da": frozenset(),
    "pr": frozenset({"enable", "reset", "rdef", "clock"}),
    "dr": frozenset({"clock"}),
    "pg": frozenset({"reset", "rdef"}),
}

# Echoed slots render the same value again; only nouns and signal names
# may repeat (a second capture would be redundant, the matcher uses a
# backreference).
_ECHO_KINDS = frozenset({"set", "sig"})


def placeholder_text(template: Template) -> str:
    """Body text with slots as fixed placeholder tokens, clauses included."""
    parts: list[str] = []

    def walk(segments: tuple[Segment, ...]):
        for segment in segments:
            if isinstance(segment, Literal):
                parts.append(segment.text)
            elif isinstance(segment, Slot):
                parts.append(f"<{segment.name}>")
            else:
                walk(segment.segments)

    walk(template.segments)
    return "".join(parts)


def _slot_counts(template: Template):
    base: dict[str, int] = {}
    anywhere: dict[str, int] = {}
    for slot, in_clause in iter_slots(template.segments):
        anywhere[slot.name] = anywhere.get(slot.name, 0) + 1
        if not in_clause:
            base[slot.name] = base.get(slot.name, 0) + 1
    return base, anywhere


def _clause_slot_features(cls: str, clause: Clause) -> set[str]:
    feature_of = _FEATURE_SLOTS.get(cls, {})
    found: set[str] = set()
    for slot, _ in iter_slots(clause.segments):
        feature = feature_of.get(slot.name)
        if feature is not None:
            found.add(feature)
    return found


def _validate_template(template: Template, diagnostics: list[str]) -> None:
    cls = template.cls
    kinds = SLOT_KINDS[cls]
    base, anywhere = _slot_counts(template)

    seen_names: set[str] = set()
    for slot, in_clause in iter_slots(template.segments):
        expected = kinds.get(slot.name)
        if expected is None:
            diagnostics.append(f"{template.id}: unknown slot {slot.name!r} for class {cls}")
            continue
        if slot.kind != expected:
            diagnostics.append(
                f"{template.id}: slot {slot.name!r} declared {slot.kind!r}, expected {expected!r}"
            )
        if slot.name in seen_names and expected not in _ECHO_KINDS:
            diagnostics.append(f"{template.id}: slot {slot.name!r} repeats but is not echoable")
        seen_names.add(slot.name)

    for requirement in _IDENTITY_SLOTS[cls]:
        options = requirement if isinstance(requirement, tuple) else (requirement,)
        count = sum(base.get(name, 0) for name in options)
        label = " or ".join(options)
        if count == 0:
            diagnostics.append(f"{template.id}: missing required slot {label}")
        elif count > 1 and kinds[options[0]] not in _ECHO_KINDS:
            diagnostics.append(f"{template.id}: required slot {label} appears {count} times")

    if cls == "pa":
        forms = [
            frozenset({"expr"}),
            frozenset({"x", "y", "op"}),
            frozenset({"xatom", "yatom", "op"}),
        ]
        present = {name for name in anywhere if name != "out"}
        if present not in forms:
            diagnostics.append(
                f"{template.id}: expression slots {sorted(present)} are not one of the known forms"
            )

    def walk_clauses(segments: tuple[Segment, ...], ancestors: tuple[str, ...]):
        for segment in segments:
            if not isinstance(segment, Clause):
                continue
            if segment.feature not in _CLAUSE_FEATURES[cls]:
                diagnostics.append(
                    f"{template.id}: clause feature {segment.feature!r} unknown for class {cls}"
                )
            elif segment.feature not in _clause_slot_features(cls, segment):
                diagnostics.append(
                    f"{template.id}: clause {segment.feature!r} contains no slot for that feature"
                )
            if segment.feature == "rdef":
                has_reset = "reset" in ancestors or base.get("rst", 0) > 0
                if not has_reset:
                    diagnostics.append(
                        f"{template.id}: rdef clause without a reset in scope"
                    )
            walk_clauses(segment.segments, ancestors + (segment.feature,))

    walk_clauses(template.segments, ())


def validate_registry(registry: Registry, lexicon: Lexicon) -> list[str]:
    """Diagnostics for template invariants and lexicon coverage."""
    diagnostics: list[str] = list(check_lexicon(lexicon))
    bodies: dict[tuple[str, str], str] = {}
    for template in registry:
        _validate_template(template, diagnostics)
        key = (template.cls, placeholder_text(template))
        if key in bodies:
            diagnostics.append(
                f"{template.id}: body identical to {bodies[key]} (ambiguous within class)"
            )
        else:
            bodies[key] = template.id
    return diagnostics
