"""Template data model: body segments, slot kinds, and the lexicon.

A template body is an ordered list of segments:

* literal text,
* a slot, written ``{name:kind}``,
* an optional clause, written ``[?feature CONTENT]``, included in the
  rendered text only when the task carries that feature. Clauses nest.

The characters ``{ } [ ]`` are reserved for that syntax and may not
appear as literals. Everything else (including back-quotes, which are
the signal-name quoting convention) is plain text.

Slot names are fixed per template class; the kind written in the file
must agree with the class table below, which keeps the files
self-describing and catches typos at load time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from veritask.errors import RegistryError
from veritask.meta import OPS

__all__ = [
    "Literal",
    "Slot",
    "Clause",
    "Segment",
    "Lexicon",
    "DEFAULT_LEXICON",
    "SLOT_KINDS",
    "DA_SET_FIELDS",
    "DR_SET_FIELDS",
    "PR_SLOT_FEATURE",
    "PG_SLOT_FEATURE",
    "DR_SLOT_FEATURE",
    "ENDEF_MARKERS",
    "ENOPEN_MARKERS",
    "PA_SHAPES",
    "quote",
    "article_for",
    "parse_body",
    "iter_slots",
]


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Slot:
    name: str
    kind: str


@dataclass(frozen=True)
class Clause:
    feature: str
    segments: tuple["Segment", ...]


Segment = Union[Literal, Slot, Clause]


@dataclass(frozen=True)
class Lexicon:
    """Surface forms for everything a template can say about a value.

    Maps are keyed by the canonical value (operator name, polarity,
    quantifier, input count, sync flag) and hold one or more lowercase
    English spellings. Rendering picks one spelling at random; the
    translator accepts any of them.
    """

    ops: dict[str, tuple[str, ...]]
    polarity: dict[str, tuple[str, ...]]
    quantifier: dict[str, tuple[str, ...]]
    number: dict[int, tuple[str, ...]]
    sync: dict[bool, tuple[str, ...]]


DEFAULT_LEXICON = Lexicon(
    ops={
        "and": ("and",),
        "or": ("or",),
        "nand": ("nand",),
        "nor": ("nor",),
        "xor": ("xor",),
        "xnor": ("xnor", "nxor"),
        "ge": ("greater than or equal to",),
        "gt": ("greater than",),
        "mod": ("modulo",),
    },
    polarity={"high": ("active-high",), "low": ("active-low",)},
    quantifier={"any": ("any",), "all": ("all",)},
    number={2: ("two",), 3: ("three",), 4: ("four",)},
    sync={True: ("synchronous",), False: ("asynchronous",)},
)


# Slot name -> kind, per template class. The kind spelled in a template
# file must match, so a file cannot silently reinterpret a slot.
SLOT_KINDS: dict[str, dict[str, str]] = {
    "pa": {
        "out": "sig",
        "expr": "bexpr",
        "x": "sig",
        "y": "sig",
        "op": "op",
        "xatom": "batom",
        "yatom": "batom",
    },
    "da": {
        "place": "set",
        "placecap": "set",
        "count": "count",
        "inpol": "pol",
        "device": "set",
        "devices": "set",
        "state": "set",
        "names": "names",
        "outpol": "pol",
        "outnoun": "set",
        "out": "sig",
        "outverb": "set",
        "quant": "quant",
    },
    "pr": {
        "width": "width",
        "reg": "sig",
        "input": "indef",
        "enable": "endef",
        "rart": "rart",
        "rword": "sync",
        "rst": "sig",
        "rexpr": "defexpr",
        "clk": "sig",
    },
    "dr": {
        "system": "set",
        "trignoun": "set",
        "trig": "sig",
        "trigverb": "set",
        "mark_t": "mark",
        "outnoun": "set",
        "out": "sig",
        "onverb": "set",
        "mark_on": "mark",
        "offverb": "set",
        "mark_off": "mark",
        "sync": "sync",
        "cannoun": "set",
        "cancel": "sig",
        "canverb": "set",
        "mark_c": "mark",
        "clk": "sig",
    },
    "pg": {
        "seq": "seq",
        "width": "width",
        "out": "sig",
        "clk": "sig",
        "enable": "endef",
        "enopen": "enopen",
        "rart": "rart",
        "rword": "sync",
        "rst": "sig",
        "rexpr": "defexpr",
    },
}

# Scenario-setting slots resolve to fields of the vocab setting tables.
DA_SET_FIELDS = {
    "place": "place",
    "placecap": "place",  # capitalized at render time (sentence start)
    "device": "device",
    "devices": "device_plural",
    "state": "state",
    "outnoun": "out_noun",
    "outverb": "out_verb",
}

DR_SET_FIELDS = {
    "system": "system",
    "trignoun": "trigger_noun",
    "trigverb": "trigger_verb",
    "outnoun": "out_noun",
    "onverb": "on_verb",
    "offverb": "off_verb",
    "cannoun": "cancel_noun",
    "canverb": "cancel_verb",
}

# Feature carried by an optional-feature slot, per class. A slot listed
# here placed in the base text makes the feature required; placed inside
# a clause it only extends what the template supports.
PR_SLOT_FEATURE = {"enable": "enable", "rst": "reset", "rexpr": "rdef", "clk": "clock"}
PG_SLOT_FEATURE = {"rst": "reset", "rexpr": "rdef"}
DR_SLOT_FEATURE = {"clk": "clock"}

# Enable-spelling markers: which shapes of an enable a slot can express.
# These are supported-only features; they are never required.
ENDEF_MARKERS = frozenset({"en_named", "en_expr", "en_full"})
ENOPEN_MARKERS = frozenset({"en_named", "en_expr"})

# Expression shapes an assignment template can express.
PA_ALL_SHAPES = frozenset(
    {"atom_plain", "atom_negated", "binop_plain", "binop_negated"}
)
PA_SHAPES = {
    "expr": PA_ALL_SHAPES,
    "x": frozenset({"binop_plain"}),
    "y": frozenset({"binop_plain"}),
    "xatom": frozenset({"binop_plain", "binop_negated"}),
    "yatom": frozenset({"binop_plain", "binop_negated"}),
    "op": frozenset({"binop_plain", "binop_negated"}),
}


def quote(name: str) -> str:
    """Back-quote + name + apostrophe, the signal quoting convention."""
    return "`" + name + "'"


def article_for(word: str) -> str:
    return "an" if word[:1] in "aeiou" else "a"


_SLOT_RE = re.compile(r"\{([a-z][a-z0-9_]*):([a-z]+)\}")
_FEATURE_RE = re.compile(r"\[\?([a-z_]+) ")


def parse_body(text: str, where: str = "?") -> tuple[Segment, ...]:
    """Parse a template body string into segments.

    ``where`` names the template in error messages. Rejects stray
    reserved characters and unbalanced clause brackets.
    """
    segments, end = _parse_segments(text, 0, where, top=True)
    if end != len(text):
        raise RegistryError(f"{where}: unexpected ']' at column {end}")
    return tuple(segments)


def _parse_segments(
    text: str, pos: int, where: str, top: bool
) -> tuple[list[Segment], int]:
    segments: list[Segment] = []
    literal_start = pos
    while pos < len(text):
        ch = text[pos]
        if ch == "{":
            if pos > literal_start:
                segments.append(Literal(text[literal_start:pos]))
            match = _SLOT_RE.match(text, pos)
            if not match:
                raise RegistryError(f"{where}: malformed slot at column {pos}")
            segments.append(Slot(match.group(1), match.group(2)))
            pos = match.end()
            literal_start = pos
        elif ch == "[":
            if pos > literal_start:
                segments.append(Literal(text[literal_start:pos]))
            match = _FEATURE_RE.match(text, pos)
            if not match:
                raise RegistryError(f"{where}: malformed clause at column {pos}")
            inner, end = _parse_segments(text, match.end(), where, top=False)
            if end >= len(text) or text[end] != "]":
                raise RegistryError(f"{where}: unterminated clause at column {pos}")
            segments.append(Clause(match.group(1), tuple(inner)))
            pos = end + 1
            literal_start = pos
        elif ch == "]":
            if top:
                break  # caller reports the stray bracket
            if pos > literal_start:
                segments.append(Literal(text[literal_start:pos]))
            return segments, pos
        elif ch == "}":
            raise RegistryError(f"{where}: stray '}}' at column {pos}")
        else:
            pos += 1
    if pos > literal_start:
        segments.append(Literal(text[literal_start:pos]))
    if not top:
        raise RegistryError(f"{where}: unterminated clause")
    return segments, pos


def iter_slots(segments: tuple[Segment, ...], in_clause: bool = False):
    """Yield (slot, in_clause) pairs over a segment tree, in order."""
    for segment in segments:
        if isinstance(segment, Slot):
            yield segment, in_clause
        elif isinstance(segment, Clause):
            yield from iter_slots(segment.segments, True)


def lexicon_word(lexicon: Lexicon, table: str, key, rng) -> str:
    """Pick one surface form; deterministic when only one exists."""
    forms = getattr(lexicon, table)[key]
    if len(forms) == 1:
        return forms[0]
    return rng.choice(forms)


def op_from_word(lexicon: Lexicon, word: str) -> str | None:
    for op, forms in lexicon.ops.items():
        if word in forms:
            return op
    return None


def check_lexicon(lexicon: Lexicon) -> list[str]:
    """Coverage diagnostics: every op known, all forms lowercase/nonempty."""
    problems: list[str] = []
    for op in OPS:
        forms = lexicon.ops.get(op, ())
        if not forms:
            problems.append(f"lexicon has no surface form for operator {op!r}")
    for table in ("ops", "polarity", "quantifier", "number", "sync"):
        for key, forms in getattr(lexicon, table).items():
            for form in forms:
                if not form or form != form.lower():
                    problems.append(
                        f"lexicon {table}[{key!r}] form {form!r} must be nonempty lowercase"
                    )
    return problems
