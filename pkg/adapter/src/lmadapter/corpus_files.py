"""Readers and writers for the corpus toolkit's file formats.

The toolkit is a separate package; the coupling is these documented
text formats, nothing else. Corpus and prediction files are
tab-separated key=value lines with backslash, tab, and newline escaped
as \\, \t, \n. Training text is TASK/RESULT records terminated by a
sentinel line.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from lmadapter.errors import AdapterError

SPLITS = ("train", "validate", "held_out")

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n"}

_TASK_PREFIX = "TASK: "
_TASK_SUFFIX = " RESULT:"


@dataclass(frozen=True)
class CorpusPair:
    template_id: str
    index: int
    split: str
    english: str
    verilog: str

    @property
    def key(self) -> tuple[str, int]:
        return (self.template_id, self.index)


@dataclass(frozen=True)
class TrainRecord:
    english: str
    verilog: str


@dataclass(frozen=True)
class PredictionRow:
    template_id: str
    index: int
    prediction: str
    skip: str | None = None


def _escape(value: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


def _unescape(value: str, where: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(value) or value[i + 1] not in _UNESCAPES:
            raise AdapterError(f"{where}: bad escape in {value[i:i+2]!r}")
        out.append(_UNESCAPES[value[i + 1]])
        i += 2
    return "".join(out)


def _parse_fields(line: str, where: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for chunk in line.split("\t"):
        key, sep, raw = chunk.partition("=")
        if not sep:
            raise AdapterError(f"{where}: field {chunk!r} has no '='")
        if key in fields:
            raise AdapterError(f"{where}: repeated field {key!r}")
        fields[key] = _unescape(raw, where)
    return fields


def read_corpus(file) -> list[CorpusPair]:
    """Read task/result pairs; the reference text rides along unused."""
    path = Path(file)
    expected = {"template_id", "index", "split", "english", "verilog"}
    pairs: list[CorpusPair] = []
    seen: set[tuple[str, int]] = set()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise AdapterError(f"cannot read corpus {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line:
            continue
        where = f"{path}:{lineno}"
        fields = _parse_fields(line, where)
        if set(fields) != expected:
            missing = sorted(expected - set(fields))
            extra = sorted(set(fields) - expected)
            raise AdapterError(f"{where}: missing fields {missing}, unknown fields {extra}")
        try:
            index = int(fields["index"])
        except ValueError:
            raise AdapterError(f"{where}: index {fields['index']!r} is not an integer")
        if fields["split"] not in SPLITS:
            raise AdapterError(f"{where}: unknown split {fields['split']!r}")
        pair = CorpusPair(fields["template_id"], index, fields["split"],
                          fields["english"], fields["verilog"])
        if pair.key in seen:
            raise AdapterError(f"{where}: duplicate key {pair.template_id}:{pair.index}")
        seen.add(pair.key)
        pairs.append(pair)
    return pairs


def read_training_text(file, sentinel: str) -> list[TrainRecord]:
    """Parse exported TASK/RESULT records.

    Each record is one `TASK: <english> RESULT:` line, the result text
    on the following lines, then a line holding exactly the sentinel.
    """
    path = Path(file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise AdapterError(f"cannot read training text {path}: {exc}") from exc
    records: list[TrainRecord] = []
    english: str | None = None
    body: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        where = f"{path}:{lineno}"
        if english is None:
            if not line.startswith(_TASK_PREFIX) or not line.endswith(_TASK_SUFFIX):
                raise AdapterError(f"{where}: expected a 'TASK: ... RESULT:' line")
            english = line[len(_TASK_PREFIX):-len(_TASK_SUFFIX)]
            body = []
        elif line == sentinel:
            records.append(TrainRecord(english, "\n".join(body)))
            english = None
        else:
            body.append(line)
    if english is not None:
        raise AdapterError(f"{path}: last record is not terminated by {sentinel!r}")
    return records


def format_predictions(rows: Iterable[PredictionRow]) -> str:
    lines = []
    for row in rows:
        items = [("template_id", row.template_id), ("index", str(row.index))]
        if row.skip is not None:
            items.append(("skip", row.skip))
        items.append(("prediction", row.prediction))
        lines.append("\t".join(f"{key}={_escape(value)}" for key, value in items) + "\n")
    return "".join(lines)


def write_predictions(rows: Sequence[PredictionRow], file) -> None:
    Path(file).write_text(format_predictions(rows), encoding="utf-8")
