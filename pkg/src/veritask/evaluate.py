"""Scoring of predicted Verilog against references, plus result tables.

A prediction is correct when it equals the reference after removing all
whitespace.  Incorrect predictions get a Ratcliff-Obershelp similarity
score and an error class, and the per-template aggregation mirrors the
result-table layout used throughout the project: one row per template
with trained/validated/correct counts and the average similarity of the
incorrect answers.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from veritask.corpus import (
    SPLITS,
    Corpus,
    PredictionRecord,
    _format_fields,
    _parse_fields,
)
from veritask.errors import (
    ConfigError,
    CorpusFormatError,
    DuplicateKeyError,
    MissingPredictionError,
)
from veritask.lint import classify_error, strip_whitespace
from veritask.meta import CLASSES
from veritask.similarity import ro_similarity
from veritask.templates import Template, placeholder_text

__all__ = [
    "CLASS_LABELS",
    "DEFAULT_SPLITS",
    "EvalRecord",
    "PairScore",
    "REPORT_FORMATS",
    "ReportRow",
    "evaluate_run",
    "format_records",
    "format_report",
    "import_records",
    "score_pair",
    "template_similarity",
]

# Splits a prediction run is scored against by default: everything the
# model never saw during training.
DEFAULT_SPLITS = ("validate", "held_out")

REPORT_FORMATS = ("text", "csv", "pipe")

CLASS_LABELS = {
    "pa": "Assignment",
    "da": "Desc. Assign.",
    "pr": "Register",
    "dr": "Desc. Register",
    "pg": "Seq. Generator",
    "mt": "M-T",
}

REPORT_HEADER = (
    "Type",
    "Template Name",
    "# Trained",
    "# Validated",
    "# Correct",
    "Avg. Error R-O",
)


class PairScore(NamedTuple):
    """Scoring outcome for a single prediction/reference pair."""

    correct: bool
    similarity: float
    error_class: str


@dataclass(frozen=True)
class EvalRecord:
    """One scored prediction, keyed by its corpus pair."""

    key: tuple[str, int]
    correct: bool
    similarity: float
    error_class: str


@dataclass(frozen=True)
class ReportRow:
    """Aggregated results for one template, one class, or the whole run.

    ``template`` is a template id for per-template rows and ``"all"`` for
    aggregate rows; the overall row additionally has ``cls == "overall"``.
    ``avg_error_ro`` is the mean similarity over incorrect answers and is
    None when every answer was correct.
    """

    cls: str
    template: str
    n_trained: int
    n_validated: int
    n_correct: int
    avg_error_ro: float | None

    @property
    def percent_correct(self) -> float:
        return 100.0 * self.n_correct / self.n_validated


def score_pair(pred: str, ref: str) -> PairScore:
    """Score one predicted snippet against the canonical reference.

    Both texts are compared with every whitespace character removed;
    similarity is computed on the stripped forms while the error class
    looks at the original texts.  ``ref`` must be lint-clean.
    """
    stripped_pred = strip_whitespace(pred)
    stripped_ref = strip_whitespace(ref)
    correct = stripped_pred == stripped_ref
    if correct:
        similarity = 1.0
    elif not stripped_pred or not stripped_ref:
        similarity = 0.0
    else:
        similarity = ro_similarity(stripped_pred, stripped_ref)
    return PairScore(correct, similarity, classify_error(pred, ref))


def _prediction_map(
    predictions: Iterable[PredictionRecord] | Mapping[tuple[str, int], str],
) -> dict[tuple[str, int], str]:
    if isinstance(predictions, Mapping):
        return dict(predictions)
    table: dict[tuple[str, int], str] = {}
    for record in predictions:
        key = (record.template_id, record.index)
        if key in table:
            raise DuplicateKeyError(f"duplicate prediction for {key[0]}:{key[1]}")
        table[key] = record.prediction
    return table


def _class_rank(cls: str) -> int:
    try:
        return CLASSES.index(cls)
    except ValueError:
        return len(CLASSES)


def _aggregate(
    cls: str,
    template: str,
    rows_or_records: list[ReportRow],
    incorrect_sims: list[float],
) -> ReportRow:
    avg = sum(incorrect_sims) / len(incorrect_sims) if incorrect_sims else None
    return ReportRow(
        cls=cls,
        template=template,
        n_trained=sum(r.n_trained for r in rows_or_records),
        n_validated=sum(r.n_validated for r in rows_or_records),
        n_correct=sum(r.n_correct for r in rows_or_records),
        avg_error_ro=avg,
    )


def evaluate_run(
    predictions: Iterable[PredictionRecord] | Mapping[tuple[str, int], str],
    corpus: Corpus,
    splits: Iterable[str] = DEFAULT_SPLITS,
) -> tuple[list[EvalRecord], list[ReportRow]]:
    """Score a prediction run against the selected corpus splits.

    Every corpus pair in ``splits`` must have a prediction; missing keys
    raise MissingPredictionError listing all of them.  Returns one
    EvalRecord per scored pair plus report rows: one per template sorted
    by class then id, then one aggregate per class, then an overall row.
    Predictions for keys outside the selected splits are ignored.
    """
    wanted = tuple(splits)
    for name in wanted:
        if name not in SPLITS:
            raise ConfigError(f"unknown split {name!r}; expected one of {SPLITS}")
    if not wanted:
        raise ConfigError("no splits selected")

    table = _prediction_map(predictions)
    split_set = set(wanted)
    selected = sorted(
        (pair for pair in corpus.pairs if pair.split in split_set),
        key=lambda pair: pair.key,
    )
    if not selected:
        raise ConfigError(f"corpus has no pairs in splits {wanted}")
    missing = sorted(pair.key for pair in selected if pair.key not in table)
    if missing:
        raise MissingPredictionError(missing)

    records = [
        EvalRecord(pair.key, *score_pair(table[pair.key], pair.verilog))
        for pair in selected
    ]

    trained_counts: dict[str, int] = {}
    for pair in corpus.pairs:
        if pair.split == "train":
            trained_counts[pair.template_id] = trained_counts.get(pair.template_id, 0) + 1

    by_template: dict[str, list[EvalRecord]] = {}
    for record in records:
        by_template.setdefault(record.key[0], []).append(record)

    rows: list[ReportRow] = []
    for tid in sorted(by_template, key=lambda t: (_class_rank(t[:2]), t)):
        group = by_template[tid]
        incorrect = [r.similarity for r in group if not r.correct]
        rows.append(
            ReportRow(
                cls=tid[:2],
                template=tid,
                n_trained=trained_counts.get(tid, 0),
                n_validated=len(group),
                n_correct=sum(r.correct for r in group),
                avg_error_ro=sum(incorrect) / len(incorrect) if incorrect else None,
            )
        )

    template_rows = list(rows)
    for cls in CLASSES:
        cls_rows = [r for r in template_rows if r.cls == cls]
        if not cls_rows:
            continue
        sims = [
            r.similarity
            for r in records
            if r.key[0][:2] == cls and not r.correct
        ]
        rows.append(_aggregate(cls, "all", cls_rows, sims))
    overall_sims = [r.similarity for r in records if not r.correct]
    rows.append(_aggregate("overall", "all", template_rows, overall_sims))
    return records, rows


def template_similarity(t1: Template, t2: Template) -> float:
    """Similarity of two templates' body text, slots as placeholder tokens."""
    return ro_similarity(placeholder_text(t1), placeholder_text(t2))


def format_records(records: Iterable[EvalRecord]) -> str:
    """Serialize scored records, one tab-separated key=value line each."""
    lines = []
    for record in records:
        lines.append(
            _format_fields(
                [
                    ("template_id", record.key[0]),
                    ("index", str(record.key[1])),
                    ("correct", "true" if record.correct else "false"),
                    ("similarity", repr(record.similarity)),
                    ("error_class", record.error_class),
                ]
            )
            + "\n"
        )
    return "".join(lines)


def import_records(file) -> list[EvalRecord]:
    """Read back a record file written by format_records."""
    path = Path(file)
    records: list[EvalRecord] = []
    seen: set[tuple[str, int]] = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        where = f"{path}:{lineno}"
        fields = _parse_fields(line, where)
        expected = {"template_id", "index", "correct", "similarity", "error_class"}
        if set(fields) != expected:
            raise CorpusFormatError(f"{where}: fields must be exactly {sorted(expected)}")
        try:
            index = int(fields["index"])
            similarity = float(fields["similarity"])
        except ValueError as exc:
            raise CorpusFormatError(f"{where}: {exc}") from exc
        if fields["correct"] not in ("true", "false"):
            raise CorpusFormatError(f"{where}: correct must be true or false")
        key = (fields["template_id"], index)
        if key in seen:
            raise DuplicateKeyError(f"{where}: duplicate record {key[0]}:{key[1]}")
        seen.add(key)
        records.append(
            EvalRecord(key, fields["correct"] == "true", similarity, fields["error_class"])
        )
    return records


def _cells(row: ReportRow, percent: bool) -> list[str]:
    if row.cls == "overall":
        label = "Overall"
    else:
        label = CLASS_LABELS.get(row.cls, row.cls)
    correct = str(row.n_correct)
    if percent and row.template == "all":
        correct = f"{row.n_correct} ({row.percent_correct:.1f}%)"
    avg = "--" if row.avg_error_ro is None else f"{row.avg_error_ro:.3f}"
    return [
        label,
        row.template,
        str(row.n_trained),
        str(row.n_validated),
        correct,
        avg,
    ]


def format_report(rows: Iterable[ReportRow], fmt: str = "text") -> str:
    """Render report rows as an aligned, comma-separated, or pipe table.

    Aggregate rows carry a percent-correct figure in the text and pipe
    formats; the csv form keeps plain counts so it stays machine-friendly.
    """
    if fmt not in REPORT_FORMATS:
        raise ConfigError(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")
    rows = list(rows)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for row in rows:
            writer.writerow(_cells(row, percent=False))
        return buffer.getvalue()

    grid = [list(REPORT_HEADER)] + [_cells(row, percent=True) for row in rows]
    widths = [max(len(line[col]) for line in grid) for col in range(len(REPORT_HEADER))]
    if fmt == "pipe":
        lines = ["| " + " | ".join(c.ljust(w) for c, w in zip(line, widths)) + " |" for line in grid]
        rule = "| " + " | ".join("-" * w for w in widths) + " |"
        lines.insert(1, rule)
        return "\n".join(lines) + "\n"
    lines = []
    for line in grid:
        cells = [line[0].ljust(widths[0]), line[1].ljust(widths[1])]
        cells += [line[col].rjust(widths[col]) for col in range(2, len(widths))]
        lines.append("  ".join(cells).rstrip())
    lines.insert(1, "-" * len(lines[0]))
    return "\n".join(lines) + "\n"
