"""Corpus persistence: generation, splitting, and model-facing text files.

On-disk formats (grammars in docs/formats.md):

* Record file: one pair per line, tab-separated ``key=value`` fields
  (template_id, index, split, english, verilog) with backslash escapes
  for backslash, tab and newline inside values.
* Manifest: one ``key=value`` per line (version, master_seed,
  train_fraction, ``count.<template_id>``). Counts are cross-checked
  against the record file on load.
* Training text: ``TASK: `` + english + `` RESULT:`` + newline + verilog,
  each record terminated by a sentinel line (default ``<|endofresult|>``).
* Prediction file: one record per line, same field encoding, keyed by
  (template_id, index) with a ``prediction`` field and an optional
  ``skip`` reason.

Generation derives one rng per (template_id, index), so pairs are
independent of each other and of worker scheduling; output is canonically
sorted, which makes runs byte-identical for any --jobs value.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from veritask import __version__
from veritask.config import GenConfig, PlanEntry
from veritask.errors import (
    ConfigError,
    CorpusFormatError,
    DuplicateKeyError,
    GenerationError,
    VeritaskError,
)
from veritask.sampler import derive_rng, sample_meta
from veritask.templates import (
    DEFAULT_LEXICON,
    Lexicon,
    MT_POOLS,
    Registry,
    render_english,
    render_multi,
    suitable,
)
from veritask.emit import emit

__all__ = [
    "SPLITS",
    "DEFAULT_SENTINEL",
    "TaskResultPair",
    "CorpusManifest",
    "Corpus",
    "PredictionRecord",
    "generate_corpus",
    "split_corpus",
    "save_corpus",
    "load_corpus",
    "export_training_text",
    "import_training_text",
    "format_predictions",
    "import_predictions",
]

SPLITS = ("train", "validate", "held_out")
DEFAULT_SENTINEL = "<|endofresult|>"


@dataclass(frozen=True)
class TaskResultPair:
    """One English task with its reference Verilog and provenance."""

    template_id: str
    index: int
    split: str
    english: str
    verilog: str

    @property
    def cls(self) -> str:
        return self.template_id[:2]

    @property
    def key(self) -> tuple[str, int]:
        return (self.template_id, self.index)


@dataclass(frozen=True)
class CorpusManifest:
    master_seed: int
    version: str
    train_fraction: float | None
    counts: dict[str, int]


@dataclass(frozen=True)
class Corpus:
    manifest: CorpusManifest
    pairs: tuple[TaskResultPair, ...]


@dataclass(frozen=True)
class PredictionRecord:
    template_id: str
    index: int
    prediction: str = ""
    skip: str | None = None


# ------------------------------------------------------------- generation


def _pool_of(entry: PlanEntry) -> str:
    return entry.pool or MT_POOLS[entry.template_id]


def _one_pair(
    entry: PlanEntry,
    index: int,
    master_seed: int,
    config: GenConfig,
    registry: Registry,
    lexicon: Lexicon,
) -> TaskResultPair:
    tid = entry.template_id
    rng = derive_rng(master_seed, tid, index)
    try:
        if tid in MT_POOLS:
            meta = sample_meta("mt", rng, config)
            split = "train" if _pool_of(entry) == "trained" else "held_out"
            english = render_multi(meta, registry, lexicon, rng, pool=_pool_of(entry))
        else:
            template = registry[tid]
            for _ in range(config.max_sample_attempts):
                meta = sample_meta(template.cls, rng, config)
                if suitable(template, meta):
                    break
            else:
                raise GenerationError(
                    tid,
                    index,
                    f"no expressible task in {config.max_sample_attempts} draws",
                )
            split = "train" if template.trained else "held_out"
            english = render_english(template, meta, lexicon, rng)
        return TaskResultPair(tid, index, split, english, emit(meta))
    except GenerationError:
        raise
    except VeritaskError as exc:
        raise GenerationError(tid, index, str(exc)) from exc


def _entry_pairs(
    entry: PlanEntry,
    master_seed: int,
    config: GenConfig,
    registry: Registry,
    lexicon: Lexicon,
) -> list[TaskResultPair]:
    return [
        _one_pair(entry, index, master_seed, config, registry, lexicon)
        for index in range(entry.count)
    ]


def _normalize_plan(plan) -> tuple[PlanEntry, ...]:
    if isinstance(plan, Mapping):
        return tuple(PlanEntry(tid, count) for tid, count in plan.items())
    return tuple(plan)


def generate_corpus(
    registry: Registry,
    lexicon: Lexicon,
    plan,
    master_seed: int,
    config: GenConfig | None = None,
    jobs: int = 1,
) -> Corpus:
    """Generate `count` pairs per plan entry, deterministically per seed.

    ``plan`` is a sequence of PlanEntry or a mapping template_id -> count.
    """
    entries = _normalize_plan(plan)
    config = config or GenConfig()
    seen: set[str] = set()
    for entry in entries:
        if entry.template_id in seen:
            raise ConfigError(f"plan lists {entry.template_id} twice")
        seen.add(entry.template_id)
        if not registry.is_plan_id(entry.template_id):
            raise ConfigError(f"plan id {entry.template_id!r} is not in the registry")

    pairs: list[TaskResultPair] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_entry_pairs, entry, master_seed, config, registry, lexicon)
                for entry in entries
            ]
            for future in futures:
                pairs.extend(future.result())
    else:
        for entry in entries:
            pairs.extend(_entry_pairs(entry, master_seed, config, registry, lexicon))

    pairs.sort(key=lambda p: p.key)
    manifest = CorpusManifest(
        master_seed=master_seed,
        version=__version__,
        train_fraction=None,
        counts={e.template_id: e.count for e in entries},
    )
    return Corpus(manifest, tuple(pairs))


# -------------------------------------------------------------- splitting


def split_corpus(
    corpus: Corpus,
    train_fraction: float = 0.95,
    *,
    rng: random.Random,
    validate_overrides: Mapping[str, int] | None = None,
) -> Corpus:
    """Tag a validation subset per template; held-out pairs stay held out.

    The subset is drawn from each template's sorted index list, so the
    result depends only on the rng and the key set, not on pair order.
    """
    if not 0 < train_fraction < 1:
        raise ConfigError(f"train_fraction {train_fraction} outside (0, 1)")
    overrides = dict(validate_overrides or {})
    by_template: dict[str, list[TaskResultPair]] = {}
    for pair in corpus.pairs:
        by_template.setdefault(pair.template_id, []).append(pair)

    chosen: set[tuple[str, int]] = set()
    for tid in sorted(by_template):
        group = by_template[tid]
        if all(p.split == "held_out" for p in group):
            continue
        count = len(group)
        k = overrides.get(tid)
        if k is None:
            k = round(count * (1 - train_fraction))
        if not 0 <= k <= count:
            raise ConfigError(f"validate count {k} for {tid} outside 0..{count}")
        indices = sorted(p.index for p in group)
        chosen.update((tid, i) for i in rng.sample(indices, k))

    pairs = tuple(
        replace(
            pair,
            split=(
                "held_out"
                if pair.split == "held_out"
                else ("validate" if pair.key in chosen else "train")
            ),
        )
        for pair in corpus.pairs
    )
    manifest = replace(corpus.manifest, train_fraction=train_fraction)
    return Corpus(manifest, pairs)


# ------------------------------------------------------------ record file


_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n"}


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
            raise CorpusFormatError(f"{where}: bad escape in {value[i:i+2]!r}")
        out.append(_UNESCAPES[value[i + 1]])
        i += 2
    return "".join(out)


def _parse_fields(line: str, where: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for chunk in line.split("\t"):
        key, sep, raw = chunk.partition("=")
        if not sep:
            raise CorpusFormatError(f"{where}: field {chunk!r} has no '='")
        if key in fields:
            raise CorpusFormatError(f"{where}: repeated field {key!r}")
        fields[key] = _unescape(raw, where)
    return fields


def _format_fields(items: Sequence[tuple[str, str]]) -> str:
    return "\t".join(f"{key}={_escape(value)}" for key, value in items)


def _pair_line(pair: TaskResultPair) -> str:
    return _format_fields(
        [
            ("template_id", pair.template_id),
            ("index", str(pair.index)),
            ("split", pair.split),
            ("english", pair.english),
            ("verilog", pair.verilog),
        ]
    )


def _parse_pair(line: str, where: str) -> TaskResultPair:
    fields = _parse_fields(line, where)
    expected = {"template_id", "index", "split", "english", "verilog"}
    if set(fields) != expected:
        missing = expected - set(fields)
        extra = set(fields) - expected
        detail = []
        if missing:
            detail.append("missing " + ", ".join(sorted(missing)))
        if extra:
            detail.append("unknown " + ", ".join(sorted(extra)))
        raise CorpusFormatError(f"{where}: {'; '.join(detail)}")
    try:
        index = int(fields["index"])
    except ValueError:
        raise CorpusFormatError(f"{where}: index {fields['index']!r} is not an integer")
    if fields["split"] not in SPLITS:
        raise CorpusFormatError(f"{where}: unknown split {fields['split']!r}")
    if not fields["english"]:
        raise CorpusFormatError(f"{where}: empty english text")
    return TaskResultPair(
        fields["template_id"], index, fields["split"], fields["english"], fields["verilog"]
    )


def save_corpus(corpus: Corpus, records_path, manifest_path) -> None:
    counts = Counter(p.template_id for p in corpus.pairs)
    if dict(counts) != corpus.manifest.counts:
        raise CorpusFormatError("manifest counts do not match the pairs being saved")
    records = Path(records_path)
    records.write_text(
        "".join(_pair_line(pair) + "\n" for pair in sorted(corpus.pairs, key=lambda p: p.key)),
        encoding="utf-8",
    )
    m = corpus.manifest
    fraction = "none" if m.train_fraction is None else repr(m.train_fraction)
    lines = [
        f"version={m.version}",
        f"master_seed={m.master_seed}",
        f"train_fraction={fraction}",
    ]
    lines.extend(f"count.{tid}={m.counts[tid]}" for tid in sorted(m.counts))
    Path(manifest_path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def _parse_manifest(text: str, where: str) -> CorpusManifest:
    version = None
    master_seed = None
    train_fraction: float | None = None
    saw_fraction = False
    counts: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        key, sep, raw = line.partition("=")
        if not sep:
            raise CorpusFormatError(f"{where}:{lineno}: no '=' in {line!r}")
        if key == "version":
            version = raw
        elif key == "master_seed":
            try:
                master_seed = int(raw)
            except ValueError:
                raise CorpusFormatError(f"{where}:{lineno}: bad master_seed {raw!r}")
        elif key == "train_fraction":
            saw_fraction = True
            if raw != "none":
                try:
                    train_fraction = float(raw)
                except ValueError:
                    raise CorpusFormatError(f"{where}:{lineno}: bad train_fraction {raw!r}")
        elif key.startswith("count."):
            tid = key[len("count.") :]
            try:
                counts[tid] = int(raw)
            except ValueError:
                raise CorpusFormatError(f"{where}:{lineno}: bad count {raw!r}")
        else:
            raise CorpusFormatError(f"{where}:{lineno}: unknown key {key!r}")
    if version is None or master_seed is None or not saw_fraction:
        raise CorpusFormatError(f"{where}: manifest is missing required keys")
    return CorpusManifest(master_seed, version, train_fraction, counts)


def load_corpus(records_path, manifest_path) -> Corpus:
    records = Path(records_path)
    manifest = _parse_manifest(
        Path(manifest_path).read_text(encoding="utf-8"), str(manifest_path)
    )
    pairs: list[TaskResultPair] = []
    seen: set[tuple[str, int]] = set()
    for lineno, line in enumerate(records.read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        pair = _parse_pair(line, f"{records}:{lineno}")
        if pair.key in seen:
            raise DuplicateKeyError(
                f"{records}:{lineno}: duplicate key {pair.template_id}:{pair.index}"
            )
        seen.add(pair.key)
        pairs.append(pair)
    counts = Counter(p.template_id for p in pairs)
    if dict(counts) != manifest.counts:
        raise CorpusFormatError(
            f"{records}: stored counts do not match manifest "
            f"(manifest {sum(manifest.counts.values())} pairs, file {len(pairs)})"
        )
    pairs.sort(key=lambda p: p.key)
    return Corpus(manifest, tuple(pairs))


# ---------------------------------------------------------- training text


def _filter_pairs(corpus: Corpus, which: str) -> list[TaskResultPair]:
    if which == "all":
        return list(corpus.pairs)
    if which not in SPLITS:
        raise ConfigError(f"unknown split filter {which!r}")
    return [p for p in corpus.pairs if p.split == which]


def export_training_text(
    corpus: Corpus,
    which: str = "train",
    sentinel: str = DEFAULT_SENTINEL,
    shuffle_seed: int | None = None,
) -> str:
    """Serialize records for fine-tuning; sentinel line terminates each."""
    pairs = sorted(_filter_pairs(corpus, which), key=lambda p: p.key)
    if not pairs:
        raise CorpusFormatError(f"no records in split {which!r} to export")
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(pairs)
    chunks = []
    for pair in pairs:
        if sentinel in pair.english or sentinel in pair.verilog:
            raise CorpusFormatError(
                f"record {pair.template_id}:{pair.index} contains the sentinel"
            )
        chunks.append(f"TASK: {pair.english} RESULT:\n{pair.verilog}\n{sentinel}\n")
    return "".join(chunks)


def import_training_text(
    text: str, sentinel: str = DEFAULT_SENTINEL
) -> list[tuple[str, str]]:
    """Parse exported training text back to (english, verilog) records."""
    records: list[tuple[str, str]] = []
    block: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line != sentinel:
            block.append(line)
            continue
        if not block:
            raise CorpusFormatError(f"line {lineno}: empty record before sentinel")
        head = block[0]
        if not head.startswith("TASK: ") or not head.endswith(" RESULT:"):
            raise CorpusFormatError(f"line {lineno - len(block)}: malformed TASK line")
        english = head[len("TASK: ") : -len(" RESULT:")]
        records.append((english, "\n".join(block[1:])))
        block = []
    if any(line.strip() for line in block):
        raise CorpusFormatError("trailing text after the last sentinel")
    return records


# ------------------------------------------------------------ predictions


def format_predictions(records: Iterable[PredictionRecord]) -> str:
    lines = []
    for record in records:
        items = [("template_id", record.template_id), ("index", str(record.index))]
        if record.skip is not None:
            items.append(("skip", record.skip))
        items.append(("prediction", record.prediction))
        lines.append(_format_fields(items) + "\n")
    return "".join(lines)


def import_predictions(file) -> dict[tuple[str, int], str]:
    """Read a prediction file; skipped records import as empty text."""
    path = Path(file)
    predictions: dict[tuple[str, int], str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        where = f"{path}:{lineno}"
        fields = _parse_fields(line, where)
        for required in ("template_id", "index"):
            if required in fields:
                continue
            raise CorpusFormatError(f"{where}: missing field {required!r}")
        if "prediction" not in fields and "skip" not in fields:
            raise CorpusFormatError(f"{where}: record has neither prediction nor skip")
        unknown = set(fields) - {"template_id", "index", "prediction", "skip"}
        if unknown:
            raise CorpusFormatError(f"{where}: unknown fields {sorted(unknown)}")
        try:
            index = int(fields["index"])
        except ValueError:
            raise CorpusFormatError(f"{where}: index {fields['index']!r} is not an integer")
        key = (fields["template_id"], index)
        if key in predictions:
            raise DuplicateKeyError(f"{where}: duplicate key {key[0]}:{key[1]}")
        predictions[key] = "" if "skip" in fields else fields.get("prediction", "")
    return predictions
