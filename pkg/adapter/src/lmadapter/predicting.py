"""Batch generation of predictions for corpus prompts."""

from __future__ import annotations

from lmadapter.corpus_files import SPLITS, PredictionRow, read_corpus, write_predictions
from lmadapter.errors import AdapterError
from lmadapter.models import load_checkpoint, token_len

DEFAULT_SPLITS = ("validate", "held_out")

TOKEN_LIMIT_SKIP = "token limit"

# The prediction file escapes tab, newline, and backslash; every other
# vertical-whitespace character would still break its line structure.
# An untrained model emits arbitrary bytes, so those characters are
# dropped. Scoring strips all whitespace, so this never changes a score.
_UNCARRIABLE = "\r\v\f\x1c\x1d\x1e\x85  "


def _sanitize(text: str) -> str:
    return "".join(ch for ch in text if ch not in _UNCARRIABLE)


def predict(
    checkpoint_dir,
    corpus_file,
    out_file,
    splits: tuple[str, ...] = DEFAULT_SPLITS,
    overrides: dict[str, object] | None = None,
) -> tuple[int, int]:
    """Complete every prompt in the chosen splits; write the rows.

    Returns (completed, skipped). Prompts whose tokenization leaves no
    room inside max_tokens become skip rows, never silent truncations.
    `overrides` replaces sampling fields of the checkpoint's config
    snapshot (temperature, top_p, top_k, max_tokens, seed).
    """
    for name in splits:
        if name not in SPLITS:
            raise AdapterError(f"unknown split {name!r}; choose from {', '.join(SPLITS)}")
    if not splits:
        raise AdapterError("no splits selected")

    cfg, completer = load_checkpoint(checkpoint_dir, overrides)
    pairs = [p for p in read_corpus(corpus_file) if p.split in splits]
    pairs.sort(key=lambda p: p.key)
    if not pairs:
        raise AdapterError(f"corpus {corpus_file} has no pairs in splits {', '.join(splits)}")

    rows: list[PredictionRow] = []
    skipped = 0
    for pair in pairs:
        prompt = f"TASK: {pair.english} RESULT:"
        budget = cfg.max_tokens - token_len(prompt)
        if budget <= 0:
            rows.append(PredictionRow(pair.template_id, pair.index, "", skip=TOKEN_LIMIT_SKIP))
            skipped += 1
            continue
        completion = completer.complete(prompt, budget)
        prediction = _sanitize(completion.split(cfg.sentinel)[0]).strip()
        rows.append(PredictionRow(pair.template_id, pair.index, prediction))
    write_predictions(rows, out_file)
    return len(rows) - skipped, skipped
