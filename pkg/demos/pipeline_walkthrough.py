"""The whole corpus pipeline at a tiny scale, one stage at a time.

Generates a small corpus from an inline plan, tags the train/validate
split, exports fine-tuning text, answers every evaluation prompt with
the rule-based translator, and prints the per-template report.  Every
artifact lands in a temporary directory that is removed at the end.
"""

from __future__ import annotations

import random
import tempfile
from pathlib import Path

from veritask.corpus import (
    export_training_text,
    generate_corpus,
    import_predictions,
    load_corpus,
    save_corpus,
    split_corpus,
)
from veritask.corpus import PredictionRecord, format_predictions
from veritask.evaluate import evaluate_run, format_report
from veritask.templates import DEFAULT_LEXICON, load_default_registry
from veritask.translate import Translator

PLAN = {
    "pa00": 12,
    "pa17": 3,   # held out of training
    "da00": 10,
    "pr02": 10,
    "dr00": 10,
    "pg01": 10,
    "mt00": 8,
    "mt01": 3,   # held out of training
}


def main() -> None:
    registry = load_default_registry()

    print("== generate")
    corpus = generate_corpus(registry, DEFAULT_LEXICON, PLAN, master_seed=42)
    print(f"{len(corpus.pairs)} task/result pairs from {len(PLAN)} templates")
    sample = corpus.pairs[0]
    print(f"example task:   {sample.english}")
    print(f"example result: {sample.verilog.splitlines()[0]} ...")

    print("\n== split")
    corpus = split_corpus(
        corpus, 0.8, rng=random.Random(42), validate_overrides={"mt00": 2}
    )
    tallies: dict[str, int] = {}
    for pair in corpus.pairs:
        tallies[pair.split] = tallies.get(pair.split, 0) + 1
    print(f"split sizes: {tallies}")

    with tempfile.TemporaryDirectory() as workdir:
        out = Path(workdir)
        save_corpus(corpus, out / "corpus.txt", out / "manifest.txt")
        print(f"saved corpus under {out}")

        print("\n== export training text")
        training = export_training_text(corpus, which="train")
        print(f"{training.count('TASK: ')} training records; first one:")
        print(training[: training.index("\n", training.index("RESULT:")) + 1], end="")

        print("\n== translate the evaluation splits")
        translator = Translator(registry, DEFAULT_LEXICON, include_held_out=True)
        predictions = [
            PredictionRecord(p.template_id, p.index, translator.translate(p.english))
            for p in corpus.pairs
            if p.split in ("validate", "held_out")
        ]
        (out / "predictions.txt").write_text(
            format_predictions(predictions), encoding="utf-8"
        )
        reloaded = import_predictions(out / "predictions.txt")
        print(f"{len(reloaded)} predictions written and reloaded")

        print("\n== evaluate and report")
        corpus = load_corpus(out / "corpus.txt", out / "manifest.txt")
        _, rows = evaluate_run(reloaded, corpus)
        print(format_report(rows, "text"))


if __name__ == "__main__":
    main()
