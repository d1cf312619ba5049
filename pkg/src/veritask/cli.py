"""Command line front end for the corpus pipeline.

Subcommands cover the whole loop: generate a corpus from a plan, tag the
train/validate split, export fine-tuning text, lint snippets, run the
rule-based translator, and score/report prediction files.  All
file-shaped stages read and write fixed names inside ``--out-dir``
(corpus.txt, manifest.txt, train.txt, predictions.txt, records.txt,
report.*), so a directory is one reproducible run.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import random
import sys
import traceback
from pathlib import Path

from veritask import __version__
from veritask.config import load_config
from veritask.corpus import (
    DEFAULT_SENTINEL,
    SPLITS,
    Corpus,
    PredictionRecord,
    export_training_text,
    format_predictions,
    generate_corpus,
    import_predictions,
    load_corpus,
    save_corpus,
    split_corpus,
)
from veritask.errors import (
    AmbiguousMatchError,
    MissingPredictionError,
    NoMatchError,
    VeritaskError,
)
from veritask.evaluate import (
    REPORT_FORMATS,
    evaluate_run,
    format_records,
    format_report,
)
from veritask.lint import check
from veritask.templates import DEFAULT_LEXICON, load_default_registry
from veritask.translate import Translator

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

CORPUS_FILE = "corpus.txt"
MANIFEST_FILE = "manifest.txt"
TRAINING_FILE = "train.txt"
PREDICTIONS_FILE = "predictions.txt"
RECORDS_FILE = "records.txt"

REPORT_FILES = {"text": "report.txt", "csv": "report.csv", "pipe": "report.md"}


class _UsageError(Exception):
    """Bad flag combination detected after argparse."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the documented usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_overrides(pairs: list[str] | None) -> dict[str, str]:
    overrides: dict[str, str] = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise _UsageError(f"--set needs SECTION.KEY=VALUE, got {item!r}")
        overrides[key] = value
    return overrides


def _parse_splits(raw: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in raw.split(",") if part.strip())
    if not names:
        raise _UsageError("--splits must name at least one split")
    for name in names:
        if name not in SPLITS:
            raise _UsageError(f"unknown split {name!r}; expected one of {SPLITS}")
    return names


def _load_run_corpus(out_dir: Path) -> Corpus:
    return load_corpus(out_dir / CORPUS_FILE, out_dir / MANIFEST_FILE)


def _read_text_arg(file: str) -> tuple[str, str]:
    """Return (display name, content) for a file argument, '-' meaning stdin."""
    if file == "-":
        return "<stdin>", sys.stdin.read()
    path = Path(file)
    return str(path), path.read_text(encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="master seed (default 42)")
    common.add_argument(
        "--config",
        help="run config: a file path or a bundled plan name (paper_scale, desk_scale)",
    )
    common.add_argument(
        "--out-dir",
        type=Path,
        default=Path("."),
        help="run directory for corpus/prediction artifacts (default .)",
    )
    common.add_argument(
        "--jobs", type=int, default=1, help="worker processes for generation (default 1)"
    )
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        metavar="SECTION.KEY=VALUE",
        help="override one config value (repeatable), e.g. plan.pa00=50",
    )

    parser = _Parser(
        prog="veritask",
        description="Generate, translate, and score English/Verilog task corpora.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")

    p = sub.add_parser(
        "generate", parents=[common], help="sample a corpus from a plan config"
    )
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser(
        "split", parents=[common], help="tag train/validate splits in a corpus"
    )
    p.add_argument(
        "--train-fraction",
        type=float,
        default=None,
        help="fraction of each trained template kept for training (default from config)",
    )
    p.set_defaults(func=cmd_split)

    p = sub.add_parser(
        "export", parents=[common], help="write fine-tuning text for one split"
    )
    p.add_argument(
        "--which",
        default="train",
        choices=("train", "validate", "held_out", "all"),
        help="which split to export (default train)",
    )
    p.add_argument(
        "--sentinel", default=DEFAULT_SENTINEL, help="record terminator line"
    )
    p.add_argument(
        "--shuffle-seed",
        type=int,
        default=None,
        help="shuffle records with this seed (default: keep key order)",
    )
    p.add_argument("--out", type=Path, default=None, help="output file (default train.txt)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("lint", parents=[common], help="check a snippet file or stdin")
    p.add_argument("file", nargs="?", default="-", help="snippet file, - for stdin")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser(
        "translate",
        parents=[common],
        help="translate one task (file/stdin) or a whole corpus (--batch)",
    )
    p.add_argument("file", nargs="?", default="-", help="task text file, - for stdin")
    p.add_argument(
        "--batch",
        action="store_true",
        help="translate corpus pairs and write a prediction file",
    )
    p.add_argument(
        "--splits",
        default="validate,held_out",
        help="comma-separated splits for --batch (default validate,held_out)",
    )
    p.add_argument(
        "--trained-only",
        action="store_true",
        help="restrict matching to trained templates",
    )
    p.add_argument(
        "--out", type=Path, default=None, help="prediction file (default predictions.txt)"
    )
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser(
        "evaluate", parents=[common], help="score a prediction file against a corpus"
    )
    p.add_argument(
        "--predictions", type=Path, default=None, help="prediction file (default predictions.txt)"
    )
    p.add_argument(
        "--splits",
        default="validate,held_out",
        help="comma-separated splits to score (default validate,held_out)",
    )
    p.add_argument(
        "--records-out", type=Path, default=None, help="scored record file (default records.txt)"
    )
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "report", parents=[common], help="render the per-template result table"
    )
    p.add_argument(
        "--predictions", type=Path, default=None, help="prediction file (default predictions.txt)"
    )
    p.add_argument(
        "--splits",
        default="validate,held_out",
        help="comma-separated splits to score (default validate,held_out)",
    )
    p.add_argument(
        "--format",
        dest="fmt",
        default="text",
        choices=REPORT_FORMATS,
        help="table format (default text)",
    )
    p.add_argument(
        "--out", type=Path, default=None, help="report file (default report.txt/.csv/.md)"
    )
    p.set_defaults(func=cmd_report)
    return parser


# ------------------------------------------------------------- subcommands


def cmd_generate(args) -> int:
    if not args.config:
        raise _UsageError("generate requires --config with a plan")
    cfg = load_config(args.config, _parse_overrides(args.overrides))
    if not cfg.plan:
        raise _UsageError(f"config {args.config!r} has an empty [plan] section")
    registry = load_default_registry()
    corpus = generate_corpus(
        registry,
        DEFAULT_LEXICON,
        cfg.plan,
        master_seed=args.seed,
        config=cfg.gen,
        jobs=args.jobs,
    )
    args.out_dir.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, args.out_dir / CORPUS_FILE, args.out_dir / MANIFEST_FILE)
    print(f"wrote {len(corpus.pairs)} pairs to {args.out_dir / CORPUS_FILE}")
    return EXIT_OK


def cmd_split(args) -> int:
    corpus = _load_run_corpus(args.out_dir)
    fraction = args.train_fraction
    overrides = None
    if args.config:
        cfg = load_config(args.config, _parse_overrides(args.overrides))
        if fraction is None:
            fraction = cfg.train_fraction
        overrides = {
            entry.template_id: entry.validate_count
            for entry in cfg.plan
            if entry.validate_count is not None
        }
    if fraction is None:
        fraction = 0.95
    tagged = split_corpus(
        corpus,
        fraction,
        rng=random.Random(args.seed),
        validate_overrides=overrides or None,
    )
    save_corpus(tagged, args.out_dir / CORPUS_FILE, args.out_dir / MANIFEST_FILE)
    counts = {name: 0 for name in SPLITS}
    for pair in tagged.pairs:
        counts[pair.split] += 1
    summary = ", ".join(f"{name}={counts[name]}" for name in SPLITS)
    print(f"tagged {len(tagged.pairs)} pairs: {summary}")
    return EXIT_OK


def cmd_export(args) -> int:
    corpus = _load_run_corpus(args.out_dir)
    text = export_training_text(
        corpus, which=args.which, sentinel=args.sentinel, shuffle_seed=args.shuffle_seed
    )
    out = args.out if args.out is not None else args.out_dir / TRAINING_FILE
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    records = sum(1 for line in text.splitlines() if line == args.sentinel)
    print(f"wrote {records} records to {out}")
    return EXIT_OK


def cmd_lint(args) -> int:
    name, text = _read_text_arg(args.file)
    diagnostics = check(text)
    for diagnostic in diagnostics:
        print(f"{name}:{diagnostic.line}:{diagnostic.col}: {diagnostic.message}")
    return EXIT_DATA if diagnostics else EXIT_OK


def cmd_translate(args) -> int:
    registry = load_default_registry()
    translator = Translator(
        registry, DEFAULT_LEXICON, include_held_out=not args.trained_only
    )
    if not args.batch:
        _, text = _read_text_arg(args.file)
        print(translator.translate(text.strip()))
        return EXIT_OK

    corpus = _load_run_corpus(args.out_dir)
    wanted = set(_parse_splits(args.splits))
    predictions: list[PredictionRecord] = []
    failures = 0
    for pair in corpus.pairs:
        if pair.split not in wanted:
            continue
        try:
            predictions.append(
                PredictionRecord(pair.template_id, pair.index, translator.translate(pair.english))
            )
        except (NoMatchError, AmbiguousMatchError) as exc:
            failures += 1
            predictions.append(
                PredictionRecord(
                    pair.template_id, pair.index, "", skip=type(exc).__name__
                )
            )
    out = args.out if args.out is not None else args.out_dir / PREDICTIONS_FILE
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(format_predictions(predictions), encoding="utf-8")
    print(f"wrote {len(predictions)} predictions to {out}")
    if failures:
        print(f"{failures} prompts failed to translate", file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    corpus = _load_run_corpus(args.out_dir)
    path = args.predictions if args.predictions is not None else args.out_dir / PREDICTIONS_FILE
    predictions = import_predictions(path)
    records, rows = evaluate_run(predictions, corpus, _parse_splits(args.splits))
    out = args.records_out if args.records_out is not None else args.out_dir / RECORDS_FILE
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(format_records(records), encoding="utf-8")
    overall = rows[-1]
    print(
        f"overall: {overall.n_correct}/{overall.n_validated} correct "
        f"({overall.percent_correct:.1f}%)"
    )
    return EXIT_OK


def cmd_report(args) -> int:
    corpus = _load_run_corpus(args.out_dir)
    path = args.predictions if args.predictions is not None else args.out_dir / PREDICTIONS_FILE
    predictions = import_predictions(path)
    _, rows = evaluate_run(predictions, corpus, _parse_splits(args.splits))
    text = format_report(rows, args.fmt)
    out = args.out if args.out is not None else args.out_dir / REPORT_FILES[args.fmt]
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_OK


# ------------------------------------------------------------- entry point


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        print("veritask: error: a subcommand is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"veritask: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingPredictionError as exc:
        print(f"veritask: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        for template_id, index in exc.keys:
            print(f"  missing: {template_id}:{index}", file=sys.stderr)
        return EXIT_DATA
    except VeritaskError as exc:
        print(f"veritask: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"veritask: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        print(f"veritask: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
