"""Command line front end: lmadapter finetune | predict."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from lmadapter.config import BASE_MODELS, AdapterConfig
from lmadapter.errors import AdapterError
from lmadapter.predicting import DEFAULT_SPLITS, predict
from lmadapter.training import finetune

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lmadapter", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    tune = sub.add_parser("finetune", help="train on exported TASK/RESULT text")
    tune.add_argument("--train", required=True, type=Path, help="training text file")
    tune.add_argument("--out", required=True, type=Path, help="checkpoint directory to write")
    tune.add_argument("--base-model", default="tiny-gpt2", choices=BASE_MODELS)
    tune.add_argument("--steps", type=int, default=None,
                      help="optimizer steps (default 7500; use a small value at desk scale)")
    tune.add_argument("--learning-rate", type=float, default=None)
    tune.add_argument("--weight-decay", type=float, default=None)
    tune.add_argument("--adam-epsilon", type=float, default=None)
    tune.add_argument("--batch-size", type=int, default=None)
    tune.add_argument("--block-size", type=int, default=None)
    tune.add_argument("--sentinel", default=None, help="record terminator in the training text")
    tune.add_argument("--seed", type=int, default=None)

    gen = sub.add_parser("predict", help="complete corpus prompts into a prediction file")
    gen.add_argument("--checkpoint", required=True, type=Path, help="finetune output directory")
    gen.add_argument("--corpus", required=True, type=Path, help="corpus record file")
    gen.add_argument("--out", required=True, type=Path, help="prediction file to write")
    gen.add_argument("--splits", default=",".join(DEFAULT_SPLITS),
                     help="comma-separated split names to answer (default validate,held_out)")
    gen.add_argument("--temperature", type=float, default=None)
    gen.add_argument("--top-p", type=float, default=None)
    gen.add_argument("--top-k", type=int, default=None)
    gen.add_argument("--max-tokens", type=int, default=None,
                     help="total budget for prompt plus completion")
    gen.add_argument("--seed", type=int, default=None)
    return parser


def _overrides(args, names: dict[str, str]) -> dict[str, object]:
    out = {}
    for attr, field in names.items():
        value = getattr(args, attr)
        if value is not None:
            out[field] = value
    return out


def cmd_finetune(args) -> int:
    overrides = _overrides(args, {
        "steps": "steps",
        "learning_rate": "learning_rate",
        "weight_decay": "weight_decay",
        "adam_epsilon": "adam_epsilon",
        "batch_size": "batch_size",
        "block_size": "block_size",
        "sentinel": "sentinel",
        "seed": "seed",
    })
    cfg = AdapterConfig(base_model=args.base_model, **overrides)
    losses = finetune(args.train, args.out, cfg)
    if losses:
        print(f"trained {len(losses)} steps: loss {losses[0]:.4f} -> {losses[-1]:.4f}")
    else:
        print("stored reference table (echo backend, no training)")
    print(f"checkpoint written to {args.out}")
    return EXIT_OK


def cmd_predict(args) -> int:
    splits = tuple(s.strip() for s in args.splits.split(",") if s.strip())
    overrides = _overrides(args, {
        "temperature": "temperature",
        "top_p": "top_p",
        "top_k": "top_k",
        "max_tokens": "max_tokens",
        "seed": "seed",
    })
    done, skipped = predict(args.checkpoint, args.corpus, args.out,
                            splits=splits, overrides=overrides)
    note = f" ({skipped} skipped: token limit)" if skipped else ""
    print(f"wrote {done + skipped} predictions{note} to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "finetune":
            return cmd_finetune(args)
        return cmd_predict(args)
    except AdapterError as exc:
        print(f"lmadapter: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"lmadapter: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
