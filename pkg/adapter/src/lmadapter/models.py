"""Completion backends and checkpoint storage.

Two backends:

- "tiny-gpt2": a small randomly initialized GPT-2 over raw bytes
  (vocab 256), trained here from scratch. Stands in for a large
  pretrained model; same training and sampling path, desk-scale cost.
- "echo": answers prompts from a lookup table memorized at finetune
  time. No learning; exists to exercise the file contract end to end.

Text is tokenized as UTF-8 bytes, so token counts equal byte counts.
"""

from __future__ import annotations

import json
from pathlib import Path

from lmadapter.config import MAX_TOKEN_CAP, AdapterConfig, load_config, save_config
from lmadapter.errors import AdapterError

CONFIG_FILE = "adapter_config.json"
LOSSES_FILE = "losses.txt"
ECHO_FILE = "echo_table.json"
MODEL_DIR = "model"

_TASK_PREFIX = "TASK: "
_TASK_SUFFIX = " RESULT:"


def encode(text: str) -> list[int]:
    return list(text.encode("utf-8"))


def decode(ids: list[int]) -> str:
    # An untrained model emits arbitrary bytes; never crash on them.
    return bytes(ids).decode("utf-8", errors="replace")


def token_len(text: str) -> int:
    return len(text.encode("utf-8"))


class EchoCompleter:
    """Completes a TASK prompt with the memorized result, framed like
    the training text so the sentinel stop path is exercised."""

    def __init__(self, table: dict[str, str], sentinel: str):
        self._table = table
        self._sentinel = sentinel

    def complete(self, prompt: str, max_new_tokens: int) -> str:
        english = prompt
        if prompt.startswith(_TASK_PREFIX) and prompt.endswith(_TASK_SUFFIX):
            english = prompt[len(_TASK_PREFIX):-len(_TASK_SUFFIX)]
        result = self._table.get(english)
        if result is None:
            return ""
        completion = f"\n{result}\n{self._sentinel}\n"
        return decode(encode(completion)[:max_new_tokens])


class LmCompleter:
    """Samples byte tokens from a causal LM until the sentinel or the
    token budget ends the completion."""

    def __init__(self, model, cfg: AdapterConfig):
        import torch

        self._model = model
        self._cfg = cfg
        self._rng = torch.Generator().manual_seed(cfg.seed)

    def complete(self, prompt: str, max_new_tokens: int) -> str:
        import torch

        cfg = self._cfg
        ids = torch.tensor([encode(prompt)], dtype=torch.long)
        generated: list[int] = []
        self._model.eval()
        for _ in range(max_new_tokens):
            with torch.no_grad():
                logits = self._model(ids).logits[0, -1]
            next_id = _sample(logits, cfg, self._rng)
            generated.append(next_id)
            ids = torch.cat([ids, torch.tensor([[next_id]])], dim=1)
            if cfg.sentinel in decode(generated):
                break
        return decode(generated)


def _sample(logits, cfg: AdapterConfig, rng) -> int:
    import torch

    logits = logits / cfg.temperature
    if cfg.top_k > 0:
        kth = torch.topk(logits, min(cfg.top_k, logits.numel())).values[-1]
        logits = logits.masked_fill(logits < kth, float("-inf"))
    probs = torch.softmax(logits, dim=-1)
    if cfg.top_p < 1:
        sorted_probs, order = torch.sort(probs, descending=True)
        cumulative = torch.cumsum(sorted_probs, dim=-1)
        # Keep the smallest prefix reaching top_p; always keep the best token.
        sorted_probs[cumulative - sorted_probs >= cfg.top_p] = 0.0
        probs = torch.zeros_like(probs).scatter(0, order, sorted_probs)
        probs = probs / probs.sum()
    return int(torch.multinomial(probs, 1, generator=rng))


def build_lm(cfg: AdapterConfig):
    """Fresh small byte-level GPT-2, seeded initialization."""
    import torch

    _quiet_transformers()
    from transformers import GPT2Config, GPT2LMHeadModel

    torch.manual_seed(cfg.seed)
    model_cfg = GPT2Config(
        vocab_size=256,
        n_positions=MAX_TOKEN_CAP,
        n_embd=64,
        n_layer=2,
        n_head=2,
        bos_token_id=None,
        eos_token_id=None,
    )
    return GPT2LMHeadModel(model_cfg)


def _quiet_transformers() -> None:
    from transformers.utils import logging

    logging.set_verbosity_error()
    logging.disable_progress_bar()


def save_checkpoint(
    directory,
    cfg: AdapterConfig,
    losses: list[float],
    echo_table: dict[str, str] | None = None,
    model=None,
) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_config(cfg, directory / CONFIG_FILE)
    (directory / LOSSES_FILE).write_text(
        "".join(f"{loss!r}\n" for loss in losses), encoding="utf-8"
    )
    if echo_table is not None:
        (directory / ECHO_FILE).write_text(
            json.dumps(echo_table, indent=2) + "\n", encoding="utf-8"
        )
    if model is not None:
        model.save_pretrained(directory / MODEL_DIR)


def load_checkpoint(directory, overrides: dict | None = None) -> tuple[AdapterConfig, object]:
    """Return the config snapshot and a ready completer.

    `overrides` replaces snapshot fields (sampling knobs, usually)
    before the completer is built.
    """
    import dataclasses

    directory = Path(directory)
    config_path = directory / CONFIG_FILE
    if not config_path.exists():
        raise AdapterError(
            f"{directory} is not a checkpoint (no {CONFIG_FILE}); "
            "point --checkpoint at a finetune output directory"
        )
    cfg = load_config(config_path)
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
        cfg.validate()
    if cfg.base_model == "echo":
        echo_path = directory / ECHO_FILE
        if not echo_path.exists():
            raise AdapterError(f"echo checkpoint {directory} is missing {ECHO_FILE}")
        table = json.loads(echo_path.read_text(encoding="utf-8"))
        return cfg, EchoCompleter(table, cfg.sentinel)
    model_path = directory / MODEL_DIR
    if not model_path.exists():
        raise AdapterError(f"checkpoint {directory} is missing {MODEL_DIR}/")
    _quiet_transformers()
    from transformers import GPT2LMHeadModel

    try:
        model = GPT2LMHeadModel.from_pretrained(model_path)
    except OSError as exc:
        raise AdapterError(
            f"cannot load model weights from {model_path}: {exc}; "
            "re-run finetune to produce a fresh checkpoint"
        ) from exc
    return cfg, LmCompleter(model, cfg)


def load_losses(directory) -> list[float]:
    path = Path(directory) / LOSSES_FILE
    return [float(line) for line in path.read_text(encoding="utf-8").splitlines() if line]
