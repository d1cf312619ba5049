"""Run configuration for fine-tuning and generation."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from lmadapter.errors import AdapterError

# The exported training text ends every record with this line.
DEFAULT_SENTINEL = "<|endofresult|>"

# Sequence budget ceiling; also the context window of the bundled model.
MAX_TOKEN_CAP = 1024

BASE_MODELS = ("tiny-gpt2", "echo")


@dataclass(frozen=True)
class AdapterConfig:
    """Everything a finetune or predict run needs, snapshotted per checkpoint.

    `max_tokens` is the total sequence budget: prompt tokens plus
    generated tokens never exceed it, and prompts that already fill it
    are skipped rather than truncated.
    """

    base_model: str = "tiny-gpt2"
    learning_rate: float = 1e-4
    weight_decay: float = 0.05
    adam_epsilon: float = 1e-8
    steps: int = 7500
    batch_size: int = 8
    block_size: int = 256
    temperature: float = 0.7
    top_p: float = 0.9
    top_k: int = 0  # 0 disables top-k filtering
    max_tokens: int = MAX_TOKEN_CAP
    sentinel: str = DEFAULT_SENTINEL
    seed: int = 42

    def validate(self) -> None:
        checks = (
            (self.base_model in BASE_MODELS,
             f"base_model {self.base_model!r} is not one of {', '.join(BASE_MODELS)}"),
            (self.learning_rate > 0, "learning_rate must be positive"),
            (self.weight_decay >= 0, "weight_decay must be >= 0"),
            (self.adam_epsilon > 0, "adam_epsilon must be positive"),
            (self.steps > 0, "steps must be positive"),
            (self.batch_size > 0, "batch_size must be positive"),
            (0 < self.block_size <= MAX_TOKEN_CAP,
             f"block_size must be in 1..{MAX_TOKEN_CAP}"),
            (self.temperature > 0, "temperature must be positive"),
            (0 < self.top_p <= 1, "top_p must be in (0, 1]"),
            (self.top_k >= 0, "top_k must be >= 0 (0 disables it)"),
            (0 < self.max_tokens <= MAX_TOKEN_CAP,
             f"max_tokens must be in 1..{MAX_TOKEN_CAP}"),
            (bool(self.sentinel), "sentinel must be non-empty"),
        )
        for ok, message in checks:
            if not ok:
                raise AdapterError(f"bad config: {message}")


def save_config(cfg: AdapterConfig, path: Path) -> None:
    path.write_text(json.dumps(dataclasses.asdict(cfg), indent=2) + "\n", encoding="utf-8")


def load_config(path: Path) -> AdapterConfig:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise AdapterError(f"cannot read config snapshot {path}: {exc}") from exc
    known = {f.name for f in dataclasses.fields(AdapterConfig)}
    unknown = set(raw) - known
    if unknown:
        raise AdapterError(f"config snapshot {path} has unknown keys {sorted(unknown)}")
    cfg = AdapterConfig(**raw)
    cfg.validate()
    return cfg
