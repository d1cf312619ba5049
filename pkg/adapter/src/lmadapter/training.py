"""Fine-tuning over exported training text."""

from __future__ import annotations

from pathlib import Path

from lmadapter.config import AdapterConfig
from lmadapter.corpus_files import read_training_text
from lmadapter.errors import AdapterError
from lmadapter.models import build_lm, save_checkpoint


def finetune(train_file, checkpoint_dir, cfg: AdapterConfig) -> list[float]:
    """Train on the text, write a checkpoint, return per-step losses.

    The echo backend memorizes the records instead of training and
    returns no losses.
    """
    cfg.validate()
    train_path = Path(train_file)
    records = read_training_text(train_path, cfg.sentinel)
    if not records:
        raise AdapterError(f"training text {train_path} has no records; nothing to train on")

    if cfg.base_model == "echo":
        table = {record.english: record.verilog for record in records}
        save_checkpoint(checkpoint_dir, cfg, losses=[], echo_table=table)
        return []

    losses, model = _train_lm(train_path.read_bytes(), cfg)
    save_checkpoint(checkpoint_dir, cfg, losses=losses, model=model)
    return losses


def _train_lm(data_bytes: bytes, cfg: AdapterConfig) -> tuple[list[float], object]:
    import torch

    model = build_lm(cfg)
    data = torch.tensor(list(data_bytes), dtype=torch.long)
    block = min(cfg.block_size, len(data) - 1)
    if block < 1:
        raise AdapterError("training text is too short to form one block")
    n_blocks = len(data) // block
    optimizer = torch.optim.AdamW(
        model.parameters(),
        lr=cfg.learning_rate,
        weight_decay=cfg.weight_decay,
        eps=cfg.adam_epsilon,
    )
    rng = torch.Generator().manual_seed(cfg.seed)
    losses: list[float] = []
    model.train()
    for step in range(cfg.steps):
        picks = torch.randint(0, n_blocks, (cfg.batch_size,), generator=rng)
        batch = torch.stack([data[i * block:(i + 1) * block] for i in picks])
        try:
            out = model(batch, labels=batch)
            optimizer.zero_grad()
            out.loss.backward()
            optimizer.step()
        except RuntimeError as exc:
            if "out of memory" in str(exc).lower():
                raise AdapterError(
                    f"out of memory at step {step}; lower batch_size "
                    f"({cfg.batch_size}) or block_size ({cfg.block_size})"
                ) from exc
            raise
        losses.append(out.loss.item())
    return losses, model
