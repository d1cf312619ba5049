"""Generation configuration and corpus plans.

Both live in one INI-style text file so a whole corpus run is pinned by a
single artifact. The ``[gen]`` section holds sampling knobs, ``[plan]``
maps template ids to sample counts, and ``[split]`` carries the train
fraction. Every key can also be overridden from the command line, one flag
per key.

Plan lines take the form::

    pa00 = 2000
    mt00 = 5250 validate=250 pool=trained

``validate`` pins the exact number of validation pairs for that template
(instead of the fractional rule), and ``pool`` selects which template pool
multi tasks compose from.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path

from veritask.errors import ConfigError


@dataclass(frozen=True)
class GenConfig:
    """Sampling knobs for task generation.

    The optional-clause probabilities default to an even coin. The
    remaining shape knobs (how often expressions are binary, how often an
    atom is negated, how often derived signals appear) are this toolkit's
    own defaults; they are deliberately configurable because no single
    figure is canonical.
    """

    expr_depth_max: int = 2
    reg_width_max: int = 8
    seq_width_max: int = 3
    seq_len_max: int = 4
    enable_prob: float = 0.5
    reset_prob: float = 0.5
    reset_sync_prob: float = 0.5
    clock_explicit_prob: float = 0.5
    defined_prob: float = 0.25
    binop_prob: float = 0.8
    not_prob: float = 0.15
    max_sample_attempts: int = 1000


@dataclass(frozen=True)
class PlanEntry:
    template_id: str
    count: int
    validate_count: int | None = None
    pool: str | None = None  # multi tasks: "trained" or "non_trained"


@dataclass(frozen=True)
class RunConfig:
    gen: GenConfig
    plan: tuple[PlanEntry, ...]
    train_fraction: float = 0.95


_GEN_FIELDS = {f.name: f.type for f in fields(GenConfig)}

_INT_FIELDS = {
    "expr_depth_max",
    "reg_width_max",
    "seq_width_max",
    "seq_len_max",
    "max_sample_attempts",
}


def _parse_gen_value(key: str, raw: str):
    try:
        return int(raw) if key in _INT_FIELDS else float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for gen.{key}: {raw!r}") from exc


def parse_plan_entry(template_id: str, raw: str) -> PlanEntry:
    parts = raw.split()
    if not parts:
        raise ConfigError(f"plan entry {template_id} has no count")
    try:
        count = int(parts[0])
    except ValueError as exc:
        raise ConfigError(f"plan entry {template_id}: bad count {parts[0]!r}") from exc
    if count < 0:
        raise ConfigError(f"plan entry {template_id}: negative count")
    validate_count = None
    pool = None
    for extra in parts[1:]:
        key, sep, value = extra.partition("=")
        if not sep:
            raise ConfigError(f"plan entry {template_id}: bad option {extra!r}")
        if key == "validate":
            try:
                validate_count = int(value)
            except ValueError as exc:
                raise ConfigError(
                    f"plan entry {template_id}: bad validate count {value!r}"
                ) from exc
        elif key == "pool":
            if value not in ("trained", "non_trained"):
                raise ConfigError(f"plan entry {template_id}: bad pool {value!r}")
            pool = value
        else:
            raise ConfigError(f"plan entry {template_id}: unknown option {key!r}")
    return PlanEntry(template_id, count, validate_count, pool)


def _bundled_plan_path(name: str) -> Path | None:
    base = resources.files("veritask").joinpath("plans")
    candidate = base.joinpath(f"{name}.cfg")
    try:
        if candidate.is_file():
            return Path(str(candidate))
    except (OSError, ValueError):
        return None
    return None


def resolve_config_path(name_or_path: str) -> Path:
    """Accept a filesystem path or the bare name of a bundled plan."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    bundled = _bundled_plan_path(name_or_path)
    if bundled is not None:
        return bundled
    raise ConfigError(f"config not found: {name_or_path}")


def load_config(name_or_path: str, overrides: dict[str, str] | None = None) -> RunConfig:
    """Load a run configuration, applying ``section.key=value`` overrides."""
    path = resolve_config_path(name_or_path)
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # template ids are case sensitive as written
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    gen_values: dict[str, object] = {}
    if parser.has_section("gen"):
        for key, raw in parser.items("gen"):
            if key not in _GEN_FIELDS:
                raise ConfigError(f"unknown gen key {key!r}")
            gen_values[key] = _parse_gen_value(key, raw)

    plan: list[PlanEntry] = []
    seen: set[str] = set()
    if parser.has_section("plan"):
        for template_id, raw in parser.items("plan"):
            if template_id in seen:
                raise ConfigError(f"duplicate plan entry {template_id}")
            seen.add(template_id)
            plan.append(parse_plan_entry(template_id, raw))

    train_fraction = 0.95
    if parser.has_section("split"):
        for key, raw in parser.items("split"):
            if key != "train_fraction":
                raise ConfigError(f"unknown split key {key!r}")
            try:
                train_fraction = float(raw)
            except ValueError as exc:
                raise ConfigError(f"bad train_fraction {raw!r}") from exc

    config = RunConfig(GenConfig(**gen_values), tuple(plan), train_fraction)
    if overrides:
        config = apply_overrides(config, overrides)
    return config


def apply_overrides(config: RunConfig, overrides: dict[str, str]) -> RunConfig:
    """Apply ``gen.key``, ``plan.id`` and ``split.train_fraction`` overrides."""
    gen = config.gen
    plan = {entry.template_id: entry for entry in config.plan}
    train_fraction = config.train_fraction
    for dotted, raw in overrides.items():
        section, sep, key = dotted.partition(".")
        if not sep:
            raise ConfigError(f"override {dotted!r} needs a section prefix")
        if section == "gen":
            if key not in _GEN_FIELDS:
                raise ConfigError(f"unknown gen key {key!r}")
            gen = replace(gen, **{key: _parse_gen_value(key, raw)})
        elif section == "plan":
            plan[key] = parse_plan_entry(key, raw)
        elif section == "split":
            if key != "train_fraction":
                raise ConfigError(f"unknown split key {key!r}")
            train_fraction = float(raw)
        else:
            raise ConfigError(f"unknown config section {section!r}")
    return RunConfig(gen, tuple(plan.values()), train_fraction)
