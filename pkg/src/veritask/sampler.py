"""Random task sampling with deterministic, independently derived streams.

Each corpus pair owns a private random stream derived from the master
seed, the template id and the pair index, so generation order and worker
count never change what gets produced. The derivation hashes the triple
rather than offsetting the seed, which keeps streams statistically
independent even for adjacent indices.
"""

from __future__ import annotations

import hashlib
import random

from veritask.config import GenConfig
from veritask.errors import IdentifierExhaustionError
from veritask.meta import (
    BOOL_OPS,
    CMP_OPS,
    AssignmentMeta,
    BinOp,
    CancelSpec,
    EnableSpec,
    Expr,
    InputSpec,
    MultiMeta,
    Not,
    RegisterMeta,
    ResetSpec,
    Scenario,
    ScenarioRegisterMeta,
    ScenarioSignal,
    SeqGenMeta,
    TaskMeta,
    Var,
    RESERVED,
)
from veritask.vocab import ASSIGN_SETTINGS, REGISTER_SETTINGS

_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_TAIL = _LETTERS + "0123456789"


def derive_rng(master_seed: int, template_id: str, index: int) -> random.Random:
    """An independent random stream for one (template, index) slot."""
    key = f"{master_seed}:{template_id}:{index}".encode()
    seed = int.from_bytes(hashlib.sha256(key).digest()[:16], "big")
    return random.Random(seed)


def sample_identifier(
    rng: random.Random, used: set[str] = frozenset(), attempts: int = 64
) -> str:
    """Draw a fresh signal name: 1..3 chars, letter first, never reserved."""
    for _ in range(attempts):
        length = rng.randint(1, 3)
        name = rng.choice(_LETTERS)
        for _ in range(length - 1):
            name += rng.choice(_TAIL)
        if name not in RESERVED and name not in used:
            return name
    raise IdentifierExhaustionError(
        f"no unused identifier found in {attempts} attempts"
    )


def _draw(rng: random.Random, used: set[str]) -> str:
    name = sample_identifier(rng, used)
    used.add(name)
    return name


def _sample_atom(rng: random.Random, used: set[str], config: GenConfig) -> Expr:
    name = _draw(rng, used)
    if rng.random() < config.not_prob:
        return Not(Var(name))
    return Var(name)


def sample_expr(
    rng: random.Random,
    used: set[str],
    config: GenConfig,
    definition: bool = False,
) -> Expr:
    """Draw an expression.

    Plain expressions use Boolean operators over one or two atoms.
    Definition expressions (the right-hand side of a derived signal) are
    always a single binary operator and may additionally draw the
    comparison and modulo operators, whose operands stay plain.
    """
    if definition:
        op = rng.choice(BOOL_OPS + CMP_OPS)
        if op in CMP_OPS:
            return BinOp(op, Var(_draw(rng, used)), Var(_draw(rng, used)))
        return BinOp(op, _sample_atom(rng, used, config), _sample_atom(rng, used, config))
    if rng.random() < config.binop_prob:
        op = rng.choice(BOOL_OPS)
        return BinOp(op, _sample_atom(rng, used, config), _sample_atom(rng, used, config))
    return _sample_atom(rng, used, config)


def _sample_enable(rng: random.Random, used: set[str], config: GenConfig) -> EnableSpec:
    if rng.random() < config.defined_prob:
        expr = sample_expr(rng, used, config, definition=True)
        if rng.random() < 0.5:
            return EnableSpec(name=_draw(rng, used), expr=expr)
        return EnableSpec(expr=expr)
    return EnableSpec(name=_draw(rng, used))


def _sample_reset(rng: random.Random, used: set[str], config: GenConfig) -> ResetSpec:
    name = _draw(rng, used)
    sync = rng.random() < config.reset_sync_prob
    expr = None
    if rng.random() < config.defined_prob:
        expr = sample_expr(rng, used, config, definition=True)
    return ResetSpec(name=name, sync=sync, expr=expr)


def _sample_assignment(rng: random.Random, used: set[str], config: GenConfig) -> AssignmentMeta:
    target = _draw(rng, used)
    return AssignmentMeta(target, sample_expr(rng, used, config))


def _sample_scenario_assignment(
    rng: random.Random, used: set[str], config: GenConfig
) -> AssignmentMeta:
    setting = rng.choice(sorted(ASSIGN_SETTINGS))
    count = rng.randint(2, 4)
    # One adjective covers all sensors in the wording, so the asserted level
    # is drawn once for the whole set.
    in_level = rng.choice(("high", "low"))
    out_level = rng.choice(("high", "low"))
    quantifier = rng.choice(("any", "all"))
    inputs = tuple(ScenarioSignal(_draw(rng, used), in_level) for _ in range(count))
    output = ScenarioSignal(_draw(rng, used), out_level)
    scenario = Scenario(setting, inputs, ScenarioSignal(output.name, out_level), quantifier)
    return AssignmentMeta(output.name, scenario)


def _sample_register(rng: random.Random, used: set[str], config: GenConfig) -> RegisterMeta:
    reg = _draw(rng, used)
    width = rng.randint(1, config.reg_width_max)
    # A defined input is a derived signal, so it may use the comparison and
    # modulo operators; a plain input sticks to Boolean shapes.
    input_name = None
    if rng.random() < config.defined_prob:
        input_expr = sample_expr(rng, used, config, definition=True)
        if rng.random() < 0.5:
            input_name = _draw(rng, used)
    else:
        input_expr = sample_expr(rng, used, config)
    enable = None
    if rng.random() < config.enable_prob:
        enable = _sample_enable(rng, used, config)
    reset = None
    if rng.random() < config.reset_prob:
        reset = _sample_reset(rng, used, config)
    clock = _draw(rng, used) if rng.random() < config.clock_explicit_prob else None
    return RegisterMeta(
        reg=reg,
        width=width,
        input=InputSpec(expr=input_expr, name=input_name),
        enable=enable,
        reset=reset,
        clock=clock,
    )


def _sample_scenario_register(
    rng: random.Random, used: set[str], config: GenConfig
) -> ScenarioRegisterMeta:
    setting = rng.choice(sorted(REGISTER_SETTINGS))
    output = ScenarioSignal(_draw(rng, used), rng.choice(("high", "low")))
    trigger = ScenarioSignal(_draw(rng, used), rng.choice(("high", "low")))
    sync = rng.random() < config.reset_sync_prob
    # The sensitivity list only knows rising edges, so an asynchronous
    # cancel must assert high.
    level = "high" if not sync else rng.choice(("high", "low"))
    cancel = CancelSpec(name=_draw(rng, used), level=level, sync=sync)
    clock = _draw(rng, used) if rng.random() < config.clock_explicit_prob else None
    return ScenarioRegisterMeta(
        setting=setting, output=output, trigger=trigger, cancel=cancel, clock=clock
    )


def _sample_seqgen(rng: random.Random, used: set[str], config: GenConfig) -> SeqGenMeta:
    out = _draw(rng, used)
    width = rng.randint(1, config.seq_width_max)
    count = rng.randint(2, config.seq_len_max)
    elements = tuple(rng.randrange(1 << width) for _ in range(count))
    enable = _sample_enable(rng, used, config)
    reset = None
    if rng.random() < config.reset_prob:
        reset = _sample_reset(rng, used, config)
    clock = _draw(rng, used)
    return SeqGenMeta(
        out=out, width=width, elements=elements, enable=enable, reset=reset, clock=clock
    )


def _sample_multi(rng: random.Random, used: set[str], config: GenConfig) -> MultiMeta:
    count = rng.randint(2, 4)
    subtasks = []
    for _ in range(count):
        kind = rng.choice(("pa", "da", "pr"))
        if kind == "pa":
            subtasks.append(_sample_assignment(rng, used, config))
        elif kind == "da":
            subtasks.append(_sample_scenario_assignment(rng, used, config))
        else:
            subtasks.append(_sample_register(rng, used, config))
    return MultiMeta(subtasks=tuple(subtasks))


_SAMPLERS = {
    "pa": _sample_assignment,
    "da": _sample_scenario_assignment,
    "pr": _sample_register,
    "dr": _sample_scenario_register,
    "pg": _sample_seqgen,
    "mt": _sample_multi,
}


def sample_meta(class_name: str, rng: random.Random, config: GenConfig) -> TaskMeta:
    """Draw one metastructure of the given class."""
    try:
        sampler = _SAMPLERS[class_name]
    except KeyError:
        raise ValueError(f"unknown task class {class_name!r}") from None
    return sampler(rng, set(), config)
