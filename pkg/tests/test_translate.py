"""Baseline translator: template matching, recovery, and round trips."""

from __future__ import annotations

import random

import pytest

from test_emit import FIG_CALL_BUTTON, FIG_CALL_BUTTON_RESULT

from veritask.config import GenConfig
from veritask.emit import emit
from veritask.errors import AmbiguousMatchError, NoMatchError
from veritask.meta import (
    AssignmentMeta,
    MultiMeta,
    RegisterMeta,
    Scenario,
    ScenarioRegisterMeta,
    SeqGenMeta,
    validate_meta,
)
from veritask.sampler import derive_rng, sample_meta
from veritask.templates import (
    DEFAULT_LEXICON,
    Registry,
    load_default_registry,
    parse_template_text,
    render_english,
    render_multi,
    select_template,
)
from veritask.translate import Translator, parse_task, translate

REGISTRY = load_default_registry()
TRAINED = Translator(REGISTRY)
FULL = Translator(REGISTRY, include_held_out=True)
CONFIG = GenConfig()

FIG_TASK = (
    "Write sequential code for a call button (e.g., in an airplane or hospital). "
    "If the call button `b' is pressed (= 1) then the call light `l' should turn "
    "on (= 1). The output call light `l' should turn off (= 0) when the "
    "synchronous cancel button `r' is pressed (= 1)."
)


# ------------------------------------------------------------- fixtures


def test_translate_simple_assignment():
    text = "Put the result of `a' nand `b' in `c'."
    assert TRAINED.translate(text) == "assign c = !(a & b);"


def test_translate_figure_fixture_bytes():
    assert TRAINED.translate(FIG_TASK) == FIG_CALL_BUTTON_RESULT
    assert TRAINED.parse(FIG_TASK) == FIG_CALL_BUTTON


def test_translate_register_full_form():
    text = (
        "Define a 4-bit register `q' with input `a' nand `b', enable `e' defined "
        "as `b' xnor `r', an asynchronous reset `r', and a clock `c'."
    )
    meta = TRAINED.parse(text)
    assert isinstance(meta, RegisterMeta)
    assert meta.width == 4
    assert meta.enable.name == "e" and meta.enable.expr is not None
    assert meta.reset.sync is False and meta.reset.expr is None
    assert meta.clock == "c"


def test_translate_module_level_helpers():
    text = "Let `d' be not `a'."
    assert translate(text, REGISTRY) == emit(parse_task(text, REGISTRY))


def test_parse_recovers_scenario():
    text = (
        "A vault door has two active-low secret switch pressed sensors `et', `lz'. "
        "Write combinatorial logic for a active-high lock `s' which opens when "
        "all of the switches are pressed."
    )
    meta = TRAINED.parse(text)
    assert isinstance(meta, AssignmentMeta)
    assert isinstance(meta.expr, Scenario)
    assert meta.expr.setting == "vault"
    assert [s.name for s in meta.expr.inputs] == ["et", "lz"]
    assert meta.expr.quantifier == "all"


def test_parse_sequence_width_from_elements():
    text = (
        "Define sequential code which will produce the repeating sequence "
        "[00, 10, 10] on output `q'. It should advance on clock `c' whenever "
        "enable `e' is present."
    )
    meta = TRAINED.parse(text)
    assert isinstance(meta, SeqGenMeta)
    assert meta.width == 2 and meta.elements == (0, 2, 2)


# ---------------------------------------------------------------- errors


def test_no_match_reports_best_span():
    text = "Put the result of `a' nand `b' somewhere weird."
    with pytest.raises(NoMatchError) as err:
        TRAINED.parse(text)
    start, end = err.value.best_span
    assert start == 0
    assert text[start:end].startswith("Put the result of `a' nand `b'")


def test_no_match_on_garbage():
    with pytest.raises(NoMatchError):
        TRAINED.parse("This bears no resemblance to anything.")


def test_multi_failure_span_points_at_bad_fragment():
    text = "Put the result of `a' nand `b' in `c'. Then do something impossible."
    with pytest.raises(NoMatchError) as err:
        TRAINED.parse(text)
    assert err.value.best_span[0] == 39


def test_held_out_templates_need_flag():
    text = "Assign into output `c' the result of `a' xor `b'."
    with pytest.raises(NoMatchError):
        TRAINED.parse(text)
    assert FULL.translate(text) == "assign c = a ^ b;"


def test_ambiguous_match_lists_candidates():
    text = (
        "[pa00 trained]\nPut the result of {expr:bexpr} in `{out:sig}'.\n"
        "[pa01 trained]\nPut the result of {expr:bexpr} in `{out:sig}'.\n"
    )
    doubled = Translator(Registry(parse_template_text(text)))
    with pytest.raises(AmbiguousMatchError) as err:
        doubled.parse("Put the result of `a' or `b' in `c'.")
    assert err.value.template_ids == ["pa00", "pa01"]


def test_duplicate_declared_names_rejected():
    # Renderable (rendering is purely textual) but not a valid task: the
    # register and its clock share the input's name.
    text = (
        "Define a 8-bit register `a' with input `a' defined as `b' and `c', "
        "enable `e', and clock `c'."
    )
    with pytest.raises(NoMatchError):
        TRAINED.parse(text)


def test_inconsistent_marks_rejected():
    text = FIG_TASK.replace("turn off (= 0)", "turn off (= 1)")
    with pytest.raises(NoMatchError):
        TRAINED.parse(text)


def test_echoed_name_mismatch_rejected():
    text = FIG_TASK.replace("call light `l' should turn off", "call light `x' should turn off")
    with pytest.raises(NoMatchError):
        TRAINED.parse(text)


def test_count_name_list_mismatch_rejected():
    text = (
        "A vault door has three active-low secret switch pressed sensors `et', `lz'. "
        "Write combinatorial logic for a active-high lock `s' which opens when "
        "all of the switches are pressed."
    )
    with pytest.raises(NoMatchError):
        TRAINED.parse(text)


def test_unequal_sequence_widths_rejected():
    text = (
        "Define sequential code which will produce the repeating sequence "
        "[00, 1, 10] on output `q'. It should advance on clock `c' whenever "
        "enable `e' is present."
    )
    with pytest.raises(NoMatchError):
        TRAINED.parse(text)


def test_stated_width_must_match_sequence():
    text = (
        "Define sequential code which will produce the repeating sequence "
        "[00, 10] on the 3-bit output `q'. It should advance on each tick of a "
        "clock `c' whenever enable `e' is present."
    )
    with pytest.raises(NoMatchError):
        TRAINED.parse(text)


def test_oversized_register_width_rejected():
    text = "Define a 12-bit register `q' with input `a', and clock `c'."
    with pytest.raises(NoMatchError):
        TRAINED.parse(text)


# ------------------------------------------------------------ round trips


def _render_one(cls: str, index: int, pool: str):
    rng = derive_rng(23, f"rt-{cls}-{pool}", index)
    meta = sample_meta(cls, rng, CONFIG)
    template = select_template(cls, meta, REGISTRY, rng, pool=pool)
    text = render_english(template, meta, DEFAULT_LEXICON, rng)
    return meta, text


@pytest.mark.parametrize("cls", ["pa", "da", "pr", "dr", "pg"])
def test_round_trip_trained_pool(cls):
    for index in range(300):
        meta, text = _render_one(cls, index, "trained")
        ids = TRAINED.matching_templates(text)
        assert len(ids) == 1, f"{text!r} matched {ids}"
        assert emit(TRAINED.parse(text)) == emit(meta)


@pytest.mark.parametrize("cls", ["pa", "da", "pr", "dr", "pg"])
def test_round_trip_held_out_pool(cls):
    done = 0
    index = 0
    while done < 120 and index < 600:
        rng = derive_rng(29, f"rth-{cls}", index)
        index += 1
        meta = sample_meta(cls, rng, CONFIG)
        try:
            template = select_template(cls, meta, REGISTRY, rng, pool="non_trained")
        except Exception:
            continue  # meta not expressible by the held-out pool
        text = render_english(template, meta, DEFAULT_LEXICON, rng)
        assert emit(FULL.parse(text)) == emit(meta)
        done += 1
    assert done == 120


def test_round_trip_multi():
    for index in range(120):
        rng = derive_rng(31, "rt-mt", index)
        meta = sample_meta("mt", rng, CONFIG)
        text = render_multi(meta, REGISTRY, DEFAULT_LEXICON, rng, pool="trained")
        got = TRAINED.parse(text)
        assert isinstance(got, MultiMeta)
        assert len(got.subtasks) == len(meta.subtasks)
        assert emit(got) == emit(meta)


def test_round_trip_preserves_meta_exactly():
    # emit equality is the contract, but nothing in the wording actually
    # loses information, so the parse is literally the identity.
    for cls in ("pa", "da", "pr", "dr", "pg"):
        for index in range(60):
            meta, text = _render_one(cls, index, "trained")
            assert TRAINED.parse(text) == meta


def test_recovered_metas_always_validate():
    rng = random.Random(37)
    for cls in ("pa", "da", "pr", "dr", "pg"):
        for index in range(50):
            meta, text = _render_one(cls, index, "trained")
            assert validate_meta(TRAINED.parse(text)) == []
