"""Lexer, parser, printer, and error classification."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from test_emit import FIG_CALL_BUTTON, FIG_CALL_BUTTON_RESULT, TABLE_REGISTER
from veritask.config import GenConfig
from veritask.emit import emit
from veritask.lint import (
    AlwaysBlock,
    BinExpr,
    Block,
    Comment,
    ContinuousAssign,
    IfArm,
    IfChain,
    Name,
    NonBlocking,
    RegDecl,
    SnippetAst,
    check,
    classify_error,
    parse_snippet,
    print_snippet,
    strip_whitespace,
    tokenize,
)
from veritask.meta import CLASSES
from veritask.sampler import derive_rng, sample_meta

# Lexer


def test_tokenize_kind_sequence():
    kinds = [t.kind for t in tokenize("assign c = !(a | b);")]
    assert kinds == [
        "keyword",
        "ident",
        "operator",
        "operator",
        "punct",
        "ident",
        "operator",
        "ident",
        "punct",
        "punct",
    ]


def test_tokenize_sized_literal_is_one_token():
    tokens = tokenize("3'b110")
    assert [(t.kind, t.text) for t in tokens] == [("sized_literal", "3'b110")]


def test_tokenize_comment_is_one_token():
    tokens = tokenize("// assume clock clk")
    assert [(t.kind, t.text) for t in tokens] == [("comment", "// assume clock clk")]


def test_tokenize_unknown_character_yields_error_token():
    tokens = tokenize("assign c = a ~ b;")
    errors = [t for t in tokens if t.kind == "error"]
    assert [(t.text, t.line, t.col) for t in errors] == [("~", 1, 14)]


def test_tokenize_tracks_lines():
    tokens = tokenize("reg q;\nalways @(posedge clk) begin\nend")
    always = next(t for t in tokens if t.text == "always")
    assert (always.line, always.col) == (2, 1)


@given(st.text(max_size=200))
def test_tokenize_is_total_with_increasing_positions(text):
    tokens = tokenize(text)
    positions = [(t.line, t.col) for t in tokens]
    assert positions == sorted(set(positions))


# Parsing and checking


def test_call_button_listing_is_clean():
    assert check(FIG_CALL_BUTTON_RESULT) == []


def test_missing_semicolon_is_one_syntax_diagnostic():
    diags = check("assign c = !(a | b)")
    assert len(diags) == 1
    assert "expected" in diags[0].message


def test_top_level_nonblocking_is_one_placement_diagnostic():
    diags = check("q <= a;")
    assert len(diags) == 1
    assert "outside an always block" in diags[0].message


def test_continuous_assign_inside_always_is_flagged():
    text = "reg q;\nalways @(posedge c) begin\n  assign q = a;\nend"
    diags = check(text)
    assert len(diags) == 1
    assert "inside an always block" in diags[0].message
    assert (diags[0].line, diags[0].col) == (3, 3)


def test_nonblocking_to_undeclared_register():
    diags = check("always @(posedge c) begin\n  q <= a;\nend")
    assert len(diags) == 1
    assert "not a declared register" in diags[0].message


def test_register_must_be_declared_before_the_always_block():
    text = "always @(posedge c) begin\n  q <= a;\nend\nreg q;"
    assert len(check(text)) == 1


def test_duplicate_declaration():
    diags = check("reg q;\nreg q;")
    assert [d.line for d in diags] == [2]
    assert "duplicate declaration of 'q'" in diags[0].message


def test_assign_to_register_is_flagged():
    diags = check("reg q;\nassign q = a;")
    assert len(diags) == 1
    assert "register" in diags[0].message


def test_two_assigns_to_one_wire():
    diags = check("assign c = a;\nassign c = b;")
    assert len(diags) == 1
    assert "multiple drivers" in diags[0].message


def test_stray_semicolon_after_end_is_a_syntax_error():
    text = "reg q;\nalways @(posedge c) begin\n  q <= a;\nend;"
    diags = check(text)
    assert len(diags) == 1
    assert diags[0].line == 4


def test_out_of_subset_keyword_fails():
    assert check("module top;") != []


def test_empty_snippet_is_clean():
    assert check("") == []
    assert parse_snippet("") == SnippetAst(())


def test_enum_and_case_parse():
    text = (
        "enum {s0, s1} state;\n"
        "reg o;\n"
        "always @(posedge c) begin\n"
        "  unique case (state)\n"
        "    s0: if(g) begin state <= s1; o <= 1'b1; end\n"
        "    s1: if(g) begin state <= s0; o <= 1'b0; end\n"
        "  endcase\n"
        "end"
    )
    assert check(text) == []


def test_parse_positions_do_not_affect_equality():
    a = parse_snippet("assign c = a;\nreg q;")
    b = parse_snippet("assign   c =\n  a;\n\nreg   q;")
    assert a == b


# Printing


def test_print_reproduces_call_button_listing_byte_for_byte():
    assert print_snippet(parse_snippet(FIG_CALL_BUTTON_RESULT)) == FIG_CALL_BUTTON_RESULT


def test_print_keeps_bare_if_arms_bare():
    text = "reg q;\nalways @(posedge c) begin\n  if(r) q <= 0;\n  else q <= a;\nend"
    assert print_snippet(parse_snippet(text)) == text


def test_print_preserves_grouping_parentheses():
    for text in (
        "assign c = a | (b | d);",
        "assign c = (a & b) | d;",
        "assign c = !(a ^ b);",
    ):
        assert print_snippet(parse_snippet(text)) == text


def test_print_drops_redundant_parentheses_stably():
    ast = parse_snippet("assign c = (a & b);")
    printed = print_snippet(ast)
    assert printed == "assign c = a & b;"
    assert parse_snippet(printed) == ast


def test_comment_in_case_arm_forces_multiline_arm():
    text = (
        "enum {s0} state;\n"
        "reg o;\n"
        "always @(posedge c) begin\n"
        "  case (state)\n"
        "    s0: begin\n"
        "      // hold\n"
        "      o <= 1;\n"
        "    end\n"
        "  endcase\n"
        "end"
    )
    ast = parse_snippet(text)
    assert parse_snippet(print_snippet(ast)) == ast


def test_print_parse_fixpoint_on_hand_built_tree():
    ast = SnippetAst(
        (
            Comment("// watch"),
            RegDecl("q", None, None),
            AlwaysBlock(
                ("c", "r"),
                (
                    IfChain(
                        (IfArm(Name("r"), Block((NonBlocking("q", Name("a")),))),),
                        NonBlocking("q", BinExpr("&", Name("a"), Name("b"))),
                    ),
                ),
            ),
        )
    )
    assert parse_snippet(print_snippet(ast)) == ast


def test_reparse_is_stable_on_unusual_but_legal_text():
    texts = [
        "reg q;\nalways @(posedge c) begin if (r) begin q <= 0; end end",
        "reg q;\nalways @(posedge c) begin\n  if(a) if(b) q <= 1; else q <= 0;\nend",
        "assign c = !!a;",
    ]
    for text in texts:
        first = parse_snippet(text)
        assert parse_snippet(print_snippet(first)) == first


# Classification


def test_classify_identity_and_whitespace():
    ref = "assign c = !(a | b);"
    assert classify_error(ref, ref) == "exact"
    assert classify_error("assign  c=!(a | b) ;", ref) == "exact"


def test_classify_operator_swap():
    assert classify_error("assign c = !(a & b);", "assign c = !(a | b);") == "operator_mismatch"


def test_classify_enable_reset_confusion_is_identifier_level():
    ref = emit(TABLE_REGISTER)
    assert "if(r)" in ref and "if(e)" in ref
    pred = ref.replace("if(r)", "if(x)").replace("if(e)", "if(r)").replace("if(x)", "if(e)")
    assert classify_error(pred, ref) == "identifier_mismatch"


def test_classify_syntax_when_prediction_does_not_lint():
    assert classify_error("assign c = !(a | b)", "assign c = !(a | b);") == "syntax"
    assert classify_error("q <= a;", "assign c = a;") == "syntax"


def test_classify_missing_line_is_structural():
    ref = "assign e = a & b;\nreg q;\nalways @(posedge c) begin\n  q <= e;\nend"
    pred = "reg q;\nalways @(posedge c) begin\n  q <= e;\nend"
    assert classify_error(pred, ref) == "structural_mismatch"


def test_classify_dropped_unique_is_structural():
    ref = (
        "enum {s0} state;\nreg o;\nalways @(posedge c) begin\n"
        "  unique case (state)\n    s0: o <= 1;\n  endcase\nend"
    )
    pred = ref.replace("unique case", "case")
    assert classify_error(pred, ref) == "structural_mismatch"


def test_classify_operator_takes_precedence_over_identifier():
    ref = "assign c = a | b;"
    pred = "assign d = a & b;"
    assert classify_error(pred, ref) == "operator_mismatch"


def test_classify_literal_differences_are_identifier_level():
    assert (
        classify_error("reg q;\nalways @(posedge c) begin\n  q <= 1;\nend",
                       "reg q;\nalways @(posedge c) begin\n  q <= 0;\nend")
        == "identifier_mismatch"
    )
    assert (
        classify_error("reg q;\nalways @(posedge c) begin\n  q <= 1'b0;\nend",
                       "reg q;\nalways @(posedge c) begin\n  q <= 0;\nend")
        == "identifier_mismatch"
    )


def test_classify_redundant_grouping_is_structural():
    assert classify_error("assign c = (a & b);", "assign c = a & b;") == "structural_mismatch"


def test_classify_rejects_bad_reference():
    with pytest.raises(ValueError):
        classify_error("assign c = a;", "assign c = a")


def test_classify_accepts_call_button_fixture():
    assert classify_error(emit(FIG_CALL_BUTTON), FIG_CALL_BUTTON_RESULT) == "exact"


# Emitter closure: everything the generator can emit parses, checks clean,
# reprints byte-identically, and classifies as exact against itself.


@pytest.mark.parametrize("class_name", CLASSES)
def test_emitter_closure_samples(class_name):
    config = GenConfig()
    for index in range(150):
        meta = sample_meta(class_name, derive_rng(7, f"closure-{class_name}", index), config)
        text = emit(meta)
        assert check(text) == [], f"{class_name}[{index}]: {check(text)[0]}"
        assert print_snippet(parse_snippet(text)) == text
        assert classify_error(text, text) == "exact"
