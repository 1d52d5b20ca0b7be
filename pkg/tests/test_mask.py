"""Mask language: parsing, substitution, and the generation machine.

Expected structures in these tests were derived by hand from the
directive semantics before the implementation existed; they are frozen
here as the unit-level oracle.
"""

import pytest

from gcr.errors import (
    EmptyMark,
    InvalidDirectiveArgument,
    MarkOutOfRange,
    MaskSyntaxError,
    MisplacedDirective,
    NoActiveVariable,
    UnbalancedTest,
    UnboundVariable,
    UnknownDirective,
)
from gcr.mask import (
    Bindings,
    Directive,
    Literal,
    evaluate_mask,
    parse_mask,
    substitute_variables,
)


def run(text: str, values: dict[str, str] | None = None):
    return evaluate_mask(parse_mask(text), Bindings(values or {}))


# --- parsing ------------------------------------------------------------

def test_parse_classifies_lines():
    script = parse_mask("<RPWI:NEWSTEP> Hello\nplain code ;\n<*> a note")
    kinds = [type(line) for line in script.lines]
    assert kinds == [Directive, Literal, Directive]
    assert script.lines[0].kind == "NEWSTEP"
    assert script.lines[0].arg == "Hello"
    assert script.lines[1].text == "plain code ;"
    assert script.lines[2].kind == "NOTE"


def test_parse_empty_mask_is_empty():
    assert parse_mask("").lines == ()


def test_parse_rejects_unknown_directive():
    with pytest.raises(UnknownDirective):
        parse_mask("<RPWI:FROBNICATE> x")
    # directive names are uppercase; anything else is unknown
    with pytest.raises(UnknownDirective):
        parse_mask("<RPWI:newstep> x")


def test_parse_rejects_malformed_directive_line():
    with pytest.raises(MaskSyntaxError):
        parse_mask("<RPWI:NEWSTEP>junk")


def test_parse_balance_checks():
    with pytest.raises(UnbalancedTest):
        parse_mask("<RPWI:TEST> x")
    with pytest.raises(UnbalancedTest):
        parse_mask("<RPWI:ENDTEST>")


def test_parse_value_outside_test_is_misplaced():
    for bad in ("<RPWI:VALUE> 1", "<RPWI:POSITIVE>", "<RPWI:NEGATIVE>"):
        with pytest.raises(MisplacedDirective):
            parse_mask(bad)


def test_parse_mark_register_range():
    parse_mask("<RPWI:PUTMARK> 1")
    parse_mask("<RPWI:PUTMARK> 30")
    for bad in ("<RPWI:PUTMARK> 0", "<RPWI:SETMARK> 31"):
        with pytest.raises(MarkOutOfRange):
            parse_mask(bad)
    with pytest.raises(InvalidDirectiveArgument):
        parse_mask("<RPWI:PUTMARK> one")


def test_parse_argument_shapes():
    with pytest.raises(InvalidDirectiveArgument):
        parse_mask("<RPWI:IGNORELAST> ab")
    with pytest.raises(InvalidDirectiveArgument):
        parse_mask("<RPWI:ENDTEST> extra")  # would be unbalanced anyway
    with pytest.raises(InvalidDirectiveArgument):
        parse_mask("<RPWI:NEWVAR> not a name")


# --- substitution ----------------------------------------------------------

def test_substitution_is_single_pass():
    out, unbound = substitute_variables("see <A> and <B>", Bindings({"A": "<B>", "B": "x"}))
    assert out == "see <B> and x"  # the produced <B> is not rescanned
    assert unbound == []


def test_substitution_reports_unbound_and_keeps_token():
    out, unbound = substitute_variables("<A> + <B>", Bindings({"A": "1"}))
    assert out == "1 + <B>"
    assert unbound == ["B"]


def test_substitution_ignores_non_identifier_angles():
    out, unbound = substitute_variables("#include <stdio.h> <A>", Bindings({"A": "x"}))
    assert out == "#include <stdio.h> x"
    assert unbound == []


# --- the generation machine ---------------------------------------------------

def test_single_step_with_code():
    result = run(
        "<RPWI:NEWSTEP> Print Text (<T_V1>)\ncout << <T_V1> ;",
        {"T_V1": '"hi"'},
    )
    assert len(result.parent_steps) == 1
    step = result.parent_steps[0]
    assert step.label == 'Print Text ("hi")'
    assert step.code_lines == ['cout << "hi" ;']
    assert step.slot == 1
    assert result.anchor_code == []


def test_consecutive_newsteps_are_siblings_in_order():
    result = run("<RPWI:NEWSTEP> A\n<RPWI:NEWSTEP> B\n<RPWI:NEWSTEP> C")
    assert [s.label for s in result.parent_steps] == ["A", "B", "C"]
    assert all(not s.children for s in result.parent_steps)


def test_literal_before_any_newstep_lands_on_anchor():
    result = run("x = 1 ;\n<RPWI:INFORMATION> about the anchor\n<RPWI:NEWSTEP> A\ny ;")
    assert result.anchor_code == ["x = 1 ;"]
    assert result.anchor_info == ["about the anchor"]
    assert result.parent_steps[0].code_lines == ["y ;"]


def test_putmark_setmark_nesting():
    result = run(
        "<RPWI:NEWSTEP> Loop\n"
        "for (;;) {\n"
        "<RPWI:PUTMARK> 1\n"
        "<RPWI:SETMARK> 1\n"
        "<RPWI:NEWSTEP> Start Here\n"
        "<RPWI:NEWSTEP> End\n"
        "}"
    )
    assert len(result.parent_steps) == 1
    loop = result.parent_steps[0]
    assert [c.label for c in loop.children] == ["Start Here", "End"]
    assert loop.children[1].code_lines == ["}"]
    assert result.as_dict()["marks"] == {"1": loop.slot}


def test_mark_on_anchor_targets_anchor_region():
    result = run(
        "x ;\n"
        "<RPWI:PUTMARK> 1\n"
        "<RPWI:NEWSTEP> A\n"
        "<RPWI:SETMARK> 1\n"
        "<RPWI:NEWSTEP> B"
    )
    assert [s.label for s in result.parent_steps] == ["A"]
    assert [s.label for s in result.anchor_steps] == ["B"]
    assert result.as_dict()["marks"] == {"1": "anchor"}


def test_setmark_of_unset_register_fails():
    with pytest.raises(EmptyMark):
        run("<RPWI:SETMARK> 5")


def test_remark_after_setmark_is_a_noop():
    def shape(step):
        return (step.label, step.code_lines, [shape(c) for c in step.children])

    base = (
        "<RPWI:NEWSTEP> A\n"
        "<RPWI:PUTMARK> 1\n"
        "<RPWI:SETMARK> 1\n"
    )
    plain = run(base + "<RPWI:NEWSTEP> B")
    remarked = run(base + "<RPWI:PUTMARK> 2\n<RPWI:SETMARK> 2\n<RPWI:NEWSTEP> B")
    assert shape(plain.parent_steps[0]) == shape(remarked.parent_steps[0])


# --- TEST blocks ---------------------------------------------------------------

WAIT_MASK = (
    "<RPWI:TEST> <T_V1>\n"
    "<RPWI:VALUE> 1\n"
    "<RPWI:POSITIVE>\n"
    "<RPWI:NEWSTEP> Wait (<T_V2> Seconds)\n"
    "sleep(<T_V2>) ;\n"
    "<RPWI:ENDTEST>\n"
    "<RPWI:TEST> <T_V1>\n"
    "<RPWI:VALUE> 1\n"
    "<RPWI:NEGATIVE>\n"
    "<RPWI:NEWSTEP> Wait (Press Any Key)\n"
    "getchar() ;\n"
    "<RPWI:ENDTEST>"
)


def test_test_block_selects_positive_arm():
    result = run(WAIT_MASK, {"T_V1": "1", "T_V2": "3"})
    assert [s.label for s in result.parent_steps] == ["Wait (3 Seconds)"]
    assert result.parent_steps[0].code_lines == ["sleep(3) ;"]


def test_test_block_selects_negative_arm():
    result = run(WAIT_MASK, {"T_V1": "0", "T_V2": "3"})
    assert [s.label for s in result.parent_steps] == ["Wait (Press Any Key)"]
    assert result.parent_steps[0].code_lines == ["getchar() ;"]


def test_test_defaults_compare_against_empty_string():
    hit = run("<RPWI:TEST> <X>\n<RPWI:NEWSTEP> A\n<RPWI:ENDTEST>", {"X": ""})
    miss = run("<RPWI:TEST> <X>\n<RPWI:NEWSTEP> A\n<RPWI:ENDTEST>", {"X": "x"})
    assert len(hit.parent_steps) == 1
    assert len(miss.parent_steps) == 0


def test_test_last_configuration_row_wins():
    mask = (
        "<RPWI:TEST> b\n"
        "<RPWI:VALUE> a\n"
        "<RPWI:VALUE> b\n"
        "<RPWI:POSITIVE>\n"
        "<RPWI:NEGATIVE>\n"
        "<RPWI:NEWSTEP> A\n"
        "<RPWI:ENDTEST>"
    )
    # compares "b" == "b" -> true, last polarity is negative -> skip
    assert run(mask).parent_steps == []


def test_empty_test_block_contributes_nothing():
    result = run("<RPWI:TEST> 1\n<RPWI:VALUE> 1\n<RPWI:ENDTEST>")
    assert result.as_dict() == run("").as_dict()


def test_nested_test_blocks():
    mask = (
        "<RPWI:TEST> <A>\n"
        "<RPWI:VALUE> 1\n"
        "<RPWI:NEWSTEP> Outer\n"
        "<RPWI:TEST> <B>\n"
        "<RPWI:VALUE> 1\n"
        "<RPWI:NEWSTEP> Inner\n"
        "<RPWI:ENDTEST>\n"
        "<RPWI:ENDTEST>"
    )
    both = run(mask, {"A": "1", "B": "1"})
    assert [s.label for s in both.parent_steps] == ["Outer", "Inner"]
    outer_only = run(mask, {"A": "1", "B": "0"})
    assert [s.label for s in outer_only.parent_steps] == ["Outer"]
    neither = run(mask, {"A": "0", "B": "1"})
    assert neither.parent_steps == []


def test_unbound_variable_in_condition_fails_immediately():
    with pytest.raises(UnboundVariable) as exc:
        run("<RPWI:TEST> <MISSING>\n<RPWI:NEWSTEP> A\n<RPWI:ENDTEST>")
    assert exc.value.name == "MISSING"


# --- variables at run time --------------------------------------------------------

def test_newvar_setvarvalue_selectvar():
    result = run(
        "<RPWI:NEWVAR> TMP\n"
        "<RPWI:SETVARVALUE> hello\n"
        "<RPWI:NEWSTEP> Step <TMP>\n"
        "x = <TMP> ;"
    )
    step = result.parent_steps[0]
    assert step.label == "Step hello"
    assert step.code_lines == ["x = hello ;"]


def test_setvarvalue_without_selection_fails():
    with pytest.raises(NoActiveVariable):
        run("<RPWI:SETVARVALUE> x")


def test_selectvar_unknown_name_fails():
    with pytest.raises(UnboundVariable):
        run("<RPWI:SELECTVAR> NOPE")


def test_replacevars_back_fills_earlier_text():
    mask = (
        "<RPWI:NEWSTEP> A <LATE>\n"
        "line <LATE> ;\n"
        "<RPWI:NEWVAR> LATE\n"
        "<RPWI:SETVARVALUE> 42\n"
        "<RPWI:REPLACEVARSWITHVALUES>"
    )
    step = run(mask).parent_steps[0]
    assert step.label == "A 42"
    assert step.code_lines == ["line 42 ;"]


def test_replacevars_is_idempotent():
    mask = (
        "<RPWI:NEWSTEP> A <LATE>\n"
        "<RPWI:NEWVAR> LATE\n"
        "<RPWI:SETVARVALUE> 42\n"
        "<RPWI:REPLACEVARSWITHVALUES>\n"
        "<RPWI:REPLACEVARSWITHVALUES>"
    )
    assert run(mask).parent_steps[0].label == "A 42"


def test_leftover_unbound_token_fails_at_end():
    with pytest.raises(UnboundVariable) as exc:
        run("<RPWI:NEWSTEP> A <LATE>\n<RPWI:NEWVAR> LATE\n<RPWI:SETVARVALUE> 42")
    assert exc.value.name == "LATE"


# --- IGNORELAST ----------------------------------------------------------------------

def test_ignorelast_removes_final_occurrence():
    result = run("<RPWI:NEWSTEP> S\na, b,\nc\n<RPWI:IGNORELAST> ,")
    assert result.parent_steps[0].code_lines == ["a, b", "c"]


def test_ignorelast_without_occurrence_is_noop():
    result = run("<RPWI:NEWSTEP> S\nabc\n<RPWI:IGNORELAST> ,")
    assert result.parent_steps[0].code_lines == ["abc"]


def test_ignorelast_on_anchor_buffer():
    result = run("f(a, b, )\n<RPWI:IGNORELAST> ,\n<RPWI:NEWSTEP> S\nx ;")
    assert result.anchor_code == ["f(a, b )"]


# --- misc ---------------------------------------------------------------------------

def test_note_lines_are_ignored():
    result = run("<*> explanatory note\n<RPWI:NEWSTEP> A\n<*> another")
    assert [s.label for s in result.parent_steps] == ["A"]
    assert result.parent_steps[0].code_lines == []


def test_empty_literal_emits_empty_code_line():
    result = run("<RPWI:NEWSTEP> A\n\nx ;")
    assert result.parent_steps[0].code_lines == ["", "x ;"]


def test_evaluation_does_not_mutate_bindings():
    bindings = Bindings({"X": "1"})
    run("<RPWI:NEWVAR> Y\n<RPWI:SETVARVALUE> 2\n<RPWI:NEWSTEP> A <X>", bindings.values)
    assert bindings.values == {"X": "1"}
    assert bindings.active is None
