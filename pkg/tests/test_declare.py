import itertools

import pytest

from pam.declare import (
    COUNTED_TEMPLATES,
    ConstraintProfile,
    ConstraintTemplate,
    TEMPLATE_IDS,
    compile_template,
    default14,
    evaluate_template,
    oracle_evaluate_template,
)
from pam.errors import ArityMismatch, UnsupportedParameter

T = ConstraintTemplate
ALPHA = ("x", "y", "z")


def both(template, first, second, window):
    dfa = evaluate_template(template, first, second, window)
    oracle = oracle_evaluate_template(template, first, second, window)
    assert dfa == oracle, f"{template} disagrees on {window}"
    return dfa


def w(text):
    # letters map onto activities: a->x, b->y, anything else->z
    return tuple({"a": "x", "b": "y"}.get(ch, "z") for ch in text)


def all_templates():
    out = []
    for tid in TEMPLATE_IDS:
        if tid in COUNTED_TEMPLATES:
            out.extend(T(tid, n) for n in (1, 2, 3))
        else:
            out.append(T(tid))
    return out


def test_template_catalog_covers_21_ids():
    assert len(TEMPLATE_IDS) == 21
    unary = [tid for tid in TEMPLATE_IDS if T(tid, 1 if tid in COUNTED_TEMPLATES else None).arity == 1]
    assert sorted(unary) == ["absence", "exactly", "existence", "init", "last"]


def test_chain_succession_examples():
    t = T("chain_succession")
    assert both(t, "x", "y", w("o")) is True
    assert both(t, "x", "y", w("ab")) is True
    assert both(t, "x", "y", w("abab")) is True
    assert both(t, "x", "y", w("a")) is False
    assert both(t, "x", "y", w("ba")) is False


def test_existence_and_exactly_examples():
    assert both(T("existence", 1), "x", None, w("oa")) is True
    assert both(T("existence", 1), "x", None, w("oo")) is False
    assert both(T("exactly", 2), "x", None, w("oaoa")) is True
    assert both(T("exactly", 2), "x", None, w("aaa")) is False


def test_response_family_examples():
    assert both(T("response"), "x", "y", w("a")) is False
    assert both(T("precedence"), "x", "y", w("ba")) is False
    assert both(T("succession"), "x", "y", w("ab")) is True
    assert both(T("not_succession"), "x", "y", w("ab")) is False
    assert both(T("not_succession"), "x", "y", w("ba")) is True
    assert both(T("absence", 1), "x", None, w("bo")) is True


def test_choice_examples():
    assert both(T("choice"), "x", "y", w("oo")) is False
    assert both(T("choice"), "x", "y", w("oa")) is True


def test_single_window_reference_facts():
    window = ("D", "W", "W", "W")
    assert both(T("chain_response"), "D", "W", window) is True
    assert both(T("init"), "D", None, window) is True
    assert both(T("exactly", 1), "D", None, window) is True
    assert both(T("existence", 3), "W", None, window) is True
    assert both(T("last"), "W", None, window) is True


def assignments(template):
    if template.arity == 1:
        return [(f, None) for f in ALPHA]
    return [(f, s) for f in ALPHA for s in ALPHA if f != s]


def every_window(max_len):
    for length in range(1, max_len + 1):
        yield from itertools.product(ALPHA, repeat=length)


def test_dfa_equals_oracle_exhaustive_small():
    for window in every_window(4):
        for template in all_templates():
            for first, second in assignments(template):
                both(template, first, second, window)


def test_hierarchy_properties():
    chains = [
        ("chain_response", "alternate_response", "response"),
        ("chain_precedence", "alternate_precedence", "precedence"),
    ]
    for window in every_window(5):
        for strong, mid, weak in chains:
            for first, second in assignments(T(strong)):
                s = evaluate_template(T(strong), first, second, window)
                m = evaluate_template(T(mid), first, second, window)
                v = evaluate_template(T(weak), first, second, window)
                assert (not s) or m
                assert (not m) or v
        for first, second in assignments(T("succession")):
            assert evaluate_template(T("succession"), first, second, window) == (
                evaluate_template(T("response"), first, second, window)
                and evaluate_template(T("precedence"), first, second, window)
            )
            assert evaluate_template(T("alternate_succession"), first, second, window) == (
                evaluate_template(T("alternate_response"), first, second, window)
                and evaluate_template(T("alternate_precedence"), first, second, window)
            )
            if evaluate_template(T("chain_succession"), first, second, window):
                assert evaluate_template(T("chain_response"), first, second, window)
                assert evaluate_template(T("chain_precedence"), first, second, window)


def test_count_partition_exhaustive():
    buckets = [T("absence", 1), T("exactly", 1), T("exactly", 2), T("existence", 3)]
    for window in every_window(5):
        for activity in ALPHA:
            holds = [evaluate_template(t, activity, None, window) for t in buckets]
            assert sum(holds) == 1


def test_symmetry_properties():
    symmetric = [T("co_existence"), T("choice"), T("exclusive_choice"), T("not_co_existence")]
    for window in every_window(4):
        for t in symmetric:
            for first, second in assignments(t):
                assert evaluate_template(t, first, second, window) == evaluate_template(
                    t, second, first, window
                )


def test_init_last_imply_presence():
    for window in every_window(4):
        for activity in ALPHA:
            for t in (T("init"), T("last")):
                if evaluate_template(t, activity, None, window):
                    assert not evaluate_template(T("absence", 1), activity, None, window)


def test_unsupported_parameter():
    with pytest.raises(UnsupportedParameter):
        T("existence", 4)
    with pytest.raises(UnsupportedParameter):
        T("exactly", 0)
    with pytest.raises(UnsupportedParameter):
        T("response", 2)
    with pytest.raises(UnsupportedParameter):
        T("no_such_template")


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        evaluate_template(T("init"), "x", "y", w("a"))
    with pytest.raises(ArityMismatch):
        evaluate_template(T("response"), "x", None, w("a"))
    with pytest.raises(ArityMismatch):
        evaluate_template(T("response"), "x", "x", w("a"))


def test_compilation_memoized_and_collapse_safe():
    for template in all_templates():
        dfa = compile_template(template)
        assert dfa is compile_template(template)
        assert dfa.is_idempotent_on(dfa.alphabet.index("o"))


def test_default14_profile():
    profile = default14()
    assert len(profile) == 14
    assert profile.channel_labels == (
        "absence:1", "exactly:1", "exactly:2", "existence:3", "init", "last",
        "precedence", "alternate_precedence", "chain_precedence",
        "response", "alternate_response", "chain_response",
        "not_succession", "co_existence",
    )
    # one BPI-2017-sized window slice: 26 x 26 x 14 cells
    assert 26 * 26 * len(profile) == 9464


def test_profile_file_round_trip():
    profile = default14()
    again = ConstraintProfile.from_lines(profile.to_lines())
    assert again.entries == profile.entries
