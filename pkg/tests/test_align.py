from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asrsel.align import EditSummary, divergence, edit_align, wer

from oracles import brute_force_distance

tokens = st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), max_size=8)


def test_identity_alignment():
    s = edit_align(["the", "cat"], ["the", "cat"])
    assert s == EditSummary(substitutions=0, deletions=0, insertions=0,
                            matches=2, distance=0)


def test_single_word_mismatch_is_substitution():
    s = edit_align(["yup"], ["yep"])
    assert s.substitutions == 1 and s.distance == 1
    assert s.deletions == 0 and s.insertions == 0


def test_mixed_alignment_decomposition():
    # expected distance computed by the independent recursive oracle
    ref, hyp = ["a", "b", "c"], ["a", "x", "c", "d"]
    assert brute_force_distance(ref, hyp) == 2
    s = edit_align(ref, hyp)
    assert (s.substitutions, s.insertions, s.matches, s.distance) == (1, 1, 2, 2)
    assert s.deletions == 0


def test_empty_sequences():
    assert edit_align([], []).distance == 0
    s = edit_align(["a", "b"], [])
    assert s.deletions == 2 and s.distance == 2
    s = edit_align([], ["a", "b"])
    assert s.insertions == 2 and s.distance == 2


@pytest.mark.parametrize("ref,hyp,expected", [
    (["word"], ["wrong"], 1.0),
    (["w"] * 10, ["w"] * 9 + ["x"], 0.1),
    (["same", "words"], ["same", "words"], 0.0),
])
def test_wer_spot_values(ref, hyp, expected):
    assert wer(ref, hyp) == expected


def test_wer_can_exceed_one():
    assert wer(["a"], ["x", "y", "z"]) == 3.0


def test_wer_empty_reference_is_an_error():
    with pytest.raises(ValueError, match="undefined WER"):
        wer([], ["a"])


def test_divergence_cases():
    assert divergence(["go", "home"], ["go", "home"]) == 0.0
    assert divergence([], []) == 0.0
    assert divergence([], ["go", "home", "now"]) == 1.0
    assert divergence(["go", "home"], ["go", "home", "now"]) == pytest.approx(1 / 3)


def test_divergence_empty_strong_guard():
    # all insertions relative to an empty strong hypothesis
    assert divergence(["a", "b"], []) == 2.0


@given(a=tokens, b=tokens)
def test_symmetry_swaps_deletions_and_insertions(a, b):
    s_ab = edit_align(a, b)
    s_ba = edit_align(b, a)
    assert s_ab.distance == s_ba.distance
    assert s_ab.substitutions == s_ba.substitutions
    assert s_ab.deletions == s_ba.insertions
    assert s_ab.insertions == s_ba.deletions


@given(a=tokens, b=tokens, c=tokens)
def test_triangle_inequality(a, b, c):
    d = lambda x, y: edit_align(x, y).distance
    assert d(a, c) <= d(a, b) + d(b, c)


@given(a=tokens, b=tokens, t=st.sampled_from(["a", "b", "z"]))
def test_appending_shared_token_never_increases_distance(a, b, t):
    before = edit_align(a, b).distance
    after = edit_align(a + [t], b + [t]).distance
    assert after <= before


@given(a=tokens.filter(lambda s: len(s) >= 1), b=tokens)
def test_wer_zero_iff_equal(a, b):
    assert (wer(a, b) == 0.0) == (a == b)


@given(a=tokens, b=tokens)
def test_counts_partition_both_sequences(a, b):
    s = edit_align(a, b)
    assert s.matches + s.substitutions + s.deletions == len(a)
    assert s.matches + s.substitutions + s.insertions == len(b)


@settings(max_examples=300)
@given(a=tokens, b=tokens)
def test_distance_matches_recursive_oracle(a, b):
    assert edit_align(a, b).distance == brute_force_distance(a, b)
