from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asrsel.lexical import (FrequencyTable, Scope, correlation_report,
                            correlation_table, count_lemmas, log_counts,
                            pearson, scatter_data)
from asrsel.textnorm import normalize, tag


def _pair(manual_text, auto_text):
    return tag(normalize(manual_text)), tag(normalize(auto_text))


def test_count_identical_transcripts():
    table = count_lemmas([_pair("the cat", "the cat")])
    assert table.entries[("cat", "NOUN")] == (1, 1)
    assert table.entries[("the", "OTHER")] == (1, 1)


def test_count_zero_for_absent_side():
    table = count_lemmas([_pair("cat", "")])
    assert table.entries[("cat", "NOUN")] == (1, 0)


def test_counts_lemmatize_inflections_together():
    table = count_lemmas([_pair("cats cat", "cat")])
    assert table.entries[("cat", "NOUN")] == (2, 1)


def test_counting_is_additive_over_utterances():
    together = count_lemmas([_pair("the cat", "the cat"),
                             _pair("the dog", "a dog")])
    one = count_lemmas([_pair("the cat", "the cat")])
    two = count_lemmas([_pair("the dog", "a dog")])
    for key in together.entries:
        m1, a1 = one.entries.get(key, (0, 0))
        m2, a2 = two.entries.get(key, (0, 0))
        assert together.entries[key] == (m1 + m2, a1 + a2)


@pytest.mark.parametrize("count,expected", [(0, 0.0), (9, 1.0), (99, 2.0)])
def test_log_counts_plus_one(count, expected):
    table = FrequencyTable(entries={("w", "NOUN"): (count, count)},
                           scope=Scope.ALL)
    _keys, manual, auto = log_counts(table)
    assert manual == [expected]
    assert auto == [expected]


def test_pearson_perfect_correlations():
    assert pearson([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == pytest.approx(1.0)
    assert pearson([1.0, 2.0, 3.0], [-1.0, -2.0, -3.0]) == pytest.approx(-1.0)


def test_pearson_closed_form_value():
    assert pearson([1.0, 2.0, 3.0], [2.0, 4.0, 7.0]) == pytest.approx(0.9934, abs=1e-3)


def test_pearson_constant_vector_undefined():
    assert pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]) is None


def test_pearson_length_checks():
    with pytest.raises(ValueError):
        pearson([1.0], [1.0])
    with pytest.raises(ValueError):
        pearson([1.0, 2.0], [1.0])


@settings(max_examples=200)
@given(st.lists(st.floats(min_value=-100, max_value=100), min_size=3, max_size=20),
       st.floats(min_value=0.01, max_value=50),
       st.floats(min_value=-100, max_value=100))
def test_pearson_affine_invariance(y, a, b):
    x = list(range(len(y)))
    r1 = pearson(x, y)
    r2 = pearson([a * v + b for v in x], y)
    if r1 is None:
        assert r2 is None
    else:
        assert r2 == pytest.approx(r1, abs=1e-9)


def _fixture_table():
    pairs = [
        _pair("the cat sat", "the cat sat"),
        _pair("a big dog ran", "a big dog ran"),
        _pair("cats like milk", "cats like milk"),
        _pair("she ran fast", "she ran fast"),
        _pair("the dog ate", "the dog ate quickly"),
        _pair("the the the cat", "the the cat cat"),
    ]
    return count_lemmas(pairs)


def test_correlation_report_matches_plain_pearson():
    table = _fixture_table()
    row = correlation_report(table, None, 0)
    by_lemma: dict[str, list[int]] = {}
    for (lemma, _pos), (m, a) in table.entries.items():
        by_lemma.setdefault(lemma, [0, 0])
        by_lemma[lemma][0] += m
        by_lemma[lemma][1] += a
    x = [math.log10(m + 1) for m, _ in by_lemma.values()]
    y = [math.log10(a + 1) for _, a in by_lemma.values()]
    assert row.r == pytest.approx(pearson(x, y))
    assert row.n_entries == len(by_lemma)


def test_correlation_near_one_for_identical_transcripts():
    pairs = [_pair(t, t) for t in
             ["the cat sat", "a dog ran", "she likes milk", "big red ball",
              "the the dog"]]
    row = correlation_report(count_lemmas(pairs), None, 0)
    assert row.r == pytest.approx(1.0)


def test_pos_filter_reduces_entries():
    table = _fixture_table()
    all_row = correlation_report(table, None, 0)
    noun_row = correlation_report(table, {"NOUN"}, 0)
    assert noun_row.n_entries < all_row.n_entries


def test_raising_floor_never_adds_entries():
    table = _fixture_table()
    last = None
    for floor in (0, 1, 2, 3, 5):
        row = correlation_report(table, None, floor)
        if last is not None:
            assert row.n_entries <= last
        last = row.n_entries


def test_undefined_marker_for_tiny_tables():
    table = FrequencyTable(entries={("w", "NOUN"): (3, 3)}, scope=Scope.ALL)
    row = correlation_report(table, None, 0)
    assert row.r is None
    assert row.n_entries == 1


def test_report_row_order():
    rows = correlation_table(_fixture_table())
    assert [r.category for r in rows] == ["all", "NOUN", "VERB", "ADJ",
                                          "ADV", "PRON"]


def test_scatter_two_points_interpolating_line():
    table = FrequencyTable(entries={("a", "NOUN"): (0, 0), ("b", "NOUN"): (9, 99)},
                           scope=Scope.ALL)
    sd = scatter_data(table, min_auto_count=0)
    line = sd.line_all
    assert line is not None
    # exact interpolation through (0,0) and (1,2)
    assert line.intercept == pytest.approx(0.0)
    assert line.slope == pytest.approx(2.0)


def test_scatter_empty_filtered_set_omits_second_line():
    table = FrequencyTable(entries={("a", "NOUN"): (1, 1), ("b", "NOUN"): (2, 2)},
                           scope=Scope.ALL)
    sd = scatter_data(table, min_auto_count=50)
    assert sd.line_all is not None
    assert sd.line_filtered is None


def test_scatter_label_thinning():
    entries = {(f"w{i}", "NOUN"): (i, i) for i in range(1, 30)}
    sd = scatter_data(FrequencyTable(entries=entries, scope=Scope.ALL),
                      min_auto_count=0, max_labels=5)
    assert sum(p.labeled for p in sd.points) == 5
    labeled = {p.lemma for p in sd.points if p.labeled}
    assert labeled == {"w29", "w28", "w27", "w26", "w25"}  # highest combined counts
