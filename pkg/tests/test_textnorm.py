from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asrsel.errors import SchemaError
from asrsel.records import write_record_file
from asrsel.textnorm import NormalizationPolicy, Pos, load_tagged, normalize, tag

DEFAULTS = NormalizationPolicy()
EXPAND = NormalizationPolicy(expand_contractions=True)
NUMERALS = NormalizationPolicy(spell_out_numerals=True)


def test_default_policy_case_and_punctuation():
    assert normalize("It's The CUPCAKE!") == ["it's", "the", "cupcake"]


def test_contraction_expansion():
    assert normalize("gonna", EXPAND) == ["going", "to"]
    assert normalize("alright kinda", EXPAND) == ["all", "right", "kind", "of"]


def test_contractions_preserved_by_default():
    assert normalize("gonna") == ["gonna"]
    assert normalize("yup") == ["yup"]  # left distinct from "yep"


def test_numeral_spelling():
    assert normalize("20", NUMERALS) == ["twenty"]
    assert normalize("i have 21 blocks", NUMERALS) == \
        ["i", "have", "twenty", "one", "blocks"]
    assert normalize("20") == ["20"]


def test_unknown_numerals_left_alone():
    assert normalize("987654", NUMERALS) == ["987654"]


def test_annotation_markup_removed():
    assert normalize("[...] what I'm thinking") == ["what", "i'm", "thinking"]
    assert normalize("so loud [overlapping speech] here") == ["so", "loud", "here"]
    keep = NormalizationPolicy(drop_annotation_markup=False,
                               strip_punctuation=False)
    assert normalize("a [b] c", keep) == ["a", "[b]", "c"]


def test_edge_apostrophes_stripped_inner_kept():
    assert normalize("'cause the dogs' toys") == ["cause", "the", "dogs", "toys"]


def test_empty_input():
    assert normalize("") == []
    assert normalize("   ") == []
    assert normalize("[...]") == []


@given(st.text(max_size=60),
       st.booleans(), st.booleans(), st.booleans())
def test_normalize_idempotent(text, expand, spell, markup):
    policy = NormalizationPolicy(expand_contractions=expand,
                                 spell_out_numerals=spell,
                                 drop_annotation_markup=markup)
    once = normalize(text, policy)
    again = normalize(" ".join(once), policy)
    assert once == again


@given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=60))
def test_lowercase_only_preserves_token_count(text):
    policy = NormalizationPolicy(lowercase=True, strip_punctuation=False,
                                 expand_contractions=False,
                                 spell_out_numerals=False,
                                 drop_annotation_markup=False)
    assert len(normalize(text, policy)) == len(text.lower().split())


@pytest.mark.parametrize("token,lemma,pos", [
    ("cats", "cat", Pos.NOUN),
    ("running", "run", Pos.VERB),
    ("the", "the", Pos.OTHER),
    ("went", "go", Pos.VERB),
    ("babies", "baby", Pos.NOUN),
    ("jumped", "jump", Pos.VERB),
    ("quickly", "quickly", Pos.ADV),
    ("boxes", "box", Pos.NOUN),
    ("she", "she", Pos.PRON),
    ("pretty", "pretty", Pos.ADJ),
    ("zq17", "zq17", Pos.OTHER),
])
def test_tagger_examples(token, lemma, pos):
    (tagged,) = tag([token])
    assert tagged.lemma == lemma
    assert tagged.pos == pos


def test_tag_preserves_length_and_surface():
    tokens = ["Cats", "chase", "the", "ball"]
    tagged = tag(tokens)
    assert len(tagged) == len(tokens)
    assert [t.surface for t in tagged] == tokens


@given(st.lists(st.text(alphabet="abcdefgs'", min_size=1, max_size=10), max_size=20))
def test_tag_length_property(tokens):
    assert len(tag(tokens)) == len(tokens)


def test_load_tagged_single_line(tmp_path):
    path = tmp_path / "tags.jsonl"
    write_record_file(path, "tagged", [
        {"utterance_id": "u1", "source": "manual",
         "tokens": [{"surface": "cupcake", "lemma": "cupcake", "pos": "NOUN"}]},
    ])
    result = load_tagged(path)
    assert len(result) == 1
    assert result[("u1", "manual")][0].pos == Pos.NOUN


def test_load_tagged_empty_file(tmp_path):
    path = tmp_path / "tags.jsonl"
    path.write_text("")
    assert load_tagged(path) == {}


def test_load_tagged_schema_violation_names_line(tmp_path):
    path = tmp_path / "tags.jsonl"
    path.write_text('{"schema": "tagged", "version": 1}\n'
                    '{"utterance_id": "u1", "source": "manual"}\n')
    with pytest.raises(SchemaError) as exc:
        load_tagged(path)
    assert ":2:" in str(exc.value)


def test_load_tagged_bad_pos(tmp_path):
    path = tmp_path / "tags.jsonl"
    path.write_text('{"utterance_id": "u1", "source": "manual", '
                    '"tokens": [{"surface": "x", "lemma": "x", "pos": "XYZ"}]}\n')
    with pytest.raises(SchemaError, match="pos"):
        load_tagged(path)
