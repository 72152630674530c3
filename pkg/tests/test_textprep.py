import unicodedata

import pytest
from hypothesis import given, settings, strategies as st

from corpusmix.corpus import Document
from corpusmix.textprep import (PrepConfig, apply_collocations, filter_tokens, lemmatize,
                                load_prep_config, preprocess_document, read_lemma_table,
                                read_stopwords, segment_sentences, tokenize)
from corpusmix.errors import DataError


@pytest.mark.parametrize("text, expected", [
    ("I work. He left!", ["I work.", "He left!"]),
    ("no terminator", ["no terminator"]),
    ("", []),
    ("  What?  Yes.\n\nNo ", ["What?", "Yes.", "No"]),
    ("3.5 kids", ["3.5 kids"]),
])
def test_segment_sentences(text, expected):
    assert segment_sentences(text) == expected


@pytest.mark.parametrize("text, expected", [
    ("Work, 2 kids! see www.x.com", ["work", "kids", "see"]),
    ("ALBANIA--Italy", ["albania", "italy"]),
    ("2022", []),
    ("visit https://example.org/a?b=1 now", ["visit", "now"]),
    ("€100 costs much", ["costs", "much"]),
    ("Città è bella", ["città", "è", "bella"]),
])
def test_tokenize(text, expected):
    assert tokenize(text) == expected


def test_tokenize_keeps_case_when_asked():
    assert tokenize("Rome Milan", lowercase=False) == ["Rome", "Milan"]


@pytest.mark.parametrize("tokens, colls, expected", [
    (["work", "life", "balance"], ["work life balance"], ["work_life_balance"]),
    (["take", "care", "of"], ["take care"], ["take_care", "of"]),
    (["a", "b", "c"], ["x y"], ["a", "b", "c"]),
    (["work", "life", "balance"], ["work life", "work life balance"], ["work_life_balance"]),
    (["a", "b", "b", "c"], ["a b", "b c"], ["a_b", "b_c"]),
])
def test_apply_collocations(tokens, colls, expected):
    assert apply_collocations(tokens, colls) == expected


@given(st.lists(st.sampled_from(["a", "b", "c", "d"]), max_size=30),
       st.lists(st.lists(st.sampled_from(["a", "b", "c"]), min_size=2, max_size=3), max_size=4))
def test_collocations_never_grow(tokens, colls):
    out = apply_collocations(tokens, [" ".join(c) for c in colls])
    assert len(out) <= len(tokens)
    assert "".join(out).replace("_", "") == "".join(tokens)


def test_lemmatize():
    assert lemmatize(["kids", "worked"], {"kids": "kid", "worked": "work"}) == ["kid", "work"]
    assert lemmatize(["albania"], {}) == ["albania"]
    assert lemmatize(["take_care"], {"take": "take", "take_care": "x"}) == ["take_care"]


def test_filter_tokens():
    cfg = PrepConfig(stopwords={"the"})
    assert filter_tokens(["the", "work", "at"], cfg) == ["work"]
    assert filter_tokens(["go"], cfg) == []
    assert filter_tokens(["at_home"], PrepConfig(stopwords={"at"})) == ["at_home"]


def test_preprocess_document():
    cfg = PrepConfig(stopwords={"the", "at"}, lemma_table={"kids": "kid"})
    doc = preprocess_document(Document("x", "The kids play. At 2!"), cfg)
    assert doc.sentences == (("kid", "play"),)
    assert preprocess_document(Document("x", ""), cfg).sentences == ()
    assert preprocess_document(Document("x", "The. At the!"), cfg).sentences == ()


def test_config_normalises_case():
    cfg = PrepConfig(stopwords={"The"}, lemma_table={"Kids": "Kid"}, collocations=["Work Life"])
    assert cfg.stopwords == {"the"}
    assert cfg.lemma_table == {"kids": "kid"}
    assert cfg.collocations == (("work", "life"),)
    with pytest.raises(ValueError):
        PrepConfig(collocations=["single"])
    with pytest.raises(ValueError):
        PrepConfig(min_word_len=0)


def test_resource_files(tmp_path, golden):
    assert "the" in read_stopwords(golden / "stopwords.txt")
    assert "# function words" not in read_stopwords(golden / "stopwords.txt")
    assert read_lemma_table(golden / "lemmas.tsv")["kids"] == "kid"
    bad = tmp_path / "l.tsv"
    bad.write_text("kids\n")
    with pytest.raises(DataError):
        read_lemma_table(bad)
    cfg = load_prep_config(collocations_path=golden / "collocations.txt")
    assert ("social", "security") in cfg.collocations


STOPS = {"the", "and", "with", "our"}
LEMMAS = {"kids": "kid", "worked": "work", "families": "family"}
words = st.sampled_from(["The", "kids", "worked", "and", "go", "families", "Rome", "a",
                         "2019", "x1", "café", "with", "home"])
seps = st.sampled_from([" ", ", ", ". ", "! ", " -- ", "? ", "\n", " www.site.org ", "…", "'"])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(words, seps), max_size=40))
def test_pipeline_output_invariants(parts):
    text = "".join(w + s for w, s in parts)
    cfg = PrepConfig(stopwords=STOPS, lemma_table=LEMMAS)
    doc = preprocess_document(Document("d", text), cfg)
    for sent in doc.sentences:
        assert sent
        for tok in sent:
            assert tok not in cfg.stopwords
            assert len(tok) >= cfg.min_word_len
            assert not tok.isnumeric()
            assert not any(unicodedata.category(ch)[0] in "PSZC" for ch in tok)
    # feeding the output back is a no-op on the token multiset
    again = preprocess_document(Document("d", " ".join(doc.tokens)), cfg)
    assert sorted(again.tokens) == sorted(doc.tokens)
