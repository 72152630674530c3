import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from corpusmix.dtm import (BOOLEAN, COUNT, DOCUMENT, SENTENCE, DocTermMatrix, Vocabulary,
                           build_dtm, dtm_to_csv, lexical_stats, lexical_stats_from_counts,
                           read_dtm, top_terms, trim_dtm, write_dtm)
from corpusmix.errors import DataError, DomainError
from corpusmix.textprep import TokenizedDoc


def docs(*token_lists):
    return [TokenizedDoc(f"d{i}", (tuple(t),) if t else ()) for i, t in enumerate(token_lists)]


def test_build_count_and_boolean():
    d = docs(["a", "b", "a"])
    assert build_dtm(d, COUNT).dense().tolist() == [[2, 1]]
    assert build_dtm(d, BOOLEAN).dense().tolist() == [[1, 1]]
    m = build_dtm(docs(["a"], ["a", "b"]))
    assert m.dense().tolist() == [[1, 0], [1, 1]]
    assert list(m.vocab.terms) == ["a", "b"]


def test_sentence_context_rows():
    d = [TokenizedDoc("x", (("a", "b"), ("b",))), TokenizedDoc("y", (("c",),))]
    m = build_dtm(d, BOOLEAN, SENTENCE)
    assert m.rows == ("x#1", "x#2", "y#1")
    assert m.parents == ("x", "x", "y")
    assert m.dense().tolist() == [[1, 1, 0], [0, 1, 0], [0, 0, 1]]


def test_empty_corpus():
    with pytest.raises(DataError, match="empty corpus"):
        build_dtm(docs([], []))


def test_empty_document_keeps_row():
    m = build_dtm(docs(["a"], []))
    assert m.shape == (2, 1)


def test_trim():
    d = docs(["a"] * 25 + ["b"] * 19)
    assert list(trim_dtm(build_dtm(d), 20).vocab.terms) == ["a"]
    m = build_dtm(docs(["a", "b"], ["b"]))
    same = trim_dtm(m, 1)
    assert same.vocab == m.vocab and (same.matrix != m.matrix).nnz == 0
    with pytest.raises(DomainError):
        trim_dtm(m, 0)


def test_trim_keeps_emptied_rows():
    m = trim_dtm(build_dtm(docs(["a", "a"], ["b"])), 2)
    assert m.rows == ("d0", "d1")
    assert m.dense().tolist() == [[2], [0]]


def test_lexical_stats_examples():
    s = lexical_stats(docs(["a", "a", "b"]))
    assert (s.n_tokens, s.n_types) == (3, 2)
    assert s.ttr == pytest.approx(2 / 3, abs=1e-12)
    assert s.hapax_pct == pytest.approx(0.5, abs=1e-12)
    assert s.guiraud == pytest.approx(2 / math.sqrt(3), abs=1e-12)
    one = lexical_stats(docs(["x"]))
    assert (one.ttr, one.hapax_pct, one.guiraud) == (1.0, 1.0, 1.0)
    assert round(100 * lexical_stats_from_counts(112_026, 4_155, 0).ttr, 1) == 3.7
    with pytest.raises(DataError):
        lexical_stats(docs([]))


def test_report_rows_order():
    names = [name for name, _ in lexical_stats(docs(["a", "b"])).rows()]
    assert names == ["Documents", "Tokens", "Types", "TTR", "Hapax", "Guiraud Index"]


def test_top_terms():
    m = build_dtm(docs(["work"] * 914 + ["year"] * 604 + ["good"] * 579))
    assert top_terms(m, 2) == [("work", 914), ("year", 604)]
    assert len(top_terms(m, 10)) == 3
    assert top_terms(build_dtm(docs(["b"] * 5 + ["a"] * 5)), 2) == [("a", 5), ("b", 5)]


def test_matrix_invariants():
    with pytest.raises(ValueError):
        DocTermMatrix(("r",), Vocabulary(["a"]), sp.csr_matrix(np.array([[2]])), BOOLEAN, DOCUMENT)
    with pytest.raises(ValueError):
        Vocabulary(["a", "a"])
    m = DocTermMatrix(("r",), Vocabulary(["a", "b"]), sp.csr_matrix(np.array([[0, 3]])), COUNT, DOCUMENT)
    assert m.matrix.nnz == 1


def test_triplet_round_trip(tmp_path):
    m = build_dtm(docs(["a", "b", "a"], ["c", "a"]))
    write_dtm(m, tmp_path / "m.csv")
    assert (tmp_path / "m.vocab.txt").read_text() == "a\nb\nc\n"
    assert dtm_to_csv(m) == "row_id,term,value\nd0,a,2\nd0,b,1\nd1,a,1\nd1,c,1\n"
    back = read_dtm(tmp_path / "m.csv")
    assert back.rows == m.rows and back.vocab == m.vocab
    assert (back.matrix != m.matrix).nnz == 0


def test_read_dtm_errors(tmp_path):
    (tmp_path / "m.csv").write_text("row,term,value\n")
    (tmp_path / "m.vocab.txt").write_text("a\n")
    with pytest.raises(DataError, match="header"):
        read_dtm(tmp_path / "m.csv")
    (tmp_path / "m.csv").write_text("row_id,term,value\nr,zz,1\n")
    with pytest.raises(DataError):
        read_dtm(tmp_path / "m.csv")
    with pytest.raises(DataError, match="not found"):
        read_dtm(tmp_path / "nope.csv")


corpora = st.lists(st.lists(st.sampled_from("abcdefg"), max_size=15), min_size=1, max_size=8).filter(
    lambda ds: any(ds))


@settings(max_examples=100, deadline=None)
@given(corpora, st.integers(1, 6), st.integers(1, 6))
def test_dtm_properties(token_lists, c1, c2):
    d = docs(*token_lists)
    counts = build_dtm(d, COUNT)
    assert counts.matrix.sum() == sum(len(t) for t in token_lists)
    boolean = build_dtm(d, BOOLEAN)
    assert np.array_equal(boolean.dense(), (counts.dense() > 0).astype(int))
    lo, hi = sorted((c1, c2))
    v_lo, v_hi = trim_dtm(counts, lo).vocab, trim_dtm(counts, hi).vocab
    assert set(v_hi) <= set(v_lo) <= set(counts.vocab)
    s = lexical_stats(d)
    assert s.guiraud * math.sqrt(s.n_tokens) == pytest.approx(s.n_types, rel=1e-12)
    assert 0 < s.ttr <= 1 and 0 <= s.hapax_pct <= 1
