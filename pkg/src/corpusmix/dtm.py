"""Sparse document-term matrices, frequency trimming and lexical statistics."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DataError, DomainError
from .textprep import TokenizedDoc

COUNT = "count"
BOOLEAN = "boolean"
DOCUMENT = "document"
SENTENCE = "sentence"


class Vocabulary:
    """Ordered set of terms with a term -> column lookup."""

    def __init__(self, terms: Iterable[str] = ()):
        self.terms = list(terms)
        self.index = {t: i for i, t in enumerate(self.terms)}
        if len(self.index) != len(self.terms):
            raise ValueError("vocabulary terms must be distinct")

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.index

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.terms == other.terms

    def __repr__(self):
        return f"Vocabulary({len(self)} terms)"


@dataclass(frozen=True, eq=False)
class DocTermMatrix:
    """Contexts-by-terms matrix.

    ``rows`` holds one id per context; for sentence contexts ``parents``
    gives the owning document id of each row. ``matrix`` is a CSR matrix of
    int64 without stored zeros.
    """

    rows: tuple[str, ...]
    vocab: Vocabulary
    matrix: sp.csr_matrix
    weighting: str = COUNT
    context: str = DOCUMENT
    parents: tuple[str, ...] | None = None

    def __post_init__(self):
        m = sp.csr_matrix(self.matrix, dtype=np.int64)
        m.eliminate_zeros()
        m.sum_duplicates()
        m.sort_indices()
        if m.shape != (len(self.rows), len(self.vocab)):
            raise ValueError(
                f"matrix shape {m.shape} does not match "
                f"{len(self.rows)} rows x {len(self.vocab)} terms"
            )
        if m.nnz and m.data.min() < 0:
            raise ValueError("entries must be nonnegative")
        if self.weighting == BOOLEAN and m.nnz and m.data.max() != 1:
            raise ValueError("boolean matrix entries must all equal 1")
        if self.weighting not in (COUNT, BOOLEAN):
            raise ValueError(f"unknown weighting {self.weighting!r}")
        if self.context not in (DOCUMENT, SENTENCE):
            raise ValueError(f"unknown context {self.context!r}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rows", tuple(self.rows))
        if self.parents is None:
            object.__setattr__(self, "parents", tuple(self.rows))

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def n_tokens(self) -> int:
        return int(self.matrix.sum())

    def term_totals(self) -> np.ndarray:
        """Column sums: corpus frequency, or context frequency for boolean."""
        return np.asarray(self.matrix.sum(axis=0)).ravel()

    def to_boolean(self) -> "DocTermMatrix":
        b = self.matrix.copy()
        b.data[:] = 1
        return DocTermMatrix(self.rows, self.vocab, b, BOOLEAN, self.context, self.parents)

    def triplets(self):
        """Yield (row_id, term, value) in row-major, column order."""
        m = self.matrix
        for r, row_id in enumerate(self.rows):
            for p in range(m.indptr[r], m.indptr[r + 1]):
                yield row_id, self.vocab.terms[m.indices[p]], int(m.data[p])

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def build_dtm(corpus: Sequence[TokenizedDoc], weighting: str = COUNT,
              context: str = DOCUMENT) -> DocTermMatrix:
    """Build a matrix with one row per document (or per sentence).

    The vocabulary lists terms in order of first occurrence.
    """
    if context not in (DOCUMENT, SENTENCE):
        raise ValueError(f"unknown context {context!r}")
    if weighting not in (COUNT, BOOLEAN):
        raise ValueError(f"unknown weighting {weighting!r}")
    if not any(s for doc in corpus for s in doc.sentences):
        raise DataError("empty corpus")

    index: dict[str, int] = {}
    rows, parents = [], []
    indptr, indices, data = [0], [], []

    def add_row(row_id, parent, tokens):
        counts: dict[int, int] = {}
        for t in tokens:
            j = index.setdefault(t, len(index))
            counts[j] = counts.get(j, 0) + 1
        rows.append(row_id)
        parents.append(parent)
        for j in sorted(counts):
            indices.append(j)
            data.append(1 if weighting == BOOLEAN else counts[j])
        indptr.append(len(indices))

    for doc in corpus:
        if context == DOCUMENT:
            add_row(doc.id, doc.id, doc.tokens)
        else:
            for s, sent in enumerate(doc.sentences, 1):
                add_row(f"{doc.id}#{s}", doc.id, sent)

    matrix = sp.csr_matrix(
        (np.array(data, dtype=np.int64), np.array(indices, dtype=np.int64), np.array(indptr)),
        shape=(len(rows), len(index)),
    )
    return DocTermMatrix(tuple(rows), Vocabulary(index), matrix, weighting, context,
                         tuple(parents))


def trim_dtm(dtm: DocTermMatrix, min_total_freq: int) -> DocTermMatrix:
    """Drop terms whose column total is below *min_total_freq*.

    For boolean matrices the column total is the context frequency. Rows that
    lose all their terms are kept as empty rows.
    """
    if min_total_freq < 1:
        raise DomainError("min_total_freq must be >= 1")
    keep = np.flatnonzero(dtm.term_totals() >= min_total_freq)
    vocab = Vocabulary(dtm.vocab.terms[j] for j in keep)
    return DocTermMatrix(dtm.rows, vocab, dtm.matrix[:, keep], dtm.weighting,
                         dtm.context, dtm.parents)


@dataclass(frozen=True)
class LexicalStats:
    n_docs: int
    n_tokens: int
    n_types: int
    ttr: float
    hapax_pct: float
    guiraud: float

    def rows(self):
        """Report lines in the order Documents, Tokens, Types, TTR, Hapax, Guiraud."""
        return [
            ("Documents", str(self.n_docs)),
            ("Tokens", str(self.n_tokens)),
            ("Types", str(self.n_types)),
            ("TTR", f"{100 * self.ttr:.2f}%"),
            ("Hapax", f"{100 * self.hapax_pct:.2f}"),
            ("Guiraud Index", f"{self.guiraud:.2f}"),
        ]


def lexical_stats_from_counts(n_tokens: int, n_types: int, n_hapax: int,
                              n_docs: int = 0) -> LexicalStats:
    if n_tokens <= 0:
        raise DataError("empty corpus")
    return LexicalStats(
        n_docs=n_docs,
        n_tokens=n_tokens,
        n_types=n_types,
        ttr=n_types / n_tokens,
        hapax_pct=n_hapax / n_types,
        guiraud=n_types / math.sqrt(n_tokens),
    )


def lexical_stats(corpus: Sequence[TokenizedDoc]) -> LexicalStats:
    """Token/type statistics of the cleaned, untrimmed token stream.

    Hapax is the share of types seen exactly once; Guiraud is V / sqrt(N).
    """
    freqs = Counter(t for doc in corpus for t in doc.tokens)
    n = sum(freqs.values())
    hapax = sum(1 for c in freqs.values() if c == 1)
    return lexical_stats_from_counts(n, len(freqs), hapax, n_docs=len(corpus))


def top_terms(dtm: DocTermMatrix, n: int) -> list[tuple[str, int]]:
    totals = dtm.term_totals()
    ranked = sorted(zip(dtm.vocab.terms, totals.tolist()), key=lambda tf: (-tf[1], tf[0]))
    return [(t, int(f)) for t, f in ranked[:max(n, 0)]]


# -- triplet CSV export/import -----------------------------------------------

def dtm_to_csv(dtm: DocTermMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row_id", "term", "value"])
    w.writerows(dtm.triplets())
    return buf.getvalue()


def write_dtm(dtm: DocTermMatrix, csv_path, vocab_path=None) -> None:
    """Write the triplet CSV plus a vocabulary sidecar (one term per line)."""
    csv_path = Path(csv_path)
    if vocab_path is None:
        vocab_path = csv_path.with_suffix(".vocab.txt")
    csv_path.write_text(dtm_to_csv(dtm), encoding="utf-8")
    Path(vocab_path).write_text("".join(t + "\n" for t in dtm.vocab), encoding="utf-8")


def read_dtm(csv_path, vocab_path=None, weighting: str = COUNT,
             context: str = DOCUMENT) -> DocTermMatrix:
    """Inverse of :func:`write_dtm`.

    Rows come back in order of first appearance; rows that had no entries
    cannot be represented in the triplet file and are lost.
    """
    csv_path = Path(csv_path)
    if vocab_path is None:
        vocab_path = csv_path.with_suffix(".vocab.txt")
    try:
        terms = Path(vocab_path).read_text(encoding="utf-8").splitlines()
        text = csv_path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise DataError(f"file not found: {exc.filename}") from None
    vocab = Vocabulary(t for t in terms if t)
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header != ["row_id", "term", "value"]:
        raise DataError(f"{csv_path}: expected header row_id,term,value")
    row_index: dict[str, int] = {}
    r_idx, c_idx, vals = [], [], []
    for lineno, rec in enumerate(reader, 2):
        if len(rec) != 3:
            raise DataError(f"{csv_path}: line {lineno}: expected 3 fields")
        row_id, term, value = rec
        if term not in vocab:
            raise DataError(f"{csv_path}: line {lineno}: term {term!r} not in vocabulary")
        try:
            v = int(value)
        except ValueError:
            raise DataError(f"{csv_path}: line {lineno}: non-integer value {value!r}") from None
        r_idx.append(row_index.setdefault(row_id, len(row_index)))
        c_idx.append(vocab.index[term])
        vals.append(v)
    if not row_index:
        raise DataError("empty corpus")
    matrix = sp.coo_matrix((vals, (r_idx, c_idx)), shape=(len(row_index), len(vocab))).tocsr()
    return DocTermMatrix(tuple(row_index), vocab, matrix, weighting, context)
