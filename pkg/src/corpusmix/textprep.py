"""Text cleaning: sentences, tokens, collocations, lemmas, stopword filtering.

The pipeline order is fixed::

    segment_sentences -> tokenize -> apply_collocations -> lemmatize -> filter_tokens

Collocations are matched on surface forms (before lemmatization) and the
filters run last so that they see lemmas.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Document
from .errors import DataError

_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+")
_URL = re.compile(r"(?:[a-z][a-z0-9+.\-]*://|www\.)\S*", re.IGNORECASE)


@dataclass(frozen=True)
class PrepConfig:
    stopwords: frozenset = frozenset()
    lemma_table: Mapping[str, str] = field(default_factory=dict)
    collocations: tuple = ()
    min_word_len: int = 3
    lowercase: bool = True

    def __post_init__(self):
        if self.min_word_len < 1:
            raise ValueError("min_word_len must be >= 1")
        colls = []
        for expr in self.collocations:
            words = tuple(expr.split()) if isinstance(expr, str) else tuple(expr)
            if len(words) < 2:
                raise ValueError(f"collocation {expr!r} needs at least two words")
            if self.lowercase:
                words = tuple(w.lower() for w in words)
            colls.append(words)
        lemmas = dict(self.lemma_table)
        stops = frozenset(self.stopwords)
        if self.lowercase:
            lemmas = {k.lower(): v.lower() for k, v in lemmas.items()}
            stops = frozenset(s.lower() for s in stops)
        object.__setattr__(self, "collocations", tuple(colls))
        object.__setattr__(self, "lemma_table", lemmas)
        object.__setattr__(self, "stopwords", stops)


@dataclass(frozen=True)
class TokenizedDoc:
    id: str
    sentences: tuple[tuple[str, ...], ...]

    @property
    def tokens(self) -> list[str]:
        return [t for s in self.sentences for t in s]


def segment_sentences(text: str) -> list[str]:
    """Split after '.', '!' or '?' when followed by whitespace."""
    return [s.strip() for s in _SENTENCE_BREAK.split(text) if s.strip()]


def _is_separator(ch: str) -> bool:
    cat = unicodedata.category(ch)
    return cat[0] in "PSZC"


def _is_numeric(token: str) -> bool:
    return all(unicodedata.category(ch)[0] == "N" for ch in token)


def tokenize(sentence: str, lowercase: bool = True) -> list[str]:
    """Split a sentence into word tokens.

    URLs are dropped whole. Punctuation and symbol characters act as
    separators, so ``"ALBANIA--Italy"`` yields two tokens. Purely numeric
    tokens are dropped.
    """
    if lowercase:
        sentence = sentence.lower()
    sentence = _URL.sub(" ", sentence)
    cleaned = "".join(" " if _is_separator(ch) else ch for ch in sentence)
    return [t for t in cleaned.split() if not _is_numeric(t)]


def apply_collocations(tokens: Sequence[str], collocations: Iterable) -> list[str]:
    """Join runs of tokens that spell a collocation into ``a_b_c`` tokens.

    Matching is greedy left to right; at each position the longest matching
    expression wins, then the earliest in *collocations*.
    """
    exprs = [tuple(c.split()) if isinstance(c, str) else tuple(c) for c in collocations]
    if not exprs:
        return list(tokens)
    ranked = sorted(enumerate(exprs), key=lambda ie: (-len(ie[1]), ie[0]))
    by_first: dict[str, list[tuple[str, ...]]] = {}
    for _, expr in ranked:
        by_first.setdefault(expr[0], []).append(expr)

    out = []
    i = 0
    n = len(tokens)
    while i < n:
        for expr in by_first.get(tokens[i], ()):
            m = len(expr)
            if tuple(tokens[i:i + m]) == expr:
                out.append("_".join(expr))
                i += m
                break
        else:
            out.append(tokens[i])
            i += 1
    return out


def lemmatize(tokens: Sequence[str], lemma_table: Mapping[str, str]) -> list[str]:
    return [t if "_" in t else lemma_table.get(t, t) for t in tokens]


def filter_tokens(tokens: Sequence[str], config: PrepConfig) -> list[str]:
    # collocation tokens are exempt from the length rule
    return [
        t for t in tokens
        if t not in config.stopwords and ("_" in t or len(t) >= config.min_word_len)
    ]


def preprocess_sentence(sentence: str, config: PrepConfig) -> list[str]:
    tokens = tokenize(sentence, lowercase=config.lowercase)
    tokens = apply_collocations(tokens, config.collocations)
    tokens = lemmatize(tokens, config.lemma_table)
    return filter_tokens(tokens, config)


def preprocess_document(doc: Document, config: PrepConfig) -> TokenizedDoc:
    sentences = []
    for sent in segment_sentences(doc.text):
        tokens = preprocess_sentence(sent, config)
        if tokens:
            sentences.append(tuple(tokens))
    return TokenizedDoc(doc.id, tuple(sentences))


def preprocess_corpus(corpus: Iterable[Document], config: PrepConfig) -> list[TokenizedDoc]:
    return [preprocess_document(d, config) for d in corpus]


# -- resource files -----------------------------------------------------------

def _read_lines(path) -> list[str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"file not found: {path}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid UTF-8 ({exc.reason})") from None
    lines = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def read_stopwords(path) -> frozenset:
    """One word per line; '#' starts a comment."""
    return frozenset(_read_lines(path))


def read_lemma_table(path) -> dict[str, str]:
    """Two tab-separated columns: token, lemma."""
    table = {}
    for lineno, line in enumerate(_read_lines(path), 1):
        parts = line.split("\t")
        if len(parts) != 2 or len(parts[0].split()) != 1 or len(parts[1].split()) != 1:
            raise DataError(f"{path}: line {lineno}: expected token<TAB>lemma")
        table[parts[0].strip()] = parts[1].strip()
    return table


def read_collocations(path) -> list[str]:
    """One space-separated multi-word expression per line."""
    colls = _read_lines(path)
    for expr in colls:
        if len(expr.split()) < 2:
            raise DataError(f"{path}: collocation {expr!r} needs at least two words")
    return colls


def load_prep_config(stopwords_path=None, lemma_path=None, collocations_path=None,
                     min_word_len=3, lowercase=True) -> PrepConfig:
    return PrepConfig(
        stopwords=read_stopwords(stopwords_path) if stopwords_path else frozenset(),
        lemma_table=read_lemma_table(lemma_path) if lemma_path else {},
        collocations=tuple(read_collocations(collocations_path)) if collocations_path else (),
        min_word_len=min_word_len,
        lowercase=lowercase,
    )
