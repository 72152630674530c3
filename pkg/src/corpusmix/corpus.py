"""Loading plain-text corpora with a metadata table, and metadata stratification."""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import DataError

MISSING = ""


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise DataError("document id must be non-empty")
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    provenance: str = "raw"

    def __post_init__(self):
        docs = tuple(self.documents)
        if not docs:
            raise DataError("empty corpus")
        seen = set()
        for doc in docs:
            if doc.id in seen:
                raise DataError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
        keys = set(docs[0].metadata)
        for doc in docs[1:]:
            if set(doc.metadata) != keys:
                raise DataError(
                    f"metadata keys of {doc.id!r} differ from {docs[0].id!r}"
                )
        object.__setattr__(self, "documents", docs)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    @property
    def variables(self) -> list[str]:
        return list(self.documents[0].metadata)


def read_metadata(path) -> dict[str, dict[str, str]]:
    """Read a delimited metadata table keyed by its ``doc_id`` column.

    The delimiter is sniffed among comma, tab and semicolon; comma is
    assumed when sniffing fails (e.g. a single-column file).
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8-sig")
    except FileNotFoundError:
        raise DataError(f"metadata file not found: {path}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid UTF-8 ({exc.reason})") from None
    try:
        dialect = csv.Sniffer().sniff("\n".join(raw.splitlines()[:5]), delimiters=",\t;")
        delimiter = dialect.delimiter
    except csv.Error:
        delimiter = ","
    reader = csv.DictReader(io.StringIO(raw, newline=""), delimiter=delimiter)
    if reader.fieldnames is None or "doc_id" not in reader.fieldnames:
        raise DataError(f"{path}: metadata table needs a 'doc_id' column")
    variables = [f for f in reader.fieldnames if f != "doc_id"]
    rows: dict[str, dict[str, str]] = {}
    for row in reader:
        doc_id = (row.get("doc_id") or "").strip()
        if not doc_id:
            continue
        if doc_id in rows:
            raise DataError(f"{path}: duplicate doc_id {doc_id!r}")
        rows[doc_id] = {
            v: (row.get(v) or MISSING).strip() for v in variables
        }
    return rows


def load_corpus(corpus_dir, metadata_path=None) -> Corpus:
    """Load every ``<id>.txt`` under *corpus_dir*, joined with metadata rows.

    Documents are ordered by id. A metadata row without a matching text file
    is ignored with a warning; a text file without a metadata row is an error.
    """
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise DataError(f"corpus directory not found: {corpus_dir}")
    files = sorted(corpus_dir.glob("*.txt"), key=lambda p: p.stem)
    if not files:
        raise DataError("empty corpus")
    meta = read_metadata(metadata_path) if metadata_path is not None else None

    docs = []
    for f in files:
        try:
            text = f.read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise DataError(f"{f.name}: not valid UTF-8 ({exc.reason})") from None
        if meta is None:
            record = {}
        elif f.stem in meta:
            record = meta[f.stem]
        else:
            raise DataError(f"no metadata row for document {f.stem!r}")
        docs.append(Document(f.stem, text, record))

    if meta is not None:
        extra = sorted(set(meta) - {d.id for d in docs})
        if extra:
            warnings.warn(
                f"ignoring {len(extra)} metadata row(s) without a text file: "
                + ", ".join(extra),
                stacklevel=2,
            )
    return Corpus(tuple(docs))


def aggregate_by(corpus: Corpus, variable: str) -> Corpus:
    """Merge documents sharing a value of *variable* into one document each.

    Groups come out in lexicographic order of the value; member texts are
    joined with a single newline in input order. Other metadata variables
    survive only where every member agrees.
    """
    if variable not in corpus.variables:
        raise DataError(
            f"unknown metadata variable {variable!r}; available: "
            + ", ".join(corpus.variables)
        )
    empty = [d.id for d in corpus if d.metadata[variable] == MISSING]
    if empty:
        raise DataError(
            f"empty value for {variable!r} in document(s): " + ", ".join(empty)
        )

    groups: dict[str, list[Document]] = {}
    for doc in corpus:
        groups.setdefault(doc.metadata[variable], []).append(doc)

    out = []
    for value in sorted(groups):
        members = groups[value]
        meta = {}
        for key in corpus.variables:
            vals = {m.metadata[key] for m in members}
            meta[key] = vals.pop() if len(vals) == 1 else MISSING
        text = "\n".join(m.text for m in members)
        out.append(Document(value, text, meta))
    return Corpus(tuple(out), provenance=f"aggregated-by:{variable}")
