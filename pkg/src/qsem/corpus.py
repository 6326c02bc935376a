"""Text ingestion, term-document matrices, rank reduction, persistence.

The index is a sparse term-document matrix: rows are vocabulary terms
(sorted), columns are documents (ingestion order), and each stored cell is
the weight of a term in a document.  Two weightings are supported: raw
counts, and tf-idf with natural term frequency and ``ln(N / df)`` inverse
document frequency.

The on-disk format is a magic line, a SHA-256 checksum of the payload, and
a canonical JSON payload.  JSON floats round-trip IEEE-754 doubles exactly,
so save -> load -> save is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DataFormatError, ChecksumError, NumericError, UnknownTermError, VersionError

__all__ = [
    "WEIGHTINGS",
    "tokenize",
    "Corpus",
    "TermDocumentIndex",
    "ingest",
    "build_index",
    "term_vector",
    "lsa_reduce",
    "save_index",
    "load_index",
]

WEIGHTINGS = ("count", "tfidf")

INDEX_MAGIC = "QSEMIDX1"
INDEX_VERSION = 1


def tokenize(text: str) -> list[str]:
    """Lowercase, split on Unicode whitespace, strip non-alphanumeric edges.

    Tokens that become empty (pure punctuation) are discarded.  No stemming
    and no stopword removal.
    """
    out = []
    for raw in text.lower().split():
        start, end = 0, len(raw)
        while start < end and not raw[start].isalnum():
            start += 1
        while end > start and not raw[end - 1].isalnum():
            end -= 1
        if end > start:
            out.append(raw[start:end])
    return out


@dataclass(frozen=True)
class Corpus:
    """Ordered documents: (doc_id, tokens) pairs with unique ids."""

    docs: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        ids = [doc_id for doc_id, _ in self.docs]
        if len(ids) != len(set(ids)):
            raise DataFormatError("duplicate doc_id in corpus")

    @property
    def doc_ids(self) -> tuple[str, ...]:
        return tuple(doc_id for doc_id, _ in self.docs)

    def __len__(self) -> int:
        return len(self.docs)


def ingest(source: str, fmt: str = "tsv") -> Corpus:
    """Read a corpus from disk.

    ``fmt="tsv"``: each line is ``doc_id<TAB>text`` (a missing tab is an
    error; empty text gives an empty document).  ``fmt="dir"``: every
    regular file in the directory is one document, doc_id = file name,
    read in sorted name order.
    """
    if fmt == "tsv":
        docs = []
        seen = set()
        try:
            with open(source, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise DataFormatError(f"cannot read corpus file: {exc}") from exc
        for lineno, line in enumerate(lines, start=1):
            if "\t" not in line:
                raise DataFormatError(f"line {lineno}: expected 'doc_id<TAB>text'")
            doc_id, text = line.split("\t", 1)
            if doc_id in seen:
                raise DataFormatError(f"line {lineno}: duplicate doc_id {doc_id!r}")
            seen.add(doc_id)
            docs.append((doc_id, tuple(tokenize(text))))
        return Corpus(tuple(docs))
    if fmt == "dir":
        if not os.path.isdir(source):
            raise DataFormatError(f"not a directory: {source}")
        docs = []
        for name in sorted(os.listdir(source)):
            path = os.path.join(source, name)
            if not os.path.isfile(path):
                continue
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise DataFormatError(f"cannot read {path}: {exc}") from exc
            docs.append((name, tuple(tokenize(text))))
        return Corpus(tuple(docs))
    raise DataFormatError(f"unknown corpus format {fmt!r} (expected 'tsv' or 'dir')")


@dataclass(frozen=True)
class TermDocumentIndex:
    """Sparse weighted term-document matrix with sorted vocabulary.

    ``entries`` holds (term_idx, doc_idx, weight) triplets, sorted by
    (term_idx, doc_idx), one per (term, doc) cell where the term occurs.
    """

    vocab: tuple[str, ...]
    doc_ids: tuple[str, ...]
    entries: tuple[tuple[int, int, float], ...]
    weighting: str
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.weighting not in WEIGHTINGS:
            raise DataFormatError(f"unknown weighting {self.weighting!r}")
        if list(self.vocab) != sorted(self.vocab):
            raise DataFormatError("vocabulary must be sorted")
        cells = [(t, d) for t, d, _ in self.entries]
        if len(cells) != len(set(cells)):
            raise DataFormatError("duplicate (term, doc) entry")
        if any(w < 0 for _, _, w in self.entries):
            raise DataFormatError("negative weight in index")

    @property
    def term_index(self) -> dict[str, int]:
        if "term_index" not in self._cache:
            self._cache["term_index"] = {t: i for i, t in enumerate(self.vocab)}
        return self._cache["term_index"]

    def matrix(self) -> np.ndarray:
        """Dense weight matrix, vocab rows by document columns."""
        if "matrix" not in self._cache:
            m = np.zeros((len(self.vocab), len(self.doc_ids)))
            for t, d, w in self.entries:
                m[t, d] = w
            self._cache["matrix"] = m
        return self._cache["matrix"]

    def doc_gram(self) -> np.ndarray:
        """Gram matrix of document columns through the term-vector rows.

        Column d is the document's vector expressed on the document axes:
        the weighted sum of its terms' row vectors.
        """
        if "doc_gram" not in self._cache:
            m = self.matrix()
            self._cache["doc_gram"] = m.T @ m
        return self._cache["doc_gram"]


def build_index(corpus: Corpus, weighting: str = "count", min_df: int = 1
                ) -> TermDocumentIndex:
    """Build the weighted index; terms in fewer than ``min_df`` docs are dropped.

    Count weighting stores raw frequencies.  Tf-idf stores
    ``tf(t, d) * ln(N / df(t))``, which is 0 exactly when a term occurs in
    every document.
    """
    if len(corpus) == 0:
        raise DataFormatError("cannot index an empty corpus")
    if min_df < 1:
        raise NumericError("min_df must be >= 1")
    counts = [Counter(tokens) for _, tokens in corpus.docs]
    df = Counter()
    for c in counts:
        df.update(c.keys())
    vocab = tuple(sorted(t for t, n in df.items() if n >= min_df))
    tindex = {t: i for i, t in enumerate(vocab)}
    n_docs = len(corpus)
    entries = []
    for d, c in enumerate(counts):
        for term, tf in c.items():
            t = tindex.get(term)
            if t is None:
                continue
            if weighting == "count":
                w = float(tf)
            elif weighting == "tfidf":
                w = float(tf) * math.log(n_docs / df[term])
            else:
                raise DataFormatError(f"unknown weighting {weighting!r}")
            entries.append((t, d, w))
    entries.sort(key=lambda e: (e[0], e[1]))
    return TermDocumentIndex(vocab=vocab, doc_ids=corpus.doc_ids,
                             entries=tuple(entries), weighting=weighting)


def term_vector(ix: TermDocumentIndex, term: str) -> np.ndarray:
    """Dense row of a term's weights across all documents."""
    t = ix.term_index.get(term)
    if t is None:
        raise UnknownTermError(f"term not in vocabulary: {term!r}")
    return ix.matrix()[t].copy()


def lsa_reduce(ix: TermDocumentIndex, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Rank-k reduction of the index matrix by truncated SVD.

    Returns ``(term_embeddings, doc_embeddings)`` of shapes (|vocab|, k)
    and (|docs|, k) with the singular values split evenly between the two
    factors, so ``term_embeddings @ doc_embeddings.T`` is the best rank-k
    approximation of the weight matrix in Frobenius norm.
    """
    m = ix.matrix()
    rank = int(np.linalg.matrix_rank(m))
    if not 1 <= k <= rank:
        raise NumericError(f"k={k} out of range [1, rank={rank}]")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    root = np.sqrt(s[:k])
    return u[:, :k] * root, vh[:k].T * root


def _payload_dict(ix: TermDocumentIndex) -> dict:
    return {
        "version": INDEX_VERSION,
        "weighting": ix.weighting,
        "vocab": list(ix.vocab),
        "doc_ids": list(ix.doc_ids),
        "triplets": [[t, d, w] for t, d, w in ix.entries],
    }


def _canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def save_index(ix: TermDocumentIndex, path: str) -> None:
    """Write the index; loading reproduces it exactly (bit-identical weights)."""
    payload = _canonical_json(_payload_dict(ix))
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{INDEX_MAGIC}\n{digest}\n{payload}\n")


def load_index(path: str) -> TermDocumentIndex:
    try:
        with open(path, encoding="utf-8") as fh:
            content = fh.read()
    except OSError as exc:
        raise DataFormatError(f"cannot read index file: {exc}") from exc
    lines = content.split("\n", 2)
    if len(lines) < 3 or lines[0] != INDEX_MAGIC:
        raise VersionError(f"not a {INDEX_MAGIC} index file")
    digest, payload = lines[1], lines[2].rstrip("\n")
    if hashlib.sha256(payload.encode("utf-8")).hexdigest() != digest:
        raise ChecksumError("index payload does not match its checksum")
    try:
        data = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"corrupt index payload: {exc}") from exc
    if data.get("version") != INDEX_VERSION:
        raise VersionError(f"unsupported index version {data.get('version')!r}")
    try:
        return TermDocumentIndex(
            vocab=tuple(data["vocab"]),
            doc_ids=tuple(data["doc_ids"]),
            entries=tuple((int(t), int(d), float(w)) for t, d, w in data["triplets"]),
            weighting=data["weighting"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"corrupt index payload: {exc}") from exc
