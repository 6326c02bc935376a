"""Cosine ranking with orthogonal negation, plus MAP evaluation.

Queries live in document space: the query vector is the normalized sum of
the positive terms' row vectors, and negation subtracts the projection
onto the span of the negated terms' row vectors, leaving the query
orthogonal to every negated term.  Because negated term vectors are
distributional, this removes a region of meaning, not just one token.

Documents are scored in the same space: document d's vector is its weight
column pushed through the term rows (``matrix().T @ column_d``), so a
document containing only negated terms lies inside the negated span and
scores zero.  Ties are broken by doc_id so rankings are reproducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .corpus import TermDocumentIndex, term_vector, tokenize
from .errors import DataFormatError, NumericError, ParseError, UnknownTermError
from .qlogic import negate_vector

__all__ = [
    "QueryAST",
    "cosine",
    "parse_query",
    "search",
    "average_precision",
    "map_eval",
    "format_run",
    "read_run",
    "read_qrels",
]

NOT_KEYWORD = "NOT"


@dataclass(frozen=True)
class QueryAST:
    """Parsed query: positive terms and (possibly empty) negated terms."""

    positives: tuple[str, ...]
    negatives: tuple[str, ...]

    def __post_init__(self):
        if not self.positives:
            raise ParseError("query has no positive terms")
        overlap = set(self.positives) & set(self.negatives)
        if overlap:
            raise ParseError(f"terms both asserted and negated: {sorted(overlap)}")


def cosine(u, v) -> float:
    """Cosine similarity of two nonzero real vectors, in [-1, 1]."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise NumericError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise NumericError("cosine is undefined for a zero vector")
    return float(np.dot(u, v) / (nu * nv))


def parse_query(q: str) -> QueryAST:
    """Parse ``term+ ("NOT" term+)?`` with whitespace-separated terms.

    Terms are case-folded through the corpus tokenizer; the keyword NOT is
    case-sensitive (a lowercase "not" is an ordinary term).
    """
    if not q or not q.split():
        raise ParseError("empty query")
    raw = q.split()
    if raw.count(NOT_KEYWORD) > 1:
        raise ParseError("at most one NOT clause is allowed")
    if NOT_KEYWORD in raw:
        cut = raw.index(NOT_KEYWORD)
        pos_raw, neg_raw = raw[:cut], raw[cut + 1:]
        if not neg_raw:
            raise ParseError("NOT clause has no terms")
    else:
        pos_raw, neg_raw = raw, []
    positives = tuple(t for tok in pos_raw for t in tokenize(tok))
    negatives = tuple(t for tok in neg_raw for t in tokenize(tok))
    if not positives:
        raise ParseError("query has no positive terms")
    return QueryAST(positives=positives, negatives=negatives)


def query_vector(ix: TermDocumentIndex, ast: QueryAST) -> np.ndarray:
    """Document-space query vector: normalized positive sum, then negation.

    Unknown positive terms are errors; unknown negative terms are skipped
    with a warning (negation is best-effort cleanup).
    """
    pos_vecs = [term_vector(ix, t) for t in ast.positives]
    total = np.sum(pos_vecs, axis=0)
    n = float(np.linalg.norm(total))
    if n == 0.0:
        raise NumericError("query vector is zero (all positive weights vanish)")
    q = total / n
    neg_vecs = []
    for t in ast.negatives:
        try:
            neg_vecs.append(term_vector(ix, t))
        except UnknownTermError:
            warnings.warn(f"skipping unknown negated term {t!r}", stacklevel=2)
    if neg_vecs:
        q = negate_vector(q, neg_vecs)
    return q


def search(ix: TermDocumentIndex, ast: QueryAST, top_k: int
           ) -> list[tuple[str, float]]:
    """Rank documents by cosine with the (negated) query vector.

    Returns at most ``top_k`` (doc_id, score) pairs, scores non-increasing,
    ties broken by doc_id.  Documents with a zero vector score 0, as does
    everything when negation annihilates the query.
    """
    if top_k < 1:
        raise NumericError("top_k must be >= 1")
    q = query_vector(ix, ast)
    gram = ix.doc_gram()
    doc_norms = np.linalg.norm(gram, axis=0)
    qn = float(np.linalg.norm(q))
    scores = np.zeros(len(ix.doc_ids))
    if qn > 0.0:
        numer = gram.T @ q
        nonzero = doc_norms > 0.0
        scores[nonzero] = numer[nonzero] / (doc_norms[nonzero] * qn)
    order = sorted(range(len(scores)), key=lambda d: (-scores[d], ix.doc_ids[d]))
    return [(ix.doc_ids[d], float(scores[d])) for d in order[:top_k]]


def average_precision(ranking: list[tuple[str, float]], relevant: set[str]) -> float:
    """Average precision of one ranked list against its relevant set."""
    if not relevant:
        raise NumericError("relevant set must be nonempty")
    hits = 0
    total = 0.0
    for rank, (doc_id, _) in enumerate(ranking, start=1):
        if doc_id in relevant:
            hits += 1
            total += hits / rank
    return total / len(relevant)


def map_eval(runs: list[tuple[list[tuple[str, float]], set[str]]]) -> float:
    """Mean average precision over (ranking, relevant_set) pairs."""
    if not runs:
        raise NumericError("map_eval needs at least one run")
    return sum(average_precision(r, rel) for r, rel in runs) / len(runs)


def format_run(query_id: str, ranking: list[tuple[str, float]]) -> str:
    """Run lines ``query_id<TAB>rank<TAB>doc_id<TAB>score``, newline-terminated."""
    return "".join(
        f"{query_id}\t{rank}\t{doc_id}\t{score!r}\n"
        for rank, (doc_id, score) in enumerate(ranking, start=1))


def read_run(path: str) -> dict[str, list[tuple[str, float]]]:
    """Read a run file back into per-query rankings (rank order preserved)."""
    runs: dict[str, list[tuple[int, str, float]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh.read().splitlines(), start=1):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise DataFormatError(f"run line {lineno}: expected 4 tab-separated fields")
            qid, rank, doc_id, score = parts
            runs.setdefault(qid, []).append((int(rank), doc_id, float(score)))
    return {qid: [(doc, sc) for _, doc, sc in sorted(rows)]
            for qid, rows in runs.items()}


def read_qrels(path: str) -> dict[str, set[str]]:
    """Read relevance judgments: lines ``query_id<TAB>doc_id``."""
    qrels: dict[str, set[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh.read().splitlines(), start=1):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataFormatError(f"qrels line {lineno}: expected 'query_id<TAB>doc_id'")
            qrels.setdefault(parts[0], set()).add(parts[1])
    return qrels
