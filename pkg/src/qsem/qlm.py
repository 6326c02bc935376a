"""Density-matrix language models over a one-hot vocabulary basis.

A document (or query) is a list of observations.  Each observation is a
rank-1 projector: a single term gives a diagonal dyad on that term's axis,
a weighted phrase gives the dyad of the normalized superposition of its
terms' axes, whose off-diagonal entries carry the term dependency that a
bag of unigrams cannot express.

:func:`estimate_rho` fits a density matrix by maximum likelihood with a
multiplicative fixed-point update (rho <- R rho R, renormalized, where R
averages the observation projectors scaled by their current inverse
probabilities).  The update preserves positivity and trace by
construction.  Because the bare update can overshoot, each step falls back
to damped versions of itself until the log-likelihood does not decrease,
so the recorded likelihood trace is non-decreasing and the iteration
settles at the maximum-likelihood state (the likelihood is concave).

Ranking compares models by quantum relative entropy, with an eigenvalue
floor inside the matrix logarithm so smoothed document models always give
finite divergences.  Lower divergence = better match.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix
from .errors import (
    ChecksumError,
    DataFormatError,
    DimensionMismatchError,
    NumericError,
    UnknownTermError,
    VersionError,
)
from .linalg import hermitian_eig, outer

__all__ = [
    "TermProjector",
    "QlmModel",
    "phrase_projector",
    "estimate_rho",
    "align_models",
    "smooth",
    "relative_entropy",
    "save_model",
    "load_model",
]

MODEL_MAGIC = "QSEMQLM1"
MODEL_VERSION = 1

EIGENVALUE_FLOOR = 1e-12


@dataclass(frozen=True)
class TermProjector:
    """Rank-1 observation projector for a term or weighted phrase.

    ``amplitudes`` is the unit coefficient vector over ``terms``; the full
    projector over a vocabulary is the dyad of the embedded vector.
    """

    terms: tuple[str, ...]
    weights: tuple[float, ...]
    amplitudes: tuple[float, ...]

    def projector_matrix(self, vocab: tuple[str, ...]) -> np.ndarray:
        """Dense |vocab| x |vocab| projector (one-hot embedding of the phrase)."""
        index = {t: i for i, t in enumerate(vocab)}
        v = np.zeros(len(vocab))
        for t, amp in zip(self.terms, self.amplitudes):
            if t not in index:
                raise UnknownTermError(f"term not in vocabulary: {t!r}")
            v[index[t]] = amp
        return outer(v, v)


def phrase_projector(term_weights, vocab) -> TermProjector:
    """Observation for a weighted phrase (or single term).

    ``term_weights`` is a sequence of (term, weight) with strictly positive
    weights; all terms must be in ``vocab``.  The amplitude vector is the
    normalized weight vector, so a unigram reduces to a one-hot dyad.
    """
    pairs = [(str(t), float(w)) for t, w in term_weights]
    if not pairs:
        raise NumericError("phrase needs at least one term")
    vocab_set = set(vocab)
    for t, w in pairs:
        if t not in vocab_set:
            raise UnknownTermError(f"term not in vocabulary: {t!r}")
        if w <= 0:
            raise NumericError(f"phrase weight for {t!r} must be positive")
    if len({t for t, _ in pairs}) != len(pairs):
        raise NumericError("phrase repeats a term")
    weights = np.array([w for _, w in pairs])
    amps = weights / np.linalg.norm(weights)
    return TermProjector(
        terms=tuple(t for t, _ in pairs),
        weights=tuple(weights.tolist()),
        amplitudes=tuple(amps.tolist()),
    )


@dataclass(frozen=True)
class QlmModel:
    """Estimated model: density on its observed-term support.

    ``support`` holds the sorted observed terms; ``rho`` is indexed by that
    order.  ``log_likelihood_trace`` records the objective per iteration
    (initial state first) and is non-decreasing up to 1e-9 slack.
    """

    support: tuple[str, ...]
    rho: DensityMatrix
    log_likelihood_trace: tuple[float, ...]


def _support_vectors(observations) -> tuple[tuple[str, ...], list[np.ndarray]]:
    support = tuple(sorted({t for obs in observations for t in obs.terms}))
    index = {t: i for i, t in enumerate(support)}
    vectors = []
    for obs in observations:
        v = np.zeros(len(support))
        for t, amp in zip(obs.terms, obs.amplitudes):
            v[index[t]] = amp
        vectors.append(v)
    return support, vectors


def _log_likelihood(rho: np.ndarray, vectors: list[np.ndarray]) -> float:
    total = 0.0
    for v in vectors:
        p = float(v @ rho @ v)
        if p <= 0.0:
            return float("-inf")
        total += float(np.log(p))
    return total


def estimate_rho(observations, max_iters: int = 500, tol: float = 1e-9
                 ) -> QlmModel:
    """Maximum-likelihood density for a list of observation projectors.

    Starts from the maximally mixed state on the observed-term support (so
    every observation has positive probability), then iterates the
    renormalized ``R rho R`` update with backtracking damping whenever the
    bare step would lower the objective.  Stops when the relative
    likelihood gain falls below ``tol`` or after ``max_iters`` updates.

    With unigram observations only the result is diagonal and matches the
    empirical term frequencies (the multinomial MLE).
    """
    observations = list(observations)
    if not observations:
        raise NumericError("estimate_rho needs at least one observation")
    if max_iters < 1:
        raise NumericError("max_iters must be >= 1")
    support, vectors = _support_vectors(observations)
    dim = len(support)
    n_obs = len(vectors)
    rho = np.eye(dim) / dim
    for v in vectors:
        assert float(v @ rho @ v) > 0.0, "observation invisible to initial state"
    trace = [_log_likelihood(rho, vectors)]
    for _ in range(max_iters):
        probs = [float(v @ rho @ v) for v in vectors]
        r = np.zeros((dim, dim))
        for v, p in zip(vectors, probs):
            r += np.outer(v, v) / p
        r /= n_obs
        current = trace[-1]
        step = 1.0
        accepted = None
        while True:
            op = r if step == 1.0 else (np.eye(dim) + step * r) / (1.0 + step)
            candidate = op @ rho @ op
            candidate /= np.trace(candidate)
            candidate = (candidate + candidate.T) / 2.0
            value = _log_likelihood(candidate, vectors)
            if value > current:
                accepted = (candidate, value)
                break
            step /= 2.0
            if step < 1e-6:
                break
        if accepted is None:
            break  # no uphill step left: already at the optimum
        rho, value = accepted
        trace.append(value)
        gain = value - current
        if gain <= tol * max(1.0, abs(current)):
            break
    return QlmModel(
        support=support,
        rho=DensityMatrix(rho),
        log_likelihood_trace=tuple(trace),
    )


def embed_density(model: QlmModel, support: tuple[str, ...]) -> DensityMatrix:
    """Embed a model's density into a larger support (zeros elsewhere)."""
    index = {t: i for i, t in enumerate(support)}
    missing = [t for t in model.support if t not in index]
    if missing:
        raise DimensionMismatchError(f"target support lacks terms: {missing}")
    rows = np.array([index[t] for t in model.support])
    big = np.zeros((len(support), len(support)))
    big[np.ix_(rows, rows)] = model.rho.matrix
    return DensityMatrix(big)


def align_models(models) -> tuple[tuple[str, ...], list[DensityMatrix]]:
    """Embed several models into the sorted union of their supports."""
    models = list(models)
    if not models:
        raise NumericError("align_models needs at least one model")
    union = tuple(sorted({t for m in models for t in m.support}))
    return union, [embed_density(m, union) for m in models]


def smooth(rho_doc: DensityMatrix, rho_collection: DensityMatrix,
           lam: float) -> DensityMatrix:
    """Mixture ``(1 - lam) * rho_doc + lam * rho_collection``."""
    if not 0.0 <= lam <= 1.0:
        raise NumericError("smoothing weight must lie in [0, 1]")
    if rho_doc.dim != rho_collection.dim:
        raise DimensionMismatchError("smoothing requires equal dimensions")
    return DensityMatrix((1.0 - lam) * rho_doc.matrix + lam * rho_collection.matrix)


def relative_entropy(rho_q: DensityMatrix, rho_d: DensityMatrix,
                     floor: float = EIGENVALUE_FLOOR) -> float:
    """Quantum relative entropy ``tr(rho_q (log rho_q - log rho_d))``.

    Computed by eigendecomposition; eigenvalues are floored at ``floor``
    inside the logarithms (with 0 log 0 = 0 on the query side), so the
    result is finite for smoothed document models.  It is zero iff the
    states coincide and non-negative otherwise.
    """
    if rho_q.dim != rho_d.dim:
        raise DimensionMismatchError("relative entropy requires equal dimensions")
    if floor <= 0:
        raise NumericError("floor must be positive")
    q_vals, q_vecs = rho_q.eigensystem()
    entropy = 0.0
    for lam in q_vals:
        if lam > 0.0:
            entropy += float(lam) * np.log(max(float(lam), floor))
    d_vals, d_vecs = rho_d.eigensystem()
    log_d = d_vecs @ np.diag(np.log(np.maximum(d_vals, floor))) @ np.conjugate(d_vecs).T
    cross = float(np.trace(rho_q.matrix @ log_d).real)
    return entropy - cross


def _model_payload(model: QlmModel) -> dict:
    return {
        "version": MODEL_VERSION,
        "support": list(model.support),
        "rho": [[float(x) for x in row] for row in model.rho.matrix],
        "log_likelihood": list(model.log_likelihood_trace),
    }


def save_model(model: QlmModel, path: str) -> None:
    """Persist a model; floats round-trip exactly through the JSON payload."""
    payload = json.dumps(_model_payload(model), sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{MODEL_MAGIC}\n{digest}\n{payload}\n")


def load_model(path: str) -> QlmModel:
    try:
        with open(path, encoding="utf-8") as fh:
            content = fh.read()
    except OSError as exc:
        raise DataFormatError(f"cannot read model file: {exc}") from exc
    lines = content.split("\n", 2)
    if len(lines) < 3 or lines[0] != MODEL_MAGIC:
        raise VersionError(f"not a {MODEL_MAGIC} model file")
    digest, payload = lines[1], lines[2].rstrip("\n")
    if hashlib.sha256(payload.encode("utf-8")).hexdigest() != digest:
        raise ChecksumError("model payload does not match its checksum")
    try:
        data = json.loads(payload)
        if data.get("version") != MODEL_VERSION:
            raise VersionError(f"unsupported model version {data.get('version')!r}")
        return QlmModel(
            support=tuple(data["support"]),
            rho=DensityMatrix(np.array(data["rho"], dtype=float)),
            log_likelihood_trace=tuple(float(x) for x in data["log_likelihood"]),
        )
    except VersionError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"corrupt model payload: {exc}") from exc
