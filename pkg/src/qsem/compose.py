"""Tensor-product composition, separability, and vector binding.

An order-2 tensor over U (x) V is stored as an (dim U, dim V) array whose
(i, j) entry multiplies the basis dyad e_i e_j.  ``tensor(u, v)`` is the
coordinate product u_i * v_j: bilinear, non-commutative, and of matrix
rank 1.  Generic elements of the product space are sums of such dyads and
cannot be factored back into a single pair; :func:`is_separable` detects
this through the ratio of the two largest singular values.

Relational composition follows two routes:

* transitive-verb tensors: the sum of subject (x) object dyads over a
  verb's example pairs, contracted with argument vectors by elementwise
  product to build sentence tensors;
* vector binding, which folds a pair back into the base space either by
  circular convolution (approximately invertible via circular correlation)
  or, for complex unit-modulus coordinates, by coordinatewise phase
  addition (exactly invertible, one multiply per coordinate, no
  transform).

:class:`RelationStore` superposes bound relation/filler pairs per subject
concept.  With two or more independent facts the stored vector is not a
single bound pair any more, yet unbinding with a relation vector still
recovers its filler as the nearest neighbor among the store's elemental
vectors.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import (
    DegenerateTensorError,
    DimensionMismatchError,
    NumericError,
    UnknownTermError,
)
from .linalg import as_matrix, as_vector

__all__ = [
    "SEPARABILITY_TOL",
    "BindingMode",
    "tensor",
    "tensor_inner",
    "is_separable",
    "verb_tensor",
    "compose_sentence",
    "sentence_similarity",
    "bind",
    "unbind",
    "unitary_vector",
    "phase_vector",
    "RelationStore",
    "encode_facts",
]

#: Default threshold on sigma_2 / sigma_1 below which a tensor counts as rank 1.
SEPARABILITY_TOL = 1e-8

UNIT_MODULUS_TOL = 1e-9


class BindingMode(enum.Enum):
    CIRCULAR = "conv"
    PHASE = "phase"


def tensor(u, v) -> np.ndarray:
    """Tensor product of coordinate vectors: entries ``u_i * v_j``."""
    u = as_vector(u)
    v = as_vector(v)
    return np.multiply.outer(u, v)


def tensor_inner(s, t):
    """Frobenius inner product, conjugate-linear in the first tensor.

    Factors: ``tensor_inner(tensor(a, b), tensor(c, d))`` equals
    ``inner(a, c) * inner(b, d)``.
    """
    s = as_matrix(s)
    t = as_matrix(t)
    if s.shape != t.shape:
        raise DimensionMismatchError(f"shape mismatch: {s.shape} vs {t.shape}")
    return np.vdot(s, t).item()


def is_separable(t, tol: float = SEPARABILITY_TOL):
    """Decide whether a tensor factors as a single product ``tensor(u, v)``.

    Separable means the second singular value is at most ``tol`` times the
    first.  Returns ``(True, (u, v))`` with factors reconstructing the
    tensor, or ``(False, None)``.  The all-zero tensor is rejected.
    """
    t = as_matrix(t)
    if not np.any(t):
        raise DegenerateTensorError("zero tensor has no separability verdict")
    u, s, vh = np.linalg.svd(t, full_matrices=False)
    if len(s) > 1 and s[1] > tol * s[0]:
        return False, None
    scale = np.sqrt(s[0])
    # t ~= s0 * u0 conj(v0)^T, so the second factor is scale * conj(v0).
    return True, (scale * u[:, 0], scale * np.conjugate(vh[0, :]))


def verb_tensor(pairs, noun_vectors) -> np.ndarray:
    """Relational tensor: sum of subject (x) object dyads over example pairs.

    ``pairs`` is a sequence of (subject, object) names resolved through the
    ``noun_vectors`` mapping.
    """
    pairs = list(pairs)
    if not pairs:
        raise NumericError("verb_tensor needs at least one (subject, object) pair")
    total = None
    for subj, obj in pairs:
        if subj not in noun_vectors:
            raise UnknownTermError(f"unknown noun: {subj!r}")
        if obj not in noun_vectors:
            raise UnknownTermError(f"unknown noun: {obj!r}")
        dyad = tensor(noun_vectors[subj], noun_vectors[obj])
        total = dyad if total is None else total + dyad
    return total


def compose_sentence(subj, verb, obj) -> np.ndarray:
    """Sentence tensor: ``tensor(subj, obj)`` elementwise-multiplied by the verb.

    Sensitive to argument order whenever the verb tensor is not symmetric.
    """
    subj = as_vector(subj)
    obj = as_vector(obj)
    verb = as_matrix(verb)
    if verb.shape != (subj.shape[0], obj.shape[0]):
        raise DimensionMismatchError(
            f"verb shape {verb.shape} does not match arguments "
            f"({subj.shape[0]}, {obj.shape[0]})")
    return tensor(subj, obj) * verb


def sentence_similarity(s, t) -> float:
    """Normalized tensor inner product; 1 for identical nonzero tensors."""
    s = as_matrix(s)
    t = as_matrix(t)
    ns = np.linalg.norm(s)
    nt = np.linalg.norm(t)
    if ns == 0.0 or nt == 0.0:
        raise DegenerateTensorError("similarity undefined for a zero tensor")
    value = np.vdot(s, t) / (ns * nt)
    return float(value.real) if np.iscomplexobj(value) else float(value)


def _as_binding_operand(v) -> np.ndarray:
    arr = np.asarray(v)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatchError("binding operates on nonempty 1-D vectors")
    return arr


def _require_unit_modulus(v: np.ndarray) -> None:
    mags = np.abs(v)
    if float(np.max(np.abs(mags - 1.0))) > UNIT_MODULUS_TOL:
        raise NumericError("phase binding requires unit-modulus coordinates")


_CONV_INDEX_CACHE: dict[int, np.ndarray] = {}


def _convolve_direct(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # c_k = sum_j a_j * b_{(k - j) mod n}, as an explicit index table.
    n = a.shape[0]
    idx = _CONV_INDEX_CACHE.get(n)
    if idx is None:
        idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
        if len(_CONV_INDEX_CACHE) < 8:
            _CONV_INDEX_CACHE[n] = idx
    return b[idx] @ a


def _convolve_fft(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    if not (np.iscomplexobj(a) or np.iscomplexobj(b)):
        return out.real
    return out


def _conjugate_involution(a: np.ndarray) -> np.ndarray:
    # Index map k -> (-k) mod n, conjugated: the correlation kernel.
    flipped = np.concatenate([a[:1], a[1:][::-1]])
    return np.conjugate(flipped)


def bind(a, b, mode: BindingMode = BindingMode.CIRCULAR, fast: bool = False
         ) -> np.ndarray:
    """Bind two vectors of equal dimension.

    Circular mode computes the circular convolution directly (O(n^2); with
    ``fast=True`` a transform-based path is used instead, agreeing with the
    direct form to 1e-10).  Phase mode multiplies coordinatewise, which
    adds phase angles of unit-modulus complex coordinates in a single pass.
    """
    mode = BindingMode(mode)
    a = _as_binding_operand(a)
    b = _as_binding_operand(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if mode is BindingMode.PHASE:
        _require_unit_modulus(a)
        _require_unit_modulus(b)
        return a * b
    return _convolve_fft(a, b) if fast else _convolve_direct(a, b)


def unbind(c, a, mode: BindingMode = BindingMode.CIRCULAR, fast: bool = False
           ) -> np.ndarray:
    """Recover the partner bound with ``a`` from ``c``.

    Circular mode is the circular correlation of ``c`` with ``a``
    (convolution with the conjugated index-reversal of ``a``), an
    approximate inverse in general and exact when ``a`` has a
    unit-modulus spectrum.  Phase mode multiplies by the coordinatewise
    conjugate of ``a`` and inverts exactly.
    """
    mode = BindingMode(mode)
    c = _as_binding_operand(c)
    a = _as_binding_operand(a)
    if c.shape != a.shape:
        raise DimensionMismatchError(f"dimension mismatch: {c.shape} vs {a.shape}")
    if mode is BindingMode.PHASE:
        _require_unit_modulus(a)
        return c * np.conjugate(a)
    kernel = _conjugate_involution(a)
    return _convolve_fft(kernel, c) if fast else _convolve_direct(kernel, c)


def unitary_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random real unit vector whose spectrum has unit magnitude everywhere.

    For such vectors circular correlation inverts circular convolution
    exactly, so bound pairs decode without noise.
    """
    if dim < 2:
        raise NumericError("unitary vectors need dimension >= 2")
    half = dim // 2
    spectrum = np.empty(half + 1, dtype=complex)
    spectrum[0] = rng.choice((-1.0, 1.0))
    if dim % 2 == 0:
        spectrum[half] = rng.choice((-1.0, 1.0))
        phases = rng.uniform(0.0, 2.0 * np.pi, half - 1)
        spectrum[1:half] = np.exp(1j * phases)
    else:
        phases = rng.uniform(0.0, 2.0 * np.pi, half)
        spectrum[1:] = np.exp(1j * phases)
    return np.fft.irfft(spectrum, n=dim)


def phase_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random complex vector with unit-modulus coordinates (random phases)."""
    if dim < 1:
        raise NumericError("dimension must be positive")
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, dim))


class RelationStore:
    """Seeded store of elemental vectors plus superposed fact memory.

    ``concepts`` and ``relations`` are disjoint namespaces of elemental
    (random, immutable) vectors, auto-created on first reference from the
    seeded generator, so the same seed and reference order rebuild an
    identical store.  ``memory`` accumulates bound relation/filler pairs
    per subject concept; a concept with no encoded facts has a zero memory
    vector.
    """

    def __init__(self, dim: int, mode: BindingMode = BindingMode.CIRCULAR,
                 seed: int = 0):
        self.dim = int(dim)
        self.mode = BindingMode(mode)
        self._rng = np.random.default_rng(seed)
        self.concepts: dict[str, np.ndarray] = {}
        self.relations: dict[str, np.ndarray] = {}
        self.memory: dict[str, np.ndarray] = {}

    def _fresh_vector(self) -> np.ndarray:
        if self.mode is BindingMode.PHASE:
            return phase_vector(self._rng, self.dim)
        return unitary_vector(self._rng, self.dim)

    def concept_vector(self, name: str) -> np.ndarray:
        if name in self.relations:
            raise NumericError(f"{name!r} is already a relation name")
        if name not in self.concepts:
            self.concepts[name] = self._fresh_vector()
        return self.concepts[name]

    def relation_vector(self, name: str) -> np.ndarray:
        if name in self.concepts:
            raise NumericError(f"{name!r} is already a concept name")
        if name not in self.relations:
            self.relations[name] = self._fresh_vector()
        return self.relations[name]

    def memory_vector(self, name: str) -> np.ndarray:
        dtype = complex if self.mode is BindingMode.PHASE else float
        return self.memory.get(name, np.zeros(self.dim, dtype=dtype))

    def decode(self, concept: str, relation: str) -> np.ndarray:
        """Unbind a relation from a concept's memory vector."""
        return unbind(self.memory_vector(concept),
                      self.relation_vector(relation), self.mode)

    def nearest_concept(self, vector, candidates=None) -> str:
        """Elemental concept most similar to ``vector`` (real-part cosine)."""
        names = sorted(candidates) if candidates is not None else sorted(self.concepts)
        if not names:
            raise NumericError("no candidate concepts to compare against")
        vector = _as_binding_operand(vector)
        best_name, best_score = None, -np.inf
        for name in names:
            ref = self.concept_vector(name)
            denom = np.linalg.norm(vector) * np.linalg.norm(ref)
            if denom == 0.0:
                continue
            score = float(np.real(np.vdot(ref, vector)) / denom)
            if score > best_score:
                best_name, best_score = name, score
        if best_name is None:
            raise NumericError("cannot rank candidates for a zero vector")
        return best_name


def encode_facts(store: RelationStore, facts) -> RelationStore:
    """Add (concept, relation, filler) facts to a store's memory.

    Each fact increments the subject's memory vector with the binding of
    the relation vector and the filler's elemental vector.  Names are
    auto-created as needed; the store is mutated and returned.
    """
    for concept, relation, filler in facts:
        store.concept_vector(concept)  # reserve the subject's elemental vector
        bound = bind(store.relation_vector(relation),
                     store.concept_vector(filler), store.mode)
        store.memory[concept] = store.memory_vector(concept) + bound
    return store
