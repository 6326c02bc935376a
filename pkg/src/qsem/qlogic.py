"""Logic of linear subspaces and orthogonal projections.

A :class:`Subspace` is stored as an orthonormal basis (columns of an
``ambient_dim x rank`` array), never as a projector matrix, so rank
bookkeeping is exact and projectors are derived on demand.

The lattice operations are ``join`` (span of the union), ``meet``
(intersection, computed through the double orthocomplement so one rank
tolerance governs everything) and ``complement`` (orthocomplement).  This
lattice is famously non-distributive, which is what makes negation and
disjunction here behave unlike their Boolean counterparts: the join of two
lines is the whole plane through them, and the complement of a subspace is
its orthogonal complement rather than a set difference.

``conditional(a, b)`` is the subspace ``complement(a) v meet(a, b)``, the
lattice analog of material implication: it is the whole space exactly when
``a`` is contained in ``b``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, NumericError
from .linalg import DEFAULT_ORTHO_TOL, as_vector, gram_schmidt, norm

__all__ = [
    "RANK_TOL",
    "Subspace",
    "span",
    "join",
    "meet",
    "complement",
    "projector",
    "similarity",
    "leq",
    "conditional",
    "negate_vector",
]

#: Residual-norm tolerance for rank decisions (span, meet, complement).
RANK_TOL = 1e-8


class Subspace:
    """A linear subspace of R^n or C^n, held as an orthonormal basis.

    ``basis`` has shape ``(ambient_dim, rank)`` with orthonormal columns;
    the zero subspace has an empty basis (rank 0).
    """

    __slots__ = ("basis", "ambient_dim")

    def __init__(self, basis: np.ndarray, ambient_dim: int,
                 tol: float = DEFAULT_ORTHO_TOL):
        if ambient_dim < 1:
            raise DimensionMismatchError("ambient dimension must be positive")
        basis = np.asarray(basis)
        if basis.size == 0:
            basis = basis.reshape(ambient_dim, 0)
        if basis.ndim != 2 or basis.shape[0] != ambient_dim:
            raise DimensionMismatchError(
                f"basis shape {basis.shape} does not match ambient dim {ambient_dim}")
        if basis.shape[1] > ambient_dim:
            raise DimensionMismatchError("rank cannot exceed ambient dimension")
        if basis.shape[1] > 0:
            gram = np.conjugate(basis).T @ basis
            if np.max(np.abs(gram - np.eye(basis.shape[1]))) > tol:
                raise NumericError("basis columns are not orthonormal within tolerance")
        self.basis = basis
        self.ambient_dim = ambient_dim

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    def basis_vectors(self) -> list[np.ndarray]:
        return [self.basis[:, k] for k in range(self.rank)]

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0)), ambient_dim)

    @classmethod
    def whole(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim), ambient_dim)

    def contains_vector(self, v, tol: float = RANK_TOL) -> bool:
        """True if ``v`` lies in the subspace up to residual norm ``tol``."""
        v = as_vector(v)
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatchError("vector/ambient dimension mismatch")
        coeffs = np.conjugate(self.basis).T @ v
        return norm(v - self.basis @ coeffs) <= tol

    def __repr__(self) -> str:
        return f"Subspace(rank={self.rank}, ambient_dim={self.ambient_dim})"


def _check_same_ambient(s: Subspace, t: Subspace) -> None:
    if s.ambient_dim != t.ambient_dim:
        raise DimensionMismatchError(
            f"ambient dimensions differ: {s.ambient_dim} vs {t.ambient_dim}")


def span(vectors, tol: float = RANK_TOL) -> Subspace:
    """Subspace spanned by ``vectors`` (orthonormalized, dependents dropped)."""
    vs = [as_vector(v) for v in vectors]
    if not vs:
        raise DimensionMismatchError("span of an empty list has no ambient dimension; "
                                     "use Subspace.zero(dim)")
    dims = {v.shape[0] for v in vs}
    if len(dims) != 1:
        raise DimensionMismatchError("mixed ambient dimensions in span input")
    basis = gram_schmidt(vs, tol=tol)
    dim = vs[0].shape[0]
    if not basis:
        return Subspace.zero(dim)
    return Subspace(np.column_stack(basis), dim)


def join(s: Subspace, t: Subspace, tol: float = RANK_TOL) -> Subspace:
    """Smallest subspace containing both: the span of the combined bases."""
    _check_same_ambient(s, t)
    vs = s.basis_vectors() + t.basis_vectors()
    if not vs:
        return Subspace.zero(s.ambient_dim)
    return span(vs, tol=tol)


def complement(s: Subspace, tol: float = RANK_TOL) -> Subspace:
    """Orthogonal complement; ranks always add up to the ambient dimension.

    The basis is built by extending s's basis with the standard basis under
    Gram-Schmidt and keeping the new directions, so the output is
    deterministic and exactly of rank ``ambient_dim - rank(s)``.
    """
    n = s.ambient_dim
    seed = s.basis_vectors()
    eye = np.eye(n, dtype=s.basis.dtype if s.rank else float)
    extended = gram_schmidt(seed + [eye[:, i] for i in range(n)], tol=tol)
    if len(extended) != n:
        raise NumericError("failed to extend basis to the whole space")
    extra = extended[s.rank:]
    if not extra:
        return Subspace.zero(n)
    return Subspace(np.column_stack(extra), n)


def meet(s: Subspace, t: Subspace, tol: float = RANK_TOL) -> Subspace:
    """Intersection of two subspaces, via the double complement."""
    _check_same_ambient(s, t)
    return complement(join(complement(s, tol), complement(t, tol), tol), tol)


def projector(s: Subspace) -> np.ndarray:
    """Orthogonal projector onto ``s``: the sum of dyads of its basis.

    The result is idempotent and self-adjoint; the zero subspace gives the
    zero matrix and the whole space gives the identity.
    """
    if s.is_zero:
        return np.zeros((s.ambient_dim, s.ambient_dim))
    return s.basis @ np.conjugate(s.basis).T


def similarity(v, s: Subspace) -> float:
    """Magnitude of the projection of ``v`` onto ``s``.

    For a rank-1 subspace and a unit vector this is |cosine| with the basis
    direction, i.e. the probability amplitude of observing ``v`` there.
    """
    v = as_vector(v)
    if v.shape[0] != s.ambient_dim:
        raise DimensionMismatchError("vector/ambient dimension mismatch")
    if s.is_zero:
        return 0.0
    return norm(np.conjugate(s.basis).T @ v)


def leq(s: Subspace, t: Subspace, tol: float = RANK_TOL) -> bool:
    """Subspace inclusion ``s <= t``.

    Holds exactly when projecting onto ``t`` after ``s`` changes nothing,
    i.e. ``P_t @ P_s == P_s``; tested in Frobenius norm against ``tol``.
    """
    _check_same_ambient(s, t)
    ps = projector(s)
    return norm(projector(t) @ ps - ps) <= tol


def conditional(a: Subspace, b: Subspace, tol: float = RANK_TOL) -> Subspace:
    """The subspace ``complement(a) v (a ^ b)`` (lattice conditional)."""
    _check_same_ambient(a, b)
    return join(complement(a, tol), meet(a, b, tol), tol)


def negate_vector(a, negatives, tol: float = RANK_TOL) -> np.ndarray:
    """Remove from ``a`` every component along the span of ``negatives``.

    The result is orthogonal to each vector in ``negatives``; an empty list
    returns ``a`` unchanged.
    """
    a = as_vector(a)
    negs = [as_vector(n) for n in negatives]
    if not negs:
        return a.copy()
    for n in negs:
        if n.shape[0] != a.shape[0]:
            raise DimensionMismatchError("negated vector dimension mismatch")
    sub = span(negs, tol=tol)
    if sub.is_zero:
        return a.copy()
    coeffs = np.conjugate(sub.basis).T @ a
    return a - sub.basis @ coeffs
