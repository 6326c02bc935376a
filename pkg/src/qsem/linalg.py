"""Ground-field-generic dense linear algebra.

Vectors and matrices are plain numpy arrays; the ground field is carried by
the dtype (float64 for the real field, complex128 for the complex field).
Conjugation on a real array is the identity, so every formula below is
written once for both fields.

Conventions:

* The inner product is conjugate-linear in the FIRST argument, so
  ``inner(u, v) == sum(conj(u_i) * v_i)``.  For real arrays this is the
  ordinary dot product.
* ``outer(u, v)`` conjugates the second factor, so ``outer(v, v)`` is the
  orthogonal projector onto the line through a unit vector ``v``.
* Eigenvalues from :func:`hermitian_eig` are ascending; singular values
  from :func:`svd` are descending.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError, NumericError

__all__ = [
    "Field",
    "DEFAULT_ORTHO_TOL",
    "DEFAULT_FACTOR_RTOL",
    "as_vector",
    "as_matrix",
    "inner",
    "outer",
    "adjoint",
    "norm",
    "normalized",
    "is_hermitian",
    "gram_schmidt",
    "hermitian_eig",
    "svd",
    "commutator",
]

#: Absolute tolerance for orthonormality checks.
DEFAULT_ORTHO_TOL = 1e-10
#: Relative tolerance for factorization residuals (eig/svd reconstruction).
DEFAULT_FACTOR_RTOL = 1e-9


class Field(enum.Enum):
    """Ground field of a vector space: real or complex coordinates."""

    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.float64 if self is Field.REAL else np.complex128)


def as_vector(values, field: Field | None = None) -> np.ndarray:
    """Coerce ``values`` to a 1-D coordinate vector.

    With ``field=None`` the dtype is inferred: complex input stays complex,
    anything else becomes float64.
    """
    dtype = field.dtype if field is not None else None
    v = np.asarray(values, dtype=dtype)
    if dtype is None and not np.issubdtype(v.dtype, np.complexfloating):
        v = v.astype(np.float64)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D vector, got shape {v.shape}")
    if v.size == 0:
        raise DimensionMismatchError("vector must have positive dimension")
    if not np.all(np.isfinite(v)):
        raise NumericError("vector has non-finite coordinates")
    return v


def as_matrix(values, field: Field | None = None) -> np.ndarray:
    """Coerce ``values`` to a 2-D matrix (see :func:`as_vector`)."""
    dtype = field.dtype if field is not None else None
    m = np.asarray(values, dtype=dtype)
    if dtype is None and not np.issubdtype(m.dtype, np.complexfloating):
        m = m.astype(np.float64)
    if m.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericError("matrix has non-finite entries")
    return m


def _check_same_dim(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape != v.shape:
        raise DimensionMismatchError(f"dimension mismatch: {u.shape} vs {v.shape}")


def inner(u, v):
    """Inner product, conjugate-linear in the first argument.

    Returns a Python float for real inputs and a Python complex otherwise.
    """
    u = as_vector(u)
    v = as_vector(v)
    _check_same_dim(u, v)
    return np.vdot(u, v).item()


def outer(u, v) -> np.ndarray:
    """Outer product ``u v^dagger``: entry (i, j) is ``u_i * conj(v_j)``.

    The result has rank at most one; ``trace(outer(u, v)) == inner(v, u)``.
    """
    u = as_vector(u)
    v = as_vector(v)
    return np.outer(u, np.conjugate(v))


def adjoint(m) -> np.ndarray:
    """Conjugate transpose. An involution: ``adjoint(adjoint(m)) == m``."""
    m = as_matrix(m)
    return np.conjugate(m).T


def norm(v) -> float:
    """Euclidean norm of a vector or Frobenius norm of a matrix."""
    return float(np.linalg.norm(np.asarray(v)))


def normalized(v) -> np.ndarray:
    """Return ``v / ||v||``; raises :class:`NumericError` on a zero vector."""
    v = as_vector(v)
    n = norm(v)
    if n == 0.0:
        raise NumericError("cannot normalize a zero vector")
    return v / n


def is_hermitian(m, tol: float = DEFAULT_ORTHO_TOL) -> bool:
    """True if the matrix equals its adjoint within an absolute entry tolerance."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - np.conjugate(m).T)) <= tol)


def gram_schmidt(vectors, tol: float = DEFAULT_ORTHO_TOL) -> list[np.ndarray]:
    """Orthonormalize ``vectors``, dropping ones with residual norm <= tol.

    Modified Gram-Schmidt with one reorthogonalization pass, which keeps the
    output orthonormal to machine precision even for nearly dependent input.
    The output spans the same subspace as the input; order of the surviving
    directions follows input order, so the result is deterministic.

    An empty input yields an empty list.
    """
    if tol <= 0:
        raise NumericError("tol must be positive")
    vs = [as_vector(v) for v in vectors]
    if not vs:
        return []
    dim = vs[0].shape[0]
    basis: list[np.ndarray] = []
    for v in vs:
        if v.shape[0] != dim:
            raise DimensionMismatchError("all vectors must share one ambient dimension")
        w = v.astype(np.result_type(v.dtype, np.float64), copy=True)
        for _ in range(2):  # second pass reorthogonalizes
            for q in basis:
                w = w - np.vdot(q, w) * q
        residual = norm(w)
        if residual > tol:
            basis.append(w / residual)
    return basis


def hermitian_eig(m, tol: float = DEFAULT_ORTHO_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a self-adjoint matrix.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues in
    ascending order and orthonormal eigenvectors as the COLUMNS of the
    second array, so ``m @ vecs[:, k] == vals[k] * vecs[:, k]``.

    Raises :class:`NonHermitianError` if ``m`` deviates from its adjoint by
    more than ``tol`` in any entry.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"matrix must be square, got {m.shape}")
    if not is_hermitian(m, tol):
        raise NonHermitianError("matrix is not self-adjoint within tolerance")
    vals, vecs = np.linalg.eigh(m)
    return vals, vecs


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin singular value decomposition ``m == u @ diag(s) @ adjoint(v)``.

    ``u`` and ``v`` have orthonormal columns; ``s`` is real, non-negative,
    descending.
    """
    m = as_matrix(m)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return u, s, np.conjugate(vh).T


def commutator(a, b) -> np.ndarray:
    """``a @ b - b @ a`` for square matrices of equal shape."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] != a.shape[1] or b.shape[0] != b.shape[1]:
        raise DimensionMismatchError("commutator requires square matrices")
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a
