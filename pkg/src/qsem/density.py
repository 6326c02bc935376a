"""Density matrices: mixed states, positivity ordering, graded containment.

A density matrix is a self-adjoint, positive semidefinite, unit-trace
operator; it represents a statistical ensemble of unit vectors and carries
strictly more information than any single vector can.

The positivity (Loewner) order ``A <= B  iff  B - A is PSD`` restricts, on
projectors, to subspace inclusion.  When two densities are incomparable in
that order, :func:`hyponymy_grade` splits their difference into positive
parts ``B - A = excess - error`` so that ``A + excess = B + error``; the
trace of the error part measures how far A sticks out of B, and the grade
``1 - trace(error)`` is 1 exactly on containment.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError, NumericError
from .linalg import as_matrix, as_vector, hermitian_eig, is_hermitian, norm, outer

__all__ = [
    "PSD_TOL",
    "DensityMatrix",
    "HyponymyReport",
    "Factor",
    "from_ensemble",
    "born_probability",
    "is_positive",
    "loewner_leq",
    "hyponymy_grade",
    "partial_trace",
    "word_density",
]

#: Absolute tolerance on eigenvalues for positivity decisions.
PSD_TOL = 1e-9


class DensityMatrix:
    """Self-adjoint, PSD, unit-trace operator (validated on construction)."""

    __slots__ = ("matrix",)

    HERMITIAN_TOL = 1e-10
    TRACE_TOL = 1e-9

    def __init__(self, matrix):
        m = as_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatchError("density matrix must be square")
        if not is_hermitian(m, self.HERMITIAN_TOL):
            raise NonHermitianError("density matrix must be self-adjoint")
        tr = complex(np.trace(m)).real
        if abs(tr - 1.0) > self.TRACE_TOL:
            raise NumericError(f"density matrix trace is {tr}, expected 1")
        if float(np.linalg.eigvalsh(m).min()) < -PSD_TOL:
            raise NumericError("density matrix has a negative eigenvalue")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Ascending eigenvalues and orthonormal eigenvector columns."""
        return hermitian_eig(self.matrix, self.HERMITIAN_TOL)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True)
class HyponymyReport:
    """Decomposition ``A + excess = B + error`` with both parts PSD.

    ``grade`` is ``max(0, 1 - trace(error))``: 1 when A is contained in B
    under the positivity order, shrinking toward 0 as more of A lies
    outside B.
    """

    grade: float
    excess: np.ndarray
    error: np.ndarray


class Factor(enum.Enum):
    """Which tensor factor :func:`partial_trace` keeps."""

    FIRST = "first"
    SECOND = "second"


def from_ensemble(weights, states) -> DensityMatrix:
    """Density of a weighted ensemble of (internally normalized) vectors.

    Weights must be non-negative with a positive sum; they are rescaled to
    probabilities.  A single state yields the pure-state projector.
    """
    ws = [float(w) for w in weights]
    vs = [as_vector(s) for s in states]
    if not ws or not vs:
        raise NumericError("ensemble must contain at least one state")
    if len(ws) != len(vs):
        raise DimensionMismatchError("weights and states differ in length")
    if any(w < 0 for w in ws):
        raise NumericError("ensemble weights must be non-negative")
    total = sum(ws)
    if total <= 0:
        raise NumericError("ensemble weights must have positive sum")
    dim = vs[0].shape[0]
    dtype = np.result_type(*[v.dtype for v in vs], np.float64)
    rho = np.zeros((dim, dim), dtype=dtype)
    for w, v in zip(ws, vs):
        if v.shape[0] != dim:
            raise DimensionMismatchError("ensemble states must share one dimension")
        n = norm(v)
        if n == 0.0:
            raise NumericError("ensemble state is a zero vector")
        unit = v / n
        rho += (w / total) * outer(unit, unit)
    return DensityMatrix(rho)


def born_probability(psi, phi) -> float:
    """Probability ``|<phi|psi>|^2`` of observing state psi in state phi.

    Both vectors must be unit-normalized within 1e-8.
    """
    psi = as_vector(psi)
    phi = as_vector(phi)
    if psi.shape != phi.shape:
        raise DimensionMismatchError("state dimensions differ")
    for v in (psi, phi):
        if abs(norm(v) - 1.0) > 1e-8:
            raise NumericError("born_probability requires unit-norm states")
    return float(abs(np.vdot(phi, psi)) ** 2)


def is_positive(m, tol: float = PSD_TOL) -> bool:
    """True if a self-adjoint matrix has all eigenvalues >= -tol."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError("positivity is defined for square matrices")
    if not is_hermitian(m, max(tol, 1e-10)):
        raise NonHermitianError("positivity test requires a self-adjoint matrix")
    return float(np.linalg.eigvalsh(m).min()) >= -tol


def loewner_leq(a, b, tol: float = PSD_TOL) -> bool:
    """Positivity order: ``a <= b`` iff ``b - a`` is positive semidefinite."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    return is_positive(b - a, tol)


def hyponymy_grade(a: DensityMatrix, b: DensityMatrix) -> HyponymyReport:
    """Graded containment of density ``a`` in density ``b``.

    The difference ``b - a`` is split along its eigenbasis into a positive
    part (``excess``) and the negated negative part (``error``); both are
    PSD and ``a + excess == b + error``.  Since the inputs have unit trace
    the error trace lies in [0, 1] up to numerical noise, and the grade is
    clamped at 0.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError("densities must share a dimension")
    diff = b.matrix - a.matrix
    vals, vecs = hermitian_eig(diff, DensityMatrix.HERMITIAN_TOL)
    excess = np.zeros_like(diff)
    error = np.zeros_like(diff)
    for k, lam in enumerate(vals):
        dyad = outer(vecs[:, k], vecs[:, k])
        if lam > 0:
            excess += lam * dyad
        elif lam < 0:
            error += (-lam) * dyad
    grade = max(0.0, 1.0 - float(np.trace(error).real))
    return HyponymyReport(grade=grade, excess=excess, error=error)


def partial_trace(rho: DensityMatrix, dims: tuple[int, int],
                  keep: Factor = Factor.FIRST) -> DensityMatrix:
    """Trace out one factor of a density on a product space.

    ``dims = (m, n)`` declares the factor dimensions with the composite
    index laid out row-major (``idx = a * n + b``).  Keeping the first
    factor sums ``rho[a*n + b, a2*n + b]`` over ``b``; the result is again
    a density matrix (trace is preserved).
    """
    m, n = int(dims[0]), int(dims[1])
    if m < 1 or n < 1 or m * n != rho.dim:
        raise DimensionMismatchError(
            f"dimension {rho.dim} does not factor as {m} x {n}")
    keep = Factor(keep)
    blocks = rho.matrix.reshape(m, n, m, n)
    if keep is Factor.FIRST:
        reduced = np.einsum("abcb->ac", blocks)
    else:
        reduced = np.einsum("abad->bd", blocks)
    return DensityMatrix(reduced)


def word_density(context_vectors) -> DensityMatrix:
    """Density of a word from its context vectors, uniformly weighted.

    Each context is normalized and contributes one pure state; a single
    context yields a pure-state density, orthogonal contexts yield a
    diagonal mixture.
    """
    contexts = list(context_vectors)
    if not contexts:
        raise NumericError("word_density requires at least one context vector")
    return from_ensemble([1.0] * len(contexts), contexts)
