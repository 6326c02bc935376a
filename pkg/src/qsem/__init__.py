"""qsem: quantum-style vector semantics workbench.

Dense field-generic linear algebra (:mod:`qsem.linalg`), the subspace
logic of projections (:mod:`qsem.qlogic`), density matrices and graded
containment (:mod:`qsem.density`), term-document indexing
(:mod:`qsem.corpus`), negation-aware retrieval (:mod:`qsem.retrieval`),
density language models (:mod:`qsem.qlm`), tensor composition and vector
binding (:mod:`qsem.compose`), and harmonic function vectors
(:mod:`qsem.harmonics`), all behind one CLI (:mod:`qsem.cli`).
"""

from . import compose, corpus, density, harmonics, linalg, qlm, qlogic, retrieval
from .errors import QsemError

__all__ = [
    "compose",
    "corpus",
    "density",
    "harmonics",
    "linalg",
    "qlm",
    "qlogic",
    "retrieval",
    "QsemError",
]

__version__ = "0.1.0"
