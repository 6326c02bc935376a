import numpy as np
import pytest

from qsem import corpus


@pytest.fixture
def toy_corpus() -> corpus.Corpus:
    """Five-document polysemy corpus ('suit' as garment vs. litigation)."""
    docs = [
        ("d1", "the suit fits the man well"),
        ("d2", "a lawsuit suit filed in court by the lawyer"),
        ("d3", "court lawyer lawsuit trial"),
        ("d4", "jacket suit garment tailor"),
        ("d5", "tailor garment fabric"),
    ]
    return corpus.Corpus(tuple((d, tuple(corpus.tokenize(t))) for d, t in docs))


@pytest.fixture
def toy_index(toy_corpus) -> corpus.TermDocumentIndex:
    return corpus.build_index(toy_corpus, weighting="count", min_df=1)


def random_unit(rng: np.random.Generator, dim: int, complex_field: bool = False):
    v = rng.normal(size=dim)
    if complex_field:
        v = v + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_subspace(rng: np.random.Generator, dim: int, rank: int):
    from qsem import qlogic

    vs = [rng.normal(size=dim) for _ in range(rank)]
    return qlogic.span(vs)
