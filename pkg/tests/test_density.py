import numpy as np
import numpy.testing as npt
import pytest

from qsem import density, qlogic
from qsem.density import DensityMatrix, Factor
from qsem.errors import DimensionMismatchError, NonHermitianError, NumericError

RT2 = np.sqrt(2.0) / 2.0


def random_density(rng, dim):
    weights = rng.uniform(0.1, 1.0, size=dim)
    states = [rng.normal(size=dim) for _ in range(dim)]
    return density.from_ensemble(weights, states)


def assert_valid_density(rho: DensityMatrix, tol=1e-8):
    m = rho.matrix
    npt.assert_allclose(m, np.conjugate(m).T, atol=tol)
    assert abs(np.trace(m).real - 1.0) <= tol
    assert np.linalg.eigvalsh(m).min() >= -tol


class TestFromEnsemble:
    def test_single_state_is_pure_projector(self):
        rho = density.from_ensemble([1.0], [[3.0, 4.0]])
        npt.assert_allclose(rho.matrix,
                            np.array([[9.0, 12.0], [12.0, 16.0]]) / 25.0, atol=1e-12)

    def test_uniform_orthonormal_is_maximally_mixed(self):
        rho = density.from_ensemble([1, 1, 1], np.eye(3))
        npt.assert_allclose(rho.matrix, np.eye(3) / 3.0, atol=1e-12)

    def test_weighted_two_state_example(self):
        # oracle: 0.25 * diag(1, 0) + 0.75 * [[.5,.5],[.5,.5]] summed by hand
        rho = density.from_ensemble([0.25, 0.75], [[1.0, 0.0], [RT2, RT2]])
        npt.assert_allclose(rho.matrix,
                            np.array([[0.625, 0.375], [0.375, 0.375]]), atol=1e-12)

    def test_rejects_bad_ensembles(self):
        with pytest.raises(NumericError):
            density.from_ensemble([], [])
        with pytest.raises(NumericError):
            density.from_ensemble([-0.5, 1.5], [[1, 0], [0, 1]])

    def test_all_constructions_valid(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            assert_valid_density(random_density(rng, int(rng.integers(2, 7))))


class TestBornProbability:
    def test_diagonal_vs_x_axis(self):
        assert density.born_probability([RT2, RT2], [1.0, 0.0]) == pytest.approx(
            0.5, abs=1e-12)

    def test_same_state(self):
        v = np.array([0.6, 0.8])
        assert density.born_probability(v, v) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_states(self):
        assert density.born_probability([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_rejects_unnormalized(self):
        with pytest.raises(NumericError):
            density.born_probability([2.0, 0.0], [1.0, 0.0])


class TestIsPositive:
    def test_density_matrices_are_positive(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            assert density.is_positive(random_density(rng, 4).matrix)

    def test_negative_identity(self):
        assert not density.is_positive(-np.eye(3))

    def test_symmetric_indefinite(self):
        # oracle: characteristic polynomial gives eigenvalues {-1, 3}
        assert not density.is_positive(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            density.is_positive(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestLoewnerOrder:
    def test_reflexive(self):
        rng = np.random.default_rng(2)
        a = random_density(rng, 3).matrix
        assert density.loewner_leq(a, a)

    def test_zero_below_any_psd(self):
        rng = np.random.default_rng(3)
        g = rng.normal(size=(4, 4))
        assert density.loewner_leq(np.zeros((4, 4)), g @ g.T)

    def test_projector_order_matches_subspace_inclusion(self):
        # oracle: qlogic.leq on the same subspace pairs
        rng = np.random.default_rng(4)
        for trial in range(50):
            dim = int(rng.integers(2, 7))
            nested = trial % 2 == 0
            if nested:
                big = qlogic.span([rng.normal(size=dim)
                                   for _ in range(int(rng.integers(2, dim + 1)))])
                k = int(rng.integers(1, big.rank + 1))
                small = qlogic.span([big.basis @ rng.normal(size=big.rank)
                                     for _ in range(k)])
            else:
                small = qlogic.span([rng.normal(size=dim)])
                big = qlogic.span([rng.normal(size=dim)])
            expected = qlogic.leq(small, big)
            got = density.loewner_leq(qlogic.projector(small), qlogic.projector(big),
                                      tol=1e-8)
            assert got == expected

    def test_partial_order_on_psd_chains(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            dim = int(rng.integers(2, 5))
            g = rng.normal(size=(dim, dim))
            a = g @ g.T
            p1 = rng.normal(size=(dim, dim))
            p2 = rng.normal(size=(dim, dim))
            b = a + p1 @ p1.T
            c = b + p2 @ p2.T
            assert density.loewner_leq(a, a)          # reflexive
            assert density.loewner_leq(a, b) and density.loewner_leq(b, c)
            assert density.loewner_leq(a, c)          # transitive along the chain
            if density.loewner_leq(b, a):             # antisymmetric within tolerance
                npt.assert_allclose(a, b, atol=1e-8)


class TestHyponymyGrade:
    def test_identical_densities(self):
        rng = np.random.default_rng(6)
        rho = random_density(rng, 3)
        report = density.hyponymy_grade(rho, rho)
        assert report.grade == pytest.approx(1.0, abs=1e-12)
        npt.assert_allclose(report.error, np.zeros((3, 3)), atol=1e-12)

    def test_loewner_containment_gives_grade_one(self):
        # for unit-trace operators containment collapses to equality, so a
        # hermitian perturbation at numerical scale must keep grade 1
        rng = np.random.default_rng(7)
        rho = random_density(rng, 4)
        noise = rng.normal(size=(4, 4)) * 1e-13
        other = DensityMatrix(rho.matrix + (noise + noise.T) / 2.0)
        assert density.loewner_leq(rho.matrix, other.matrix, tol=1e-9)
        assert density.hyponymy_grade(rho, other).grade == pytest.approx(1.0, abs=1e-9)

    def test_diagonal_fixture(self):
        # oracle: diagonal eigendecomposition of diag(-0.75, 0.75) by hand
        a = DensityMatrix(np.diag([1.0, 0.0]))
        b = DensityMatrix(np.diag([0.25, 0.75]))
        report = density.hyponymy_grade(a, b)
        npt.assert_allclose(report.error, np.diag([0.75, 0.0]), atol=1e-12)
        npt.assert_allclose(report.excess, np.diag([0.0, 0.75]), atol=1e-12)
        assert report.grade == pytest.approx(0.25, abs=1e-12)

    def test_decomposition_identity_randomized(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            dim = int(rng.integers(2, 6))
            a = random_density(rng, dim)
            b = random_density(rng, dim)
            report = density.hyponymy_grade(a, b)
            npt.assert_allclose(a.matrix + report.excess, b.matrix + report.error,
                                atol=1e-8)
            assert 0.0 <= report.grade <= 1.0 + 1e-12
            assert density.is_positive(report.excess, 1e-9)
            assert density.is_positive(report.error, 1e-9)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            density.hyponymy_grade(DensityMatrix(np.eye(2) / 2),
                                   DensityMatrix(np.eye(3) / 3))


class TestPartialTrace:
    def test_product_state_recovers_factor(self):
        rng = np.random.default_rng(9)
        rho_a = random_density(rng, 3)
        rho_b = random_density(rng, 2)
        joint = DensityMatrix(np.kron(rho_a.matrix, rho_b.matrix))
        npt.assert_allclose(
            density.partial_trace(joint, (3, 2), Factor.FIRST).matrix,
            rho_a.matrix, atol=1e-10)
        npt.assert_allclose(
            density.partial_trace(joint, (3, 2), Factor.SECOND).matrix,
            rho_b.matrix, atol=1e-10)

    def test_bell_state_reduces_to_maximally_mixed(self):
        # oracle: explicit 4x4 index summation of the pure Bell density
        psi = np.zeros(4)
        psi[0] = psi[3] = RT2  # (e1 x e1 + e2 x e2) / sqrt(2), row-major
        bell = DensityMatrix(np.outer(psi, psi))
        by_hand = np.zeros((2, 2))
        for a in range(2):
            for a2 in range(2):
                by_hand[a, a2] = sum(bell.matrix[a * 2 + b, a2 * 2 + b]
                                     for b in range(2))
        npt.assert_allclose(by_hand, np.eye(2) / 2.0, atol=1e-12)
        for keep in (Factor.FIRST, Factor.SECOND):
            npt.assert_allclose(density.partial_trace(bell, (2, 2), keep).matrix,
                                np.eye(2) / 2.0, atol=1e-12)

    def test_trace_preserved(self):
        rng = np.random.default_rng(10)
        rho = random_density(rng, 6)
        out = density.partial_trace(rho, (2, 3), Factor.SECOND)
        assert abs(np.trace(out.matrix) - 1.0) <= 1e-12

    def test_linearity(self):
        rng = np.random.default_rng(11)
        r1, r2 = random_density(rng, 4), random_density(rng, 4)
        alpha = 0.3
        mix = DensityMatrix(alpha * r1.matrix + (1 - alpha) * r2.matrix)
        lhs = density.partial_trace(mix, (2, 2)).matrix
        rhs = (alpha * density.partial_trace(r1, (2, 2)).matrix
               + (1 - alpha) * density.partial_trace(r2, (2, 2)).matrix)
        npt.assert_allclose(lhs, rhs, atol=1e-10)

    def test_rejects_bad_factorization(self):
        rng = np.random.default_rng(12)
        with pytest.raises(DimensionMismatchError):
            density.partial_trace(random_density(rng, 6), (4, 2))


class TestWordDensity:
    def test_single_context_is_pure(self):
        rho = density.word_density([[0.0, 1.0]])
        npt.assert_allclose(rho.matrix, np.diag([0.0, 1.0]), atol=1e-12)

    def test_orthogonal_contexts(self):
        rho = density.word_density([[1.0, 0.0], [0.0, 1.0]])
        npt.assert_allclose(rho.matrix, np.diag([0.5, 0.5]), atol=1e-12)

    def test_hand_picked_contexts(self):
        # oracle: sum of the three outer products divided by three
        contexts = [np.array([1.0, 0.0, 0.0]),
                    np.array([0.0, 1.0, 1.0]) / np.sqrt(2.0),
                    np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0)]
        expected = sum(np.outer(c, c) for c in contexts) / 3.0
        npt.assert_allclose(density.word_density(contexts).matrix, expected,
                            atol=1e-12)
        with pytest.raises(NumericError):
            density.word_density([])
