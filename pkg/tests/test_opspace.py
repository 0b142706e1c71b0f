import numpy as np
import pytest
from gensic import opspace
from gensic.exceptions import DimensionMismatch, HermiticityWarning, InvalidState
from gensic.measurements import sic_rank_one
from gensic.opspace import Superoperator, dyad
from gensic.tomo import canonical_reconstruction, frame_superoperator


def random_hermitian(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return g + g.conj().T


def random_matrix(d, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def random_psd_superoperator(d, rank, seed):
    rng = np.random.default_rng(seed)
    g = (rng.normal(size=(d * d, rank))
         + 1j * rng.normal(size=(d * d, rank))) / d
    return Superoperator(g @ g.conj().T)


# Fixtures
@pytest.fixture(scope='module')
def sic2():
    return sic_rank_one(2)

#-----

def test_vectorize_stacks_columns():
    a = np.array([[1, 2], [3, 4]])
    assert np.array_equal(opspace.vectorize(a), [1, 3, 2, 4])
    assert np.array_equal(opspace.devectorize(opspace.vectorize(a)), a)


@pytest.mark.parametrize('d', [2, 3, 5])
def test_vectorize_is_isometry(d):
    a = random_matrix(d, d)
    v = opspace.vectorize(a)
    assert np.isclose(np.linalg.norm(v), opspace.hs_norm(a), atol=1e-12)
    assert np.isclose(opspace.hs_norm(a) ** 2,
                      opspace.hs_inner(a, a).real, atol=1e-10)


def test_hs_inner_sic_overlap(sic2):
    for j in range(4):
        for k in range(4):
            value = opspace.hs_inner(sic2.outcomes[j], sic2.outcomes[k])
            expected = 1 / 4 if j == k else 1 / 12
            assert value == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize('d', [2, 3, 5])
def test_hs_inner_entrywise(d):
    a, b = random_hermitian(d, 1), random_hermitian(d, 2)
    expected = sum(np.conj(a[m, n]) * b[m, n] for m in range(d)
                   for n in range(d))
    assert opspace.hs_inner(a, b) == pytest.approx(expected, abs=1e-10)


def test_ket_inner_product_matches_hs_inner():
    a, b = random_matrix(3, 3), random_matrix(3, 4)
    kets = np.vdot(opspace.vectorize(a), opspace.vectorize(b))
    assert kets == pytest.approx(np.trace(a.conj().T @ b), abs=1e-10)
    assert kets == pytest.approx(opspace.hs_inner(a, b), abs=1e-12)


def test_hs_inner_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        opspace.hs_inner(np.eye(2), np.eye(3))


def test_hs_inner_real_for_hermitian_operators():
    a, b = random_hermitian(3, 1), random_hermitian(3, 2)
    assert opspace.hs_inner(a, b).imag == 0
    c = random_matrix(3, 3)
    assert opspace.hs_inner(c, b).imag != 0


def test_hs_inner_rejects_imaginary_part_for_hermitian_operators():
    a = 1e-3j * np.ones((10, 10))
    with pytest.raises(ValueError):
        opspace.hs_inner(a, np.ones((10, 10)), tol=5e-3)


def test_dyad_applies_inner_product():
    a, b, x = random_matrix(3, 5), random_matrix(3, 6), random_matrix(3, 7)
    expected = a * np.trace(b.conj().T @ x)
    assert np.allclose(dyad(a, b).apply(x), expected, atol=1e-10)


def test_reconstruction_dyads_sum_to_identity(sic2):
    theta = canonical_reconstruction(sic2)
    total = Superoperator.zeros(2)
    for t, pi in zip(theta.operators, sic2.outcomes):
        total = total + dyad(t, pi)
    assert (total - Superoperator.identity(2)).max_abs() < 1e-10


def test_superoperator_algebra():
    a = Superoperator(random_matrix(4, 8))
    b = Superoperator(random_matrix(4, 9))
    assert np.allclose((a @ b).matrix, a.matrix @ b.matrix)
    assert np.allclose((2 * a - a / 2).matrix, 1.5 * a.matrix)
    assert np.allclose((-a).adjoint().matrix, -a.matrix.conj().T)
    with pytest.raises(DimensionMismatch):
        a @ Superoperator.identity(3)


def test_superoperator_rejects_bad_shape():
    with pytest.raises(DimensionMismatch):
        Superoperator(np.eye(3))


def test_pseudoinverse_of_normalized_rank_one_projector():
    one = np.eye(2)
    s = dyad(one, one) / 2
    pinv = opspace.pseudoinverse(s)
    assert (pinv - s).max_abs() < 1e-12
    assert (s @ pinv @ s - s).max_abs() < 1e-12
    assert (pinv @ s @ pinv - pinv).max_abs() < 1e-12


def test_pseudoinverse_of_zero():
    assert opspace.pseudoinverse(Superoperator.zeros(2)).max_abs() == 0


@pytest.mark.parametrize('hermitian', [False, True])
@pytest.mark.parametrize('d, rank, seed', [(2, 1, 0), (2, 3, 1), (3, 4, 2),
                                           (3, 6, 3), (4, 10, 4)])
def test_moore_penrose_identities(d, rank, seed, hermitian):
    s = random_psd_superoperator(d, rank, seed)
    pinv = opspace.pseudoinverse(s, hermitian=hermitian)
    assert (s @ pinv @ s - s).max_abs() < 1e-9
    assert (pinv @ s @ pinv - pinv).max_abs() < 1e-9
    assert ((s @ pinv).adjoint() - s @ pinv).max_abs() < 1e-9
    assert ((pinv @ s).adjoint() - pinv @ s).max_abs() < 1e-9
    assert np.linalg.matrix_rank(pinv.matrix, tol=1e-8) == rank


def test_pseudoinverse_of_sic_frame(sic2):
    frame = opspace.traceless_projection(frame_superoperator(sic2))
    expected = (2 / 3) * opspace.traceless_projector(2)
    assert (frame - expected).max_abs() < 1e-12
    pinv = opspace.pseudoinverse(frame)
    assert np.allclose(np.sort(pinv.eigenvalues()), [0, 1.5, 1.5, 1.5],
                       atol=1e-10)


def test_traceless_projector_is_projector():
    p = opspace.traceless_projector(3)
    assert (p @ p - p).max_abs() < 1e-12
    assert opspace.superop_trace(p) == pytest.approx(8)
    assert np.allclose(p.apply(np.eye(3)), 0)


def test_superop_trace_of_identity_dyad():
    one = np.eye(3)
    assert opspace.superop_trace(dyad(one, one)) == pytest.approx(3)


def test_superop_trace_rejects_complex_trace():
    with pytest.raises(ValueError):
        opspace.superop_trace(Superoperator(1j * np.eye(4)))


def test_superoperator_hermiticity_preservation(sic2):
    assert frame_superoperator(sic2).preserves_hermiticity()
    assert not Superoperator(1j * np.eye(4)).preserves_hermiticity()


def test_as_operator_warns_and_symmetrizes():
    a = np.array([[1, 1], [0, 1]], dtype=complex)
    with pytest.warns(HermiticityWarning):
        h = opspace.as_operator(a)
    assert np.allclose(h, [[1, 0.5], [0.5, 1]])


@pytest.mark.parametrize('rho', [np.eye(2), np.diag([1.5, -0.5])])
def test_as_density_rejects(rho):
    with pytest.raises(InvalidState):
        opspace.as_density(rho)


def test_purity():
    assert opspace.purity(np.eye(4) / 4) == pytest.approx(0.25)
    assert opspace.purity(np.diag([1, 0])) == pytest.approx(1)
