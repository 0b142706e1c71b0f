import numpy as np
import pytest
from ..families import family_gen_sic_depol, family_gen_sic_simplex
from ..families.family_sic import sic_rank_one
from ..exceptions import ConstructionError, InvalidDimension, UsageError
from ..povm import gram_matrix, outcome_purities, validate


# Fixtures
@pytest.fixture(scope='module')
def sic2():
    return sic_rank_one(2)

#-----

def test_depolarized_purity(sic2):
    p = family_gen_sic_depol.generalized_sic_depolarized(sic2, 0.5)
    assert np.allclose(outcome_purities(p), 0.625)
    assert p.label == 'gen-sic-depol d=2 x=0.5'


@pytest.mark.parametrize('x', [0.1, 0.5, 0.9])
def test_depolarized_equiangular(sic2, x):
    p = family_gen_sic_depol.generalized_sic_depolarized(sic2, x)
    g = gram_matrix(p, 2)
    off = g[~np.eye(4, dtype=bool)]
    assert np.ptp(off) < 1e-12


def test_depolarized_identity_at_one(sic2):
    assert family_gen_sic_depol.generalized_sic_depolarized(sic2, 1) is sic2


@pytest.mark.parametrize('x', [0, -0.1, 1.5])
def test_depolarized_range(sic2, x):
    with pytest.raises(UsageError):
        family_gen_sic_depol.generalized_sic_depolarized(sic2, x)


def test_depolarized_needs_rank_one_sic(sic2):
    half = family_gen_sic_depol.generalized_sic_depolarized(sic2, 0.5)
    with pytest.raises(ConstructionError):
        family_gen_sic_depol.generalized_sic_depolarized(half, 0.5)


def test_simplex_vertices():
    v = family_gen_sic_simplex.simplex_vertices(4)
    assert v.shape == (4, 3)
    assert np.allclose(v @ v.T, np.eye(4) - 1 / 4, atol=1e-12)


@pytest.mark.parametrize('d', [2, 3, 4])
@pytest.mark.parametrize('seed', range(20))
def test_simplex_generalized_sic(d, seed):
    p = family_gen_sic_simplex.generalized_sic_simplex(d, seed)
    assert p.n == d * d
    assert validate(p).passed
    g = gram_matrix(p, d)
    off = g[~np.eye(d * d, dtype=bool)]
    assert np.ptp(off) < 1e-9
    assert np.ptp(np.diag(g)) < 1e-9
    lowest = min(np.linalg.eigvalsh(op)[0] for op in p.outcomes)
    assert abs(lowest) < 1e-10


def test_simplex_qubit_relation():
    p = family_gen_sic_simplex.generalized_sic_simplex(2, 5)
    g = gram_matrix(p, 2)
    alpha = g[0, 0] - g[0, 1]
    assert alpha + 4 * g[0, 1] == pytest.approx(2, abs=1e-10)
    assert np.allclose(p.traces(), 0.5)


def test_simplex_is_seeded():
    a = family_gen_sic_simplex.generalized_sic_simplex(3, 4)
    b = family_gen_sic_simplex.generalized_sic_simplex(3, 4)
    assert np.array_equal(a.outcomes, b.outcomes)


def test_simplex_dimension():
    with pytest.raises(InvalidDimension):
        family_gen_sic_simplex.generalized_sic_simplex(1, 0)


def test_plugins():
    p = family_gen_sic_depol.plugin({'dim': 3, 'x': 0.4}).build()
    assert p.n == 9
    p = family_gen_sic_simplex.plugin({'dim': 2, 'seed': 3}).build()
    assert p.n == 4
    with pytest.raises(UsageError):
        family_gen_sic_simplex.plugin({'dim': 2})
