import numpy as np
import pytest
from ..families import family_sic
from ..exceptions import (ConstructionError, DimensionMismatch,
                          InvalidDimension, UsageError)

params = {'dim': 2, 'x': None, 'seed': None, 'fiducial': None}


@pytest.mark.parametrize('d, overlap', [(2, 1 / 3), (3, 1 / 4)])
def test_orbit_overlaps(d, overlap):
    states = family_sic.orbit(family_sic.builtin_fiducial(d))
    overlaps = np.abs(states.conj() @ states.T) ** 2
    off = overlaps[~np.eye(d * d, dtype=bool)]
    assert np.allclose(off, overlap, atol=1e-12)


def test_sic_qubit():
    p = family_sic.sic_rank_one(2)
    assert p.n == 4
    assert np.allclose(np.einsum('jab,jba->j', p.outcomes, p.outcomes), 0.25)
    assert np.allclose(p.total(), np.eye(2), atol=1e-12)
    assert p.label == 'sic d=2'


def test_no_builtin_fiducial():
    with pytest.raises(InvalidDimension):
        family_sic.sic_rank_one(5)


def test_bad_fiducial():
    with pytest.raises(ConstructionError) as e_info:
        family_sic.sic_rank_one(3, [1, 0, 0])
    assert e_info.value.residual > 0.1
    with pytest.raises(DimensionMismatch):
        family_sic.sic_rank_one(3, [0, 1])


def test_plugin():
    p = family_sic.plugin(params)
    assert p.params == {'dim': 2}
    assert p.build().n == 4
    assert p.describe() == 'sic dim=2'
    with pytest.raises(UsageError):
        family_sic.plugin({'dim': 2, 'x': 0.5})
