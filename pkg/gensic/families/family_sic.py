# Rank-one SIC measurements as Weyl-Heisenberg orbits of a fiducial.
import logging

import numpy as np

from ..exceptions import ConstructionError, DimensionMismatch, InvalidDimension
from ..povm import Povm, projector, weyl_heisenberg
from ..families import family

log = logging.getLogger(__name__)

# Orbit acceptance for user supplied fiducials.
FIDUCIAL_TOLERANCE = 1e-6


def builtin_fiducial(d):
    '''Closed form fiducials: the tetrahedral qubit state with Bloch vector
    (1, 1, 1)/sqrt(3) and the Hesse qutrit state (0, 1, -1)/sqrt(2).'''
    if d == 2:
        theta = np.arccos(1 / np.sqrt(3))
        return np.array([np.cos(theta / 2),
                         np.exp(1j * np.pi / 4) * np.sin(theta / 2)])
    if d == 3:
        return np.array([0, 1, -1], dtype=complex) / np.sqrt(2)
    raise InvalidDimension(f'No built-in SIC fiducial for d={d}; supply one '
                           f'with a fiducial file.')


def orbit(fiducial):
    fiducial = np.asarray(fiducial, dtype=complex)
    fiducial = fiducial / np.linalg.norm(fiducial)
    return weyl_heisenberg(fiducial.size) @ fiducial


def overlap_deviation(states):
    '''Largest deviation of |<psi_j|psi_k>|^2 from (d delta_jk + 1)/(d + 1).'''
    d = states.shape[1]
    overlaps = np.abs(states.conj() @ states.T) ** 2
    target = (d * np.eye(len(states)) + 1) / (d + 1)
    return float(np.max(np.abs(overlaps - target)))


def sic_rank_one(d, fiducial=None, tol=FIDUCIAL_TOLERANCE):
    '''Rank-one SIC with outcomes |psi_j><psi_j|/d over the Weyl-Heisenberg
    orbit of the fiducial.'''
    if fiducial is None:
        fiducial = builtin_fiducial(d)
    fiducial = np.asarray(fiducial, dtype=complex).ravel()
    if fiducial.size != d:
        raise DimensionMismatch(f'Fiducial has {fiducial.size} components, '
                                f'expected {d}.')
    if not np.linalg.norm(fiducial) > 0:
        raise ConstructionError('Fiducial vector is zero.')
    states = orbit(fiducial)
    worst = overlap_deviation(states)
    log.debug(f'SIC orbit in d={d}: worst overlap deviation {worst:.3e}')
    if worst > tol:
        raise ConstructionError(f'Fiducial orbit is not equiangular: worst '
                                f'pairwise deviation {worst:.3e}', worst)
    outcomes = np.array([projector(s) / d for s in states])
    return Povm(d, outcomes, f'sic d={d}')


class plugin(family.Family):
    name = 'sic'
    accepted = ('dim', 'fiducial')

    def build(self):
        return sic_rank_one(self.params['dim'], self.params.get('fiducial'))
