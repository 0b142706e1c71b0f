# Generalized SICs from a randomly oriented regular simplex of traceless
# Hermitian operators.
import logging

import numpy as np
import scipy.linalg

from ..exceptions import InvalidDimension
from ..povm import Povm, bloch_basis
from ..utils import haar_orthogonal, rng_stream
from ..families import family

log = logging.getLogger(__name__)


def simplex_vertices(n):
    '''n vertices of a regular simplex centred at the origin of R^(n-1),
    with v_j . v_k = delta_jk - 1/n.'''
    return scipy.linalg.null_space(np.ones((1, n)))


def generalized_sic_simplex(d, seed):
    '''Pi_j = (1 + B_j)/d^2 with B_j = t sum_a (v_j)_a T_a.

    The simplex {v_j} is rotated by a seeded Haar orthogonal matrix and t is
    the largest scale keeping every B_j >= -1, i.e. the most negative
    eigenvalue over all B_j is exactly -1.'''
    if d < 2:
        raise InvalidDimension(f'Generalized SICs need d >= 2, got {d}.')
    n = d * d
    rng = rng_stream(seed)
    vertices = simplex_vertices(n) @ haar_orthogonal(n - 1, rng)
    directions = np.einsum('ja,axy->jxy', vertices, bloch_basis(d))
    lowest = min(np.linalg.eigvalsh(b)[0] for b in directions)
    t = 1 / abs(lowest)
    log.debug(f'simplex in d={d} seed={seed}: scale {t:.6f}')
    outcomes = (np.eye(d) + t * directions) / n
    outcomes = (outcomes + outcomes.conj().transpose(0, 2, 1)) / 2
    return Povm(d, outcomes, f'gen-sic-simplex d={d} seed={seed}')


class plugin(family.Family):
    name = 'gen-sic-simplex'
    required = ('dim', 'seed')
    accepted = ('dim', 'seed')

    def build(self):
        return generalized_sic_simplex(self.params['dim'], self.params['seed'])
