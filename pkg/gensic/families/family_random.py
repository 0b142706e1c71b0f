# Random minimal informationally complete measurements.
import logging

import numpy as np

from ..config import tolerances
from ..exceptions import ConstructionError, InvalidDimension
from ..povm import Povm, gram_matrix
from ..utils import rng_stream
from ..families import family

log = logging.getLogger(__name__)


def _normalized(blocks):
    total = blocks.sum(axis=0)
    w, u = np.linalg.eigh(total)
    root = (u / np.sqrt(w)) @ u.conj().T
    outcomes = root @ blocks @ root
    return (outcomes + outcomes.conj().transpose(0, 2, 1)) / 2


def random_minimal_ic(d, seed, attempts=None, max_condition=None):
    '''d^2 outcomes S^(-1/2) G_j G_j^dagger S^(-1/2) from seeded complex
    Gaussian G_j, redrawn until the outcome Gram matrix is well conditioned.'''
    tol = tolerances()
    attempts = tol.random_attempts if attempts is None else attempts
    max_condition = (tol.random_gram_condition if max_condition is None
                     else max_condition)
    if d < 2:
        raise InvalidDimension(f'Random minimal IC measurements need d >= 2, '
                               f'got {d}.')
    n = d * d
    rng = rng_stream(seed)
    cond = float('inf')
    for attempt in range(attempts):
        g = rng.normal(size=(n, d, d)) + 1j * rng.normal(size=(n, d, d))
        p = Povm(d, _normalized(g @ g.conj().transpose(0, 2, 1)),
                 f'random d={d} seed={seed}')
        cond = np.linalg.cond(gram_matrix(p))
        if cond < max_condition:
            return p
        log.info(f'random POVM d={d} seed={seed} attempt {attempt}: Gram '
                 f'condition {cond:.3e}, redrawing')
    raise ConstructionError(f'No well conditioned random POVM after '
                            f'{attempts} attempts.', cond)


class plugin(family.Family):
    name = 'random'
    required = ('dim', 'seed')
    accepted = ('dim', 'seed')

    def build(self):
        return random_minimal_ic(self.params['dim'], self.params['seed'])
