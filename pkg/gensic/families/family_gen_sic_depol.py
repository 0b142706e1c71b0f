# Generalized SICs obtained by mixing a rank-one SIC with white noise.
import numpy as np

from ..exceptions import ConstructionError, UsageError
from ..povm import depolarize, gram_matrix
from ..families import family
from .family_sic import sic_rank_one

RANK_ONE_TOLERANCE = 1e-6


def rank_one_sic_residual(p):
    '''Largest deviation of tr(P_j P_k), P_j = d Pi_j, from the rank-one SIC
    pattern (d delta_jk + 1)/(d + 1). Infinite when n != d^2.'''
    d = p.dim
    if p.n != d * d:
        return float('inf')
    target = (d * np.eye(p.n) + 1) / (d + 1)
    return float(np.max(np.abs(gram_matrix(p, d) - target)))


def generalized_sic_depolarized(base, x):
    '''Pi_j = x Pi~_j + (1 - x)/d^2 for a rank-one SIC {Pi~_j}.'''
    if not 0 < x <= 1:
        raise UsageError(f'Depolarizing parameter x must lie in (0, 1], '
                         f'got {x}.')
    residual = rank_one_sic_residual(base)
    if residual > RANK_ONE_TOLERANCE:
        raise ConstructionError(f'Base measurement is not a rank-one SIC '
                                f'(residual {residual:.3e}).', residual)
    if x == 1:
        return base
    return depolarize(base, x, label=f'gen-sic-depol d={base.dim} x={x}')


class plugin(family.Family):
    name = 'gen-sic-depol'
    required = ('dim', 'x')
    accepted = ('dim', 'x', 'fiducial')

    def build(self):
        base = sic_rank_one(self.params['dim'], self.params.get('fiducial'))
        return generalized_sic_depolarized(base, float(self.params['x']))
