# Complete sets of mutually unbiased bases in prime dimension.
import numpy as np

from ..exceptions import InvalidDimension
from ..povm import Povm, projector
from ..utils import is_prime
from ..families import family


def mub_bases(d):
    '''d + 1 mutually unbiased bases as a (d+1, d, d) array of row vectors.

    d = 2 uses the eigenbases of Z, X and Y. For odd prime d the
    computational basis is followed by the bases with components
    w^(k l^2 + m l)/sqrt(d), w = exp(2 pi i/d), basis k, vector m.'''
    if not is_prime(d):
        raise InvalidDimension(f'dimension must be prime, got {d}.')
    if d == 2:
        s = 1 / np.sqrt(2)
        return np.array([[[1, 0], [0, 1]],
                         [[s, s], [s, -s]],
                         [[s, 1j * s], [s, -1j * s]]], dtype=complex)
    omega = np.exp(2j * np.pi / d)
    l = np.arange(d)
    bases = [np.eye(d, dtype=complex)]
    for k in range(d):
        bases.append(np.array([omega ** ((k * l * l + m * l) % d)
                               for m in range(d)]) / np.sqrt(d))
    return np.array(bases)


def mub_complete(d):
    '''Measurement with outcomes |e><e|/(d + 1) over a complete MUB set.'''
    vectors = mub_bases(d).reshape(-1, d)
    outcomes = np.array([projector(v) / (d + 1) for v in vectors])
    return Povm(d, outcomes, f'mub d={d}')


class plugin(family.Family):
    name = 'mub'

    def build(self):
        return mub_complete(self.params['dim'])
