# The qubit cube measurement: two antipodal tetrahedral SICs, each at
# weight 1/2.
import numpy as np

from ..exceptions import UsageError
from ..povm import Povm
from ..families import family

PAULI = np.array([[[0, 1], [1, 0]],
                  [[0, -1j], [1j, 0]],
                  [[1, 0], [0, -1]]], dtype=complex)

TETRAHEDRON = np.array([[1, 1, 1],
                        [1, -1, -1],
                        [-1, 1, -1],
                        [-1, -1, 1]]) / np.sqrt(3)


def bloch_projector(n):
    return (np.eye(2) + np.einsum('a,axy->xy', n, PAULI)) / 2


def cube_qubit():
    vertices = np.concatenate([TETRAHEDRON, -TETRAHEDRON])
    outcomes = np.array([bloch_projector(n) / 4 for n in vertices])
    return Povm(2, outcomes, 'cube d=2')


class plugin(family.Family):
    name = 'cube'
    required = ()

    def check_params(self):
        super().check_params()
        if self.params.get('dim', 2) != 2:
            raise UsageError('The cube measurement is defined for d=2 only.')

    def build(self):
        return cube_qubit()
