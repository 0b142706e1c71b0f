# Operator space and superoperator algebra.
#
# Operators are d x d complex numpy arrays. An operator ket |A>> is the
# column-stacked vectorization of A (Fortran order), a 1-D array of length
# d^2. Every function in this module uses that single convention; the
# Hilbert-Schmidt inner product tr(A^dagger B) is then the ordinary complex
# inner product of the kets.
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import tolerances
from .exceptions import DimensionMismatch, HermiticityWarning, InvalidState


def _dim_of(a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f'Expected a square matrix, got shape '
                                f'{a.shape}.')
    return a.shape[0]


def _check_same_dim(a, b):
    da, db = _dim_of(a), _dim_of(b)
    if da != db:
        raise DimensionMismatch(f'Operator dimensions differ: {da} != {db}.')
    return da


def as_operator(a, tol=None, what='operator'):
    '''Return the Hermitian part (A + A^dagger)/2 of a square matrix.

    A HermiticityWarning is issued when the correction exceeds the
    hermiticity tolerance, e.g. for matrices read back from JSON.'''
    a = np.array(a, dtype=complex)
    _dim_of(a)
    tol = tolerances().hermiticity if tol is None else tol
    defect = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if defect > tol:
        warnings.warn(f'{what} deviates from Hermiticity by {defect:.3e}; '
                      f'using its Hermitian part.', HermiticityWarning,
                      stacklevel=2)
    return (a + a.conj().T) / 2


def as_density(rho, tol=None):
    '''Validate a density operator: Hermitian, unit trace, positive.'''
    tols = tolerances()
    tol = tols.positivity if tol is None else tol
    rho = as_operator(rho, what='density operator')
    trace = np.trace(rho).real
    if abs(trace - 1) > tol:
        raise InvalidState(f'Density operator has trace {trace!r}, not 1.')
    smallest = np.linalg.eigvalsh(rho)[0]
    if smallest < -tol:
        raise InvalidState(f'Density operator has negative eigenvalue '
                           f'{smallest:.3e}.')
    return rho


def purity(rho):
    return float(np.real(np.vdot(rho, rho)))


def _is_hermitian(a, tol):
    a = np.asarray(a)
    if a.size == 0:
        return True
    return bool(np.max(np.abs(a - a.conj().T)) <= tol * max(
        1.0, float(np.max(np.abs(a)))))


def hs_inner(a, b, tol=None):
    '''Hilbert-Schmidt inner product tr(a^dagger b).

    The value is returned with a zero imaginary part when both operators
    are Hermitian; an imaginary part above tol is then an error.'''
    _check_same_dim(a, b)
    tol = tolerances().hermiticity if tol is None else tol
    value = complex(np.vdot(a, b))
    if _is_hermitian(a, tol) and _is_hermitian(b, tol):
        scale = max(1.0, hs_norm(a) * hs_norm(b))
        if abs(value.imag) > tol * scale:
            raise ValueError(f'Inner product of Hermitian operators has '
                             f'imaginary part {value.imag:.3e}.')
        value = complex(value.real)
    return value


def hs_norm(a):
    return float(np.linalg.norm(a))


def vectorize(a):
    '''Column-stacking vectorization |A>>.'''
    _dim_of(a)
    return np.asarray(a, dtype=complex).reshape(-1, order='F')


def devectorize(v):
    v = np.asarray(v, dtype=complex)
    d = math.isqrt(v.size)
    if v.ndim != 1 or d * d != v.size:
        raise DimensionMismatch(f'Operator ket of length {v.size} is not '
                                f'the vectorization of a square matrix.')
    return v.reshape((d, d), order='F')


@dataclass(frozen=True, eq=False)
class Superoperator():
    '''Linear map on operators, stored as a dense d^2 x d^2 matrix acting
    on column-stacked operator kets.'''
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = math.isqrt(m.shape[0]) if m.ndim == 2 else 0
        if m.ndim != 2 or m.shape[0] != m.shape[1] or d * d != m.shape[0]:
            raise DimensionMismatch(f'Superoperator matrix must be '
                                    f'd^2 x d^2, got {m.shape}.')
        m.setflags(write=False)
        object.__setattr__(self, 'matrix', m)

    @property
    def dim(self):
        return math.isqrt(self.matrix.shape[0])

    @classmethod
    def identity(cls, d):
        return cls(np.eye(d * d, dtype=complex))

    @classmethod
    def zeros(cls, d):
        return cls(np.zeros((d * d, d * d), dtype=complex))

    def apply(self, x):
        if _dim_of(x) != self.dim:
            raise DimensionMismatch(f'Cannot apply a dimension {self.dim} '
                                    f'superoperator to a {_dim_of(x)}x'
                                    f'{_dim_of(x)} operator.')
        return devectorize(self.matrix @ vectorize(x))

    def _other(self, other):
        if not isinstance(other, Superoperator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatch(f'Superoperator dimensions differ: '
                                    f'{self.dim} != {other.dim}.')
        return other.matrix

    def __matmul__(self, other):
        m = self._other(other)
        if m is NotImplemented:
            return m
        return Superoperator(self.matrix @ m)

    def __add__(self, other):
        m = self._other(other)
        if m is NotImplemented:
            return m
        return Superoperator(self.matrix + m)

    def __sub__(self, other):
        m = self._other(other)
        if m is NotImplemented:
            return m
        return Superoperator(self.matrix - m)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return Superoperator(scalar * self.matrix)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return Superoperator(self.matrix / scalar)

    def __neg__(self):
        return Superoperator(-self.matrix)

    def adjoint(self):
        return Superoperator(self.matrix.conj().T)

    def max_abs(self):
        return float(np.max(np.abs(self.matrix)))

    def eigenvalues(self):
        '''Eigenvalues of a superoperator that is Hermitian on the operator
        ket space, in ascending order.'''
        m = self.matrix
        return np.linalg.eigvalsh((m + m.conj().T) / 2)

    def preserves_hermiticity(self, seed=0, tol=None):
        tol = tolerances().hermiticity if tol is None else tol
        rng = np.random.default_rng(seed)
        d = self.dim
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        out = self.apply(g + g.conj().T)
        return bool(np.max(np.abs(out - out.conj().T)) < tol * max(
            1.0, self.max_abs()))


def dyad(a, b):
    '''The superoperator |a>><<b|, mapping X to a * tr(b^dagger X).'''
    _check_same_dim(a, b)
    return Superoperator(np.outer(vectorize(a), vectorize(b).conj()))


def identity_ket(d):
    return vectorize(np.eye(d, dtype=complex))


def pseudoinverse(s, cutoff=None, hermitian=False):
    '''Moore-Penrose pseudoinverse; singular values below
    cutoff * (largest singular value) are treated as zero.

    hermitian=True works from the eigendecomposition of s, which must then
    be Hermitian.'''
    cutoff = tolerances().pinv_cutoff if cutoff is None else cutoff
    if not np.all(np.isfinite(s.matrix)):
        raise ValueError('Superoperator has non-finite entries.')
    if not np.any(s.matrix):
        return Superoperator.zeros(s.dim)
    if hermitian:
        return Superoperator(scipy.linalg.pinvh(s.matrix, atol=0.0,
                                                rtol=cutoff))
    return Superoperator(scipy.linalg.pinv(s.matrix, atol=0.0, rtol=cutoff))


def traceless_projector(d):
    '''P = I - |1>><<1|/d, the projector onto traceless operators.'''
    one = np.eye(d, dtype=complex)
    return Superoperator.identity(d) - dyad(one, one) / d


def traceless_projection(s):
    p = traceless_projector(s.dim)
    return p @ s @ p


def superop_trace(s, tol=None):
    tol = tolerances().hermiticity if tol is None else tol
    trace = np.trace(s.matrix)
    if abs(trace.imag) > tol * max(1.0, abs(trace.real)):
        raise ValueError(f'Superoperator trace has imaginary part '
                         f'{trace.imag:.3e}; it does not preserve '
                         f'Hermiticity.')
    return float(trace.real)


def vectorize_all(ops):
    '''Stack the kets of an (n, d, d) array of operators as rows.'''
    ops = np.asarray(ops, dtype=complex)
    return ops.transpose(0, 2, 1).reshape(ops.shape[0], -1)


def devectorize_all(kets):
    kets = np.asarray(kets, dtype=complex)
    d = math.isqrt(kets.shape[1])
    return kets.reshape(kets.shape[0], d, d).transpose(0, 2, 1)


def hermitian_part(ops):
    ops = np.asarray(ops)
    return (ops + np.swapaxes(ops, -1, -2).conj()) / 2
