# Measurement values and the checks every constructor and reader relies on.
from dataclasses import dataclass

import numpy as np

from .config import tolerances
from .exceptions import (DimensionMismatch, InvalidPovm, UsageError,
                         ZeroTraceOutcome)
from .opspace import as_operator


@dataclass(frozen=True, eq=False)
class Povm():
    '''An ordered list of n positive operators on a d dimensional space.

    Parameters
    ----------
    dim: Hilbert space dimension d.
    outcomes: Array of shape (n, d, d) holding the outcomes Pi_j. A read-only
              copy is stored.
    label: Free-form description written to measurement files.

    Positivity and completeness are not enforced here; see validate().
    '''
    dim: int
    outcomes: np.ndarray
    label: str = ''

    def __post_init__(self):
        outcomes = np.array(self.outcomes, dtype=complex)
        if outcomes.ndim != 3 or outcomes.shape[1:] != (self.dim, self.dim):
            raise DimensionMismatch(f'Outcomes must have shape (n, {self.dim},'
                                    f' {self.dim}), got {outcomes.shape}.')
        if outcomes.shape[0] < 1:
            raise InvalidPovm('A measurement needs at least one outcome.')
        outcomes.setflags(write=False)
        object.__setattr__(self, 'outcomes', outcomes)
        object.__setattr__(self, 'dim', int(self.dim))

    @classmethod
    def from_operators(cls, operators, label=''):
        '''Build from a list of matrices, replacing each by its Hermitian
        part (with a warning when the correction is not negligible).'''
        operators = [as_operator(op, what=f'outcome {j}')
                     for j, op in enumerate(operators)]
        if not operators:
            raise InvalidPovm('A measurement needs at least one outcome.')
        return cls(operators[0].shape[0], np.array(operators), label)

    @property
    def n(self):
        return self.outcomes.shape[0]

    def __len__(self):
        return self.n

    @property
    def is_minimal(self):
        return self.n == self.dim ** 2

    def traces(self):
        return np.real(np.einsum('jaa->j', self.outcomes))

    def total(self):
        return self.outcomes.sum(axis=0)


@dataclass(frozen=True)
class ValidationReport():
    n_outcomes: int
    hermiticity_deviation: float
    min_eigenvalue: float
    completeness_deviation: float
    completeness_gap_norm: float
    passed: bool
    violations: tuple = ()

    def to_dict(self):
        return {
            'n_outcomes': self.n_outcomes,
            'hermiticity_deviation': self.hermiticity_deviation,
            'min_eigenvalue': self.min_eigenvalue,
            'completeness_deviation': self.completeness_deviation,
            'completeness_gap_norm': self.completeness_gap_norm,
            'passed': self.passed,
            'violations': list(self.violations),
        }


def validate(p, tol=None):
    '''Report Hermiticity, positivity and completeness deviations.

    completeness_deviation is the largest entrywise deviation of the outcome
    sum from the identity; completeness_gap_norm is the HS norm of that gap.
    '''
    tol = tolerances() if tol is None else tol
    ops = p.outcomes
    herm = float(np.max(np.abs(ops - ops.conj().transpose(0, 2, 1))))
    hermitian = (ops + ops.conj().transpose(0, 2, 1)) / 2
    min_eig = float(min(np.linalg.eigvalsh(op)[0] for op in hermitian))
    gap = p.total() - np.eye(p.dim)
    deviation = float(np.max(np.abs(gap)))
    gap_norm = float(np.linalg.norm(gap))
    violations = []
    if herm > tol.hermiticity:
        violations.append(f'hermiticity deviation {herm:.3e}')
    if min_eig < -tol.positivity:
        violations.append(f'negative eigenvalue {min_eig:.3e}')
    if deviation > tol.completeness:
        violations.append(f'outcomes do not sum to identity: deviation '
                          f'{deviation:.3e}, gap norm {gap_norm:.3e}')
    return ValidationReport(p.n, herm, min_eig, deviation, gap_norm,
                            not violations, tuple(violations))


def require_valid(p, tol=None):
    report = validate(p, tol)
    if not report.passed:
        raise InvalidPovm('Invalid measurement: ' + '; '.join(
            report.violations), report)
    return report


def check_traces(p, tol=None):
    '''Outcome traces, rejecting zero-trace outcomes.'''
    tol = tolerances().positivity if tol is None else tol
    traces = p.traces()
    for j, t in enumerate(traces):
        if t <= tol:
            raise ZeroTraceOutcome(j)
    return traces


def born_probabilities(p, rho):
    if rho.shape != (p.dim, p.dim):
        raise DimensionMismatch(f'State of shape {rho.shape} does not match '
                                f'a dimension {p.dim} measurement.')
    return np.real(np.einsum('jab,ba->j', p.outcomes, rho))


@dataclass(frozen=True)
class PurityReport():
    '''Outcome purities tr(Pi_j^2)/tr(Pi_j)^2 and their averages.'''
    per_outcome: tuple
    average: float
    weighted: float = None

    def to_dict(self):
        return {'per_outcome_purity': list(self.per_outcome),
                'average_purity': self.average,
                'weighted_purity': self.weighted}


def outcome_purities(p):
    traces = check_traces(p)
    squares = np.real(np.einsum('jab,jba->j', p.outcomes, p.outcomes))
    return squares / traces ** 2


def average_purity(p):
    return float(np.dot(p.traces(), outcome_purities(p)) / p.dim)


def weighted_purity(p, rho):
    '''Probability weighted purity sum_j p_j purity_j at the state rho.'''
    return float(np.dot(born_probabilities(p, rho), outcome_purities(p)))


def purity_report(p, rho=None):
    purities = outcome_purities(p)
    average = float(np.dot(p.traces(), purities) / p.dim)
    weighted = None if rho is None else weighted_purity(p, rho)
    return PurityReport(tuple(float(x) for x in purities), average, weighted)


def gram_matrix(p, scale=1.0):
    '''Real Gram matrix tr(A_j A_k) of the rescaled outcomes A_j = scale Pi_j.'''
    flat = scale * p.outcomes.reshape(p.n, -1)
    return np.real(flat.conj() @ flat.T)


def equiangular_fit(gram):
    '''Fit gram to alpha*delta_jk + zeta; return (alpha, zeta, residual).'''
    n = gram.shape[0]
    if n == 1:
        return float(gram[0, 0]), 0.0, 0.0
    off = gram[~np.eye(n, dtype=bool)]
    zeta = float(off.mean())
    alpha = float(np.diag(gram).mean() - zeta)
    residual = float(np.max(np.abs(gram - alpha * np.eye(n) - zeta)))
    return alpha, zeta, residual


def depolarize(p, y, label=None):
    '''Mix every outcome with white noise: Pi_j -> y Pi_j + (1-y) tr(Pi_j)/d.

    Traces, positivity and completeness are preserved for 0 < y <= 1.'''
    if not 0 < y <= 1:
        raise UsageError(f'Depolarizing weight must lie in (0, 1], got {y}.')
    if y == 1 and label is None:
        return p
    noise = np.einsum('j,ab->jab', p.traces() / p.dim, np.eye(p.dim))
    outcomes = y * p.outcomes + (1 - y) * noise
    label = f'{p.label} depolarized y={y}'.strip() if label is None else label
    return Povm(p.dim, outcomes, label)


def mix(p, q, weight, label=None):
    '''Outcome-wise convex mixture (1-weight) p + weight q.'''
    if p.dim != q.dim or p.n != q.n:
        raise DimensionMismatch('Mixed measurements need equal dimension and '
                                'outcome count.')
    if not 0 <= weight <= 1:
        raise UsageError(f'Mixing weight must lie in [0, 1], got {weight}.')
    outcomes = (1 - weight) * p.outcomes + weight * q.outcomes
    label = f'{p.label} mixed w={weight}'.strip() if label is None else label
    return Povm(p.dim, outcomes, label)


def bloch_basis(d):
    '''Orthonormal basis of traceless Hermitian operators, tr(T_a T_b) =
    delta_ab, built from the generalized Gell-Mann matrices.'''
    basis = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1
            anti = np.zeros((d, d), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            basis += [sym / np.sqrt(2), anti / np.sqrt(2)]
    for j in range(1, d):
        diag = np.zeros(d)
        diag[:j] = 1
        diag[j] = -j
        basis.append(np.diag(diag / np.sqrt(j * (j + 1))).astype(complex))
    return np.array(basis)


def weyl_heisenberg(d):
    '''Displacement operators X^a Z^b, a-major order, with X|k> = |k+1>
    and Z|k> = w^k |k>, w = exp(2 pi i / d).'''
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    ops = []
    for a in range(d):
        for b in range(d):
            ops.append(np.linalg.matrix_power(shift, a)
                       @ np.linalg.matrix_power(clock, b))
    return np.array(ops)


def projector(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())
