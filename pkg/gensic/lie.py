# Structure constants of operator bases of the unitary Lie algebra.
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import tolerances
from .exceptions import RankDeficientBasis
from .tomo import AuditRecord, require_minimal_ic

log = logging.getLogger(__name__)

# Largest ||[L_j, L_k] - sum_l C_jkl L_l||_HS accepted for an expansion.
EXPANSION_TOLERANCE = 1e-9


def commutator(a, b):
    return a @ b - b @ a


@dataclass(frozen=True, eq=False)
class StructureTensor():
    '''Structure constants C[j, k, l] of [L_j, L_k] = sum_l C_jkl L_l.'''
    entries: np.ndarray
    expansion_residual: float = 0.0

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def n(self):
        return self.entries.shape[0]

    def structure_matrices(self):
        '''(C_j)_kl = C_jkl, one n x n matrix per basis element.'''
        return self.entries

    def max_real_part(self):
        return float(np.max(np.abs(self.entries.real))) if self.n else 0.0

    def to_dict(self):
        flat = self.entries.reshape(-1)
        return {'shape': list(self.entries.shape),
                'order': 'row-major',
                'expansion_residual': self.expansion_residual,
                'entries': [[float(z.real), float(z.imag)] for z in flat]}


def structure_constants(basis):
    '''Expand every commutator [L_j, L_k] in the basis by solving the Gram
    system G c = (<<L_m|[L_j, L_k]>>)_m with G_ml = <<L_m|L_l>>.

    The basis must be linearly independent and its span closed under
    commutators; C_kjl is set to -C_jkl.'''
    basis = np.asarray(basis, dtype=complex)
    n = basis.shape[0]
    flat = basis.reshape(n, -1)
    gram = flat.conj() @ flat.T
    cond = np.linalg.cond(gram)
    if not cond < tolerances().condition_ceiling:
        raise RankDeficientBasis(f'Basis Gram matrix has condition number '
                                 f'{cond:.3e}; the operators are not '
                                 f'linearly independent.')
    factor = scipy.linalg.lu_factor(gram)
    entries = np.zeros((n, n, n), dtype=complex)
    worst = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            comm = commutator(basis[j], basis[k])
            coeffs = scipy.linalg.lu_solve(factor, flat.conj() @ comm.ravel())
            entries[j, k] = coeffs
            entries[k, j] = -coeffs
            rebuilt = np.einsum('l,lab->ab', coeffs, basis)
            worst = max(worst, float(np.linalg.norm(comm - rebuilt)))
    if worst > EXPANSION_TOLERANCE:
        raise RankDeficientBasis(f'Commutators leave the span of the basis '
                                 f'(expansion residual {worst:.3e}).')
    return StructureTensor(entries, worst)


@dataclass(frozen=True)
class AntisymmetryReport():
    violation: float
    hermiticity_defect: float
    antisymmetric: bool
    consistent: bool

    def to_dict(self):
        return {'violation': self.violation,
                'hermiticity_defect': self.hermiticity_defect,
                'antisymmetric': self.antisymmetric,
                'consistent': self.consistent}


def antisymmetry_violation(t, threshold=None):
    '''Largest |C_sigma(jkl) + C_jkl| over the transpositions sigma of the
    three indices, with the equivalent structure matrix Hermiticity defect
    max_j max|C_j - C_j^dagger|.'''
    threshold = tolerances().verdict if threshold is None else threshold
    c = t.entries
    if t.n == 0 or not np.any(c):
        return AntisymmetryReport(0.0, 0.0, True, True)
    violation = float(max(np.max(np.abs(c + c.transpose(axes)))
                          for axes in ((1, 0, 2), (0, 2, 1), (2, 1, 0))))
    defect = float(np.max(np.abs(c - c.conj().transpose(0, 2, 1))))
    antisymmetric = violation < threshold
    consistent = antisymmetric == (defect < threshold)
    if not consistent:
        log.warning(f'antisymmetry violation {violation:.3e} and Hermiticity '
                    f'defect {defect:.3e} straddle the threshold {threshold}')
    return AntisymmetryReport(violation, defect, antisymmetric, consistent)


def jacobi_defect(basis, j, k, l):
    '''||[[L_j,L_k],L_l] + [[L_k,L_l],L_j] + [[L_l,L_j],L_k]||_HS.'''
    a, b, c = basis[j], basis[k], basis[l]
    total = (commutator(commutator(a, b), c)
             + commutator(commutator(b, c), a)
             + commutator(commutator(c, a), b))
    return float(np.linalg.norm(total))


def theorem4_audit(p):
    '''Complete antisymmetry of the structure constants of the outcomes
    against the generalized SIC verdict, for a minimal IC measurement.'''
    diag = require_minimal_ic(p)
    tensor = structure_constants(p.outcomes)
    report = antisymmetry_violation(tensor)
    consistent = (report.antisymmetric == diag.is_generalized_sic
                  and report.consistent)
    return AuditRecord(4, p.label, bool(consistent),
                       {'antisymmetric': report.antisymmetric,
                        'generalized_sic': diag.is_generalized_sic},
                       {'antisymmetry_violation': report.violation,
                        'hermiticity_defect': report.hermiticity_defect,
                        'generalized_sic_residual':
                            diag.residuals['generalized_sic'],
                        'expansion_residual': tensor.expansion_residual})
