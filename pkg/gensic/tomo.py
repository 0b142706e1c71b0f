# Frame superoperators, reconstruction operators, scaled mean squared
# errors and the structural classification of measurements.
#
# All MSE values are scaled: N times the mean squared Hilbert-Schmidt
# error of the estimator sum_j f_j Theta_j in the large N limit.
import logging
from dataclasses import dataclass, field

import numpy as np

from .config import tolerances
from .exceptions import (DimensionMismatch, NotInformationallyComplete,
                         NotMinimal, SmallProbability, UsageError)
from .opspace import (Superoperator, devectorize_all, dyad, hermitian_part,
                      pseudoinverse, purity, superop_trace,
                      traceless_projection, vectorize_all)
from .povm import (average_purity, born_probabilities, check_traces,
                   equiangular_fit, gram_matrix, outcome_purities)
from .utils import haar_unitary, json_float, rng_stream

log = logging.getLogger(__name__)

# Theorem audits: a bound counts as saturated below SATURATION_GAP and a
# negative gap beyond -NEGATIVE_GAP means the bound itself failed.
SATURATION_GAP = 1e-9
NEGATIVE_GAP = 1e-10


@dataclass(frozen=True, eq=False)
class ReconstructionSet():
    '''Reconstruction operators Theta_j aligned index-wise with a Povm.'''
    operators: np.ndarray

    def __post_init__(self):
        ops = np.array(self.operators, dtype=complex)
        ops.setflags(write=False)
        object.__setattr__(self, 'operators', ops)

    def __len__(self):
        return self.operators.shape[0]

    def norms_squared(self):
        '''tr(Theta_j^2) for every j.'''
        return np.real(np.einsum('jab,jba->j', self.operators,
                                 self.operators))

    def superoperator(self, p):
        '''sum_j |Theta_j>><<Pi_j|, the identity for a valid set.'''
        _check_aligned(p, self)
        return Superoperator(vectorize_all(self.operators).T
                             @ vectorize_all(p.outcomes).conj())

    def estimate(self, weights):
        return np.einsum('j,jab->ab', weights, self.operators)

    def identity_residual(self, p, probes=50, seed=0):
        '''Largest ||sum_j tr(Pi_j A) Theta_j - A||_HS over random Hermitian
        probes A.'''
        _check_aligned(p, self)
        rng = rng_stream(seed)
        worst = 0.0
        for _ in range(probes):
            g = rng.normal(size=(p.dim, p.dim)) + 1j * rng.normal(
                size=(p.dim, p.dim))
            a = g + g.conj().T
            coefficients = np.real(np.einsum('jab,ba->j', p.outcomes, a))
            worst = max(worst, float(np.linalg.norm(self.estimate(
                coefficients) - a)))
        return worst


def _check_aligned(p, theta):
    if len(theta) != p.n or theta.operators.shape[1:] != (p.dim, p.dim):
        raise DimensionMismatch(f'{len(theta)} reconstruction operators do not '
                                f'match a measurement with {p.n} outcomes in '
                                f'd={p.dim}.')


def _probabilities(p, rho):
    probs = born_probabilities(p, rho)
    floor = tolerances().probability
    j = int(np.argmin(probs))
    if probs[j] <= floor:
        raise SmallProbability(j, float(probs[j]))
    return probs


def _require_invertible(s, what='frame superoperator'):
    ceiling = tolerances().condition_ceiling
    cond = np.linalg.cond(s.matrix)
    if not cond < ceiling:
        raise NotInformationallyComplete(
            f'The {what} is singular (condition number {cond:.3e}); the '
            f'measurement is not informationally complete.', cond)
    return cond


def _inverse(s, what='frame superoperator'):
    _require_invertible(s, what)
    return np.linalg.inv(s.matrix)


def _traceless_rank_cutoff(s):
    '''Relative cutoff that keeps exactly d^2-1 eigenvalues of the Hermitian
    traceless projection of a frame superoperator of an IC measurement.'''
    values = np.sort(np.abs(np.linalg.eigvalsh(s.matrix)))[::-1]
    kept, dropped = values[-2], values[-1]
    return float(np.sqrt(kept * max(dropped, np.finfo(float).tiny))
                 / values[0])


def tight_parameters(d, average):
    '''alpha and beta of a tight IC measurement with average purity.'''
    alpha = (d * d * average - d) / (d * d - 1)
    beta = (d * d - d * average) / (d * d - 1)
    return alpha, beta


def frame_superoperator(p):
    '''F = d sum_j |Pi_j>><<Pi_j| / tr(Pi_j).'''
    traces = check_traces(p)
    kets = vectorize_all(p.outcomes)
    return Superoperator(p.dim * kets.T @ (kets.conj() / traces[:, None]))


def frame_superoperator_at(p, rho):
    '''F(rho) = sum_j |Pi_j>><<Pi_j| / p_j with p_j = tr(Pi_j rho).'''
    probs = _probabilities(p, rho)
    kets = vectorize_all(p.outcomes)
    return Superoperator(kets.T @ (kets.conj() / probs[:, None]))


def frame_inverse_trace(p):
    '''Tr(F^-1), the minimal orbit averaged sum_j tr(Pi_j)tr(Theta_j^2)/d.'''
    return float(np.real(np.trace(_inverse(frame_superoperator(p)))))


def canonical_reconstruction(p):
    '''Theta_j = d F^-1 Pi_j / tr(Pi_j).'''
    traces = check_traces(p)
    inv = _inverse(frame_superoperator(p))
    kets = vectorize_all(p.outcomes)
    theta = p.dim * (inv @ kets.T).T / traces[:, None]
    return ReconstructionSet(hermitian_part(devectorize_all(theta)))


def optimal_reconstruction(p, rho):
    '''Theta_j = F(rho)^-1 Pi_j / p_j, the state dependent reconstruction
    attaining the Cramer-Rao bound.'''
    _require_invertible(frame_superoperator(p))
    probs = _probabilities(p, rho)
    kets = vectorize_all(p.outcomes)
    theta = np.linalg.solve(frame_superoperator_at(p, rho).matrix,
                            kets.T).T / probs[:, None]
    return ReconstructionSet(hermitian_part(devectorize_all(theta)))


def scaled_mse(p, theta, rho):
    '''E(rho) = sum_j p_j tr(Theta_j^2) - tr(rho^2).'''
    _check_aligned(p, theta)
    probs = born_probabilities(p, rho)
    return float(np.dot(probs, theta.norms_squared()) - purity(rho))


def scaled_mse_matrix(p, theta, rho):
    '''C(rho) = sum_j |Theta_j>> p_j <<Theta_j| - |rho>><<rho|.'''
    _check_aligned(p, theta)
    probs = born_probabilities(p, rho)
    kets = vectorize_all(theta.operators)
    return (Superoperator(kets.T @ (kets.conj() * probs[:, None]))
            - dyad(rho, rho))


def average_scaled_mse(p, theta, purity_of_rho):
    '''Scaled MSE averaged over the unitary orbit of states with purity
    tr(rho^2) = purity_of_rho.'''
    _check_aligned(p, theta)
    _check_state_purity(p.dim, purity_of_rho)
    return float(np.dot(p.traces(), theta.norms_squared()) / p.dim
                 - purity_of_rho)


def _check_state_purity(d, value, slack=1e-12):
    if not 1 / d - slack <= value <= 1 + slack:
        raise UsageError(f'State purity must lie in [1/d, 1] = '
                         f'[{1 / d:.6g}, 1], got {value}.')


def optimal_mse(p, rho):
    '''Tr{Fbar(rho)^+}, the scaled MSE of the optimal reconstruction.

    Cross-checked against Tr{F(rho)^-1} - tr(rho^2) while F(rho) is well
    conditioned.'''
    frame = frame_superoperator_at(p, rho)
    via_pinv = superop_trace(optimal_mse_matrix(p, rho, frame))
    if np.linalg.cond(frame.matrix) < tolerances().condition_ceiling:
        via_inverse = float(np.real(np.trace(
            np.linalg.inv(frame.matrix)))) - purity(rho)
        if abs(via_inverse - via_pinv) > 1e-9 * max(1.0, abs(via_pinv)):
            log.warning(f'optimal MSE expressions disagree: {via_inverse!r} '
                        f'(inverse) vs {via_pinv!r} (pseudoinverse)')
    return via_pinv


def optimal_mse_matrix(p, rho, frame=None):
    '''C(rho) = Fbar(rho)^+.

    IC is decided on the state independent frame superoperator; the
    pseudoinverse keeps the d^2-1 traceless directions however small some
    probabilities are.'''
    _require_invertible(frame_superoperator(p))
    if frame is None:
        frame = frame_superoperator_at(p, rho)
    projected = traceless_projection(frame)
    projected = (projected + projected.adjoint()) / 2
    return pseudoinverse(projected, _traceless_rank_cutoff(projected),
                         hermitian=True)


def tight_bound(d, average, purity_of_rho):
    '''(d^2-1)^2/(d^2 P - d) - [tr(rho^2) - 1/d], the least orbit averaged
    scaled MSE of any IC measurement with average outcome purity P.'''
    if not d * d * average - d > 0:
        raise NotInformationallyComplete(
            f'Average purity {average!r} <= 1/d; the measurement cannot be '
            f'informationally complete.')
    return (d * d - 1) ** 2 / (d * d * average - d) - (purity_of_rho - 1 / d)


def sampled_mse_spread(p, samples=None, seed=None, spectrum=None):
    '''Spread (max - min) of the optimal scaled MSE over Haar conjugates
    U rho U^dagger of a state with the given spectrum (default pure).'''
    tol = tolerances()
    samples = tol.quasi_balance_samples if samples is None else samples
    seed = tol.quasi_balance_seed if seed is None else seed
    d = p.dim
    if spectrum is None:
        spectrum = np.zeros(d)
        spectrum[0] = 1
    base = np.diag(np.asarray(spectrum, dtype=complex))
    values = []
    for s in range(samples):
        u = haar_unitary(d, rng_stream(seed, s))
        values.append(optimal_mse(p, u @ base @ u.conj().T))
    return float(np.max(values) - np.min(values)), np.array(values)


@dataclass(frozen=True)
class TomoDiagnostics():
    '''Verdicts of the classification ladder with the residuals backing
    them. Verdicts that do not apply (e.g. generalized SIC for a non-minimal
    measurement) are False; fitted constants are None unless the verdict
    holds; consistency flags are None when the check does not apply.'''
    dim: int
    n_outcomes: int
    label: str
    average_purity: float
    is_ic: bool
    is_minimal: bool
    is_tight_ic: bool
    tight_alpha: float
    tight_beta: float
    is_generalized_sic: bool
    gen_alpha: float
    gen_zeta: float
    is_quasi_balanced: bool
    quasi_balanced_method: str
    is_balanced: bool
    lemma1_holds: bool = None
    lemma4_consistent: bool = None
    theorem2_consistent: bool = None
    residuals: dict = field(default_factory=dict)

    def verdicts(self):
        return {'ic': self.is_ic,
                'minimal': self.is_minimal,
                'tight_ic': self.is_tight_ic,
                'generalized_sic': self.is_generalized_sic,
                'quasi_balanced': self.is_quasi_balanced,
                'balanced': self.is_balanced}

    def to_dict(self):
        return {
            'dim': self.dim,
            'n_outcomes': self.n_outcomes,
            'label': self.label,
            'average_purity': self.average_purity,
            'verdicts': self.verdicts(),
            'tight_alpha': json_float(self.tight_alpha),
            'tight_beta': json_float(self.tight_beta),
            'gen_alpha': json_float(self.gen_alpha),
            'gen_zeta': json_float(self.gen_zeta),
            'quasi_balanced_method': self.quasi_balanced_method,
            'lemma1_holds': self.lemma1_holds,
            'lemma4_consistent': self.lemma4_consistent,
            'theorem2_consistent': self.theorem2_consistent,
            'residuals': {k: json_float(v)
                          for k, v in self.residuals.items()},
        }


def _spread(values):
    return float(np.max(values) - np.min(values))


def classify(p):
    '''Walk the ladder IC -> tight IC -> (quasi-)balanced -> generalized SIC.

    Matrix and Gram residuals are max-entry deviations divided by d and a
    property holds when its residual is below the verdict threshold.
    Quasi-balance is decided exactly for minimal measurements (equal
    reconstruction norms) and by Haar sampling of the optimal MSE otherwise.
    '''
    tol = tolerances()
    thr = tol.verdict
    d, n = p.dim, p.n
    traces = check_traces(p)
    avg = average_purity(p)
    residuals = {}

    frame = frame_superoperator(p)
    cond = float(np.linalg.cond(frame.matrix))
    residuals['frame_condition'] = cond
    is_ic = cond < tol.condition_ceiling
    is_minimal = is_ic and n == d * d

    alpha, beta = tight_parameters(d, avg)
    one = np.eye(d)
    model = alpha * Superoperator.identity(d) + beta * dyad(one, one)
    residuals['tight_ic'] = (frame - model).max_abs() / d
    is_tight = is_ic and alpha > 0 and residuals['tight_ic'] < thr

    is_gen = False
    gen_alpha = gen_zeta = None
    lemma1 = None
    if n == d * d:
        g_alpha, g_zeta, g_res = equiangular_fit(gram_matrix(p, d))
        residuals['generalized_sic'] = g_res / d
        is_gen = is_ic and residuals['generalized_sic'] < thr
        if is_gen:
            gen_alpha, gen_zeta = g_alpha, g_zeta
        target = (alpha / d * np.diag(traces)
                  + beta / d * np.outer(traces, traces))
        residuals['lemma1'] = float(np.max(np.abs(
            gram_matrix(p) - target))) / d
        lemma1 = bool(is_ic and alpha > 0 and residuals['lemma1'] < thr)

    method = None
    is_qb = False
    if is_minimal:
        norms = canonical_reconstruction(p).norms_squared()
        residuals['reconstruction_norm_spread'] = _spread(norms) / d
        is_qb = residuals['reconstruction_norm_spread'] < thr
        method = 'reconstruction-norms'
    elif is_ic:
        spread, _ = sampled_mse_spread(p)
        residuals['sampled_mse_spread'] = spread
        is_qb = spread < tol.sampled_verdict
        method = 'sampled'
    is_balanced = is_tight and is_qb

    lemma4 = None
    if is_minimal and is_tight:
        gram = gram_matrix(p)
        off = gram[~np.eye(n, dtype=bool)]
        residuals['lemma4_trace_spread'] = _spread(traces)
        residuals['lemma4_square_trace_spread'] = _spread(np.diag(gram))
        residuals['lemma4_purity_spread'] = _spread(outcome_purities(p))
        residuals['lemma4_equiangular_spread'] = _spread(off)
        conditions = [residuals[k] < thr for k in (
            'lemma4_trace_spread', 'lemma4_square_trace_spread',
            'lemma4_purity_spread', 'lemma4_equiangular_spread')]
        lemma4 = all(c == is_gen for c in conditions)
        if not lemma4:
            log.warning(f'{p.label}: Lemma 4 conditions disagree: '
                        f'{conditions} vs generalized SIC {is_gen}')

    theorem2 = None
    if is_minimal:
        theorem2 = is_balanced == is_gen
        if not theorem2:
            log.warning(f'{p.label}: balanced={is_balanced} but generalized '
                        f'SIC={is_gen}')

    return TomoDiagnostics(
        dim=d, n_outcomes=n, label=p.label, average_purity=avg,
        is_ic=bool(is_ic), is_minimal=bool(is_minimal),
        is_tight_ic=bool(is_tight),
        tight_alpha=alpha if is_tight else None,
        tight_beta=beta if is_tight else None,
        is_generalized_sic=bool(is_gen), gen_alpha=gen_alpha,
        gen_zeta=gen_zeta, is_quasi_balanced=bool(is_qb),
        quasi_balanced_method=method, is_balanced=bool(is_balanced),
        lemma1_holds=lemma1, lemma4_consistent=lemma4,
        theorem2_consistent=theorem2, residuals=residuals)


@dataclass(frozen=True)
class AuditRecord():
    '''Outcome of checking one theorem on one measurement.'''
    theorem: int
    label: str
    consistent: bool
    verdicts: dict
    values: dict

    def to_dict(self):
        return {'theorem': self.theorem,
                'label': self.label,
                'consistent': self.consistent,
                'verdicts': dict(self.verdicts),
                'values': {k: json_float(v) for k, v in self.values.items()}}


def require_ic(p):
    diag = classify(p)
    if not diag.is_ic:
        raise NotInformationallyComplete(
            f'{p.label or "measurement"} is not informationally complete '
            f'(frame condition {diag.residuals["frame_condition"]:.3e}).',
            diag.residuals['frame_condition'])
    return diag


def require_minimal_ic(p):
    if p.n != p.dim ** 2:
        raise NotMinimal(f'{p.label or "measurement"} has {p.n} outcomes; a '
                         f'minimal IC measurement in d={p.dim} has '
                         f'{p.dim ** 2}.')
    return require_ic(p)


def theorem1_audit(p, purity_of_rho):
    '''Orbit averaged canonical MSE Tr(F^-1) - tr(rho^2) against the tight
    IC bound; the gap vanishes exactly for tight IC measurements.'''
    _check_state_purity(p.dim, purity_of_rho)
    diag = require_ic(p)
    average = frame_inverse_trace(p) - purity_of_rho
    bound = tight_bound(p.dim, diag.average_purity, purity_of_rho)
    gap = average - bound
    saturated = gap < SATURATION_GAP
    consistent = gap >= -NEGATIVE_GAP and saturated == diag.is_tight_ic
    return AuditRecord(1, p.label, bool(consistent),
                       {'tight_ic': diag.is_tight_ic,
                        'saturated': bool(saturated)},
                       {'average_mse': average, 'bound': bound, 'gap': gap,
                        'tight_ic_residual': diag.residuals['tight_ic'],
                        'average_purity': diag.average_purity,
                        'state_purity': purity_of_rho})


def theorem2_audit(p):
    '''Balanced verdict against generalized SIC verdict for a minimal IC
    measurement.'''
    diag = require_minimal_ic(p)
    return AuditRecord(2, p.label, bool(diag.theorem2_consistent),
                       {'balanced': diag.is_balanced,
                        'generalized_sic': diag.is_generalized_sic,
                        'tight_ic': diag.is_tight_ic,
                        'quasi_balanced': diag.is_quasi_balanced},
                       {'generalized_sic_residual':
                            diag.residuals['generalized_sic'],
                        'tight_ic_residual': diag.residuals['tight_ic'],
                        'reconstruction_norm_spread':
                            diag.residuals['reconstruction_norm_spread']})


def maximal_orbit_mse(p, theta, spectrum):
    '''Exact maximum of the scaled MSE over U rho U^dagger for rho with the
    given spectrum: the largest eigenvalues of M = sum_j tr(Theta_j^2) Pi_j
    paired with the largest eigenvalues of rho.'''
    _check_aligned(p, theta)
    m = np.einsum('j,jab->ab', theta.norms_squared(), p.outcomes)
    mu = np.sort(np.linalg.eigvalsh(hermitian_part(m)))[::-1]
    lam = np.sort(np.asarray(spectrum, dtype=float))[::-1]
    return float(np.dot(lam, mu) - np.dot(lam, lam))


def _spectrum(d, spectrum):
    if spectrum is None:
        spectrum = np.zeros(d)
        spectrum[0] = 1
    spectrum = np.asarray(spectrum, dtype=float)
    if (spectrum.shape != (d,) or np.any(spectrum < -1e-12)
            or abs(spectrum.sum() - 1) > 1e-10):
        raise UsageError(f'Spectrum must hold {d} non-negative values '
                         f'summing to 1.')
    return spectrum


def theorem3_audit(p, spectrum=None):
    '''Maximal scaled MSE over a unitary orbit against the generalized SIC
    value; the bound is attained only by generalized SICs.'''
    diag = require_minimal_ic(p)
    spectrum = _spectrum(p.dim, spectrum)
    state_purity = float(np.dot(spectrum, spectrum))
    maximum = maximal_orbit_mse(p, canonical_reconstruction(p), spectrum)
    bound = tight_bound(p.dim, diag.average_purity, state_purity)
    gap = maximum - bound
    saturated = gap < SATURATION_GAP
    consistent = (gap >= -NEGATIVE_GAP
                  and saturated == diag.is_generalized_sic)
    return AuditRecord(3, p.label, bool(consistent),
                       {'generalized_sic': diag.is_generalized_sic,
                        'saturated': bool(saturated)},
                       {'maximal_mse': maximum, 'bound': bound, 'gap': gap,
                        'average_purity': diag.average_purity,
                        'state_purity': state_purity})
