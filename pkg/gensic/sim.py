# Monte Carlo tomography.
#
# Each repetition draws N outcomes from the Born distribution, forms the
# frequencies f_j = counts_j / N and the linear estimate sum_j f_j Theta_j.
# Repetition r uses the random stream (seed, r), so results do not depend
# on how repetitions are scheduled across workers.
import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, UsageError
from .opspace import as_density, hermitian_part, purity
from .povm import Povm, average_purity, born_probabilities, depolarize
from .tomo import (average_scaled_mse, canonical_reconstruction,
                   optimal_mse, optimal_reconstruction, scaled_mse)
from .utils import complex_to_json, haar_unitary, json_float, rng_stream

log = logging.getLogger(__name__)

RECONSTRUCTIONS = ('canonical', 'optimal')
CSV_COLUMNS = ('d', 'label', 'purity', 'N', 'R', 'empirical', 'stderr',
               'analytic')
ACCEPTANCE_SIGMA = 3.0

BIAS_NOTE = ('Reconstruction operators are fixed before sampling, so the '
             'linear estimator is unbiased and N * E||rho_hat - rho||^2 equals '
             'the analytic scaled MSE at every N; the finite-shot bias is '
             'zero and the residual difference is statistical.')


@dataclass(frozen=True, eq=False)
class Experiment():
    '''One tomography experiment: R repetitions of N shots each.

    reconstruction is 'canonical' (state independent) or 'optimal' (the
    Cramer-Rao attaining operators evaluated at the true state).'''
    povm: Povm
    rho: np.ndarray
    shots: int
    repetitions: int
    seed: int
    reconstruction: str = 'canonical'

    def __post_init__(self):
        if int(self.shots) < 1 or int(self.repetitions) < 1:
            raise UsageError(f'Shots and repetitions must be positive, got '
                             f'N={self.shots}, R={self.repetitions}.')
        if self.reconstruction not in RECONSTRUCTIONS:
            raise UsageError(f'Unknown reconstruction {self.reconstruction!r}.')
        rho = as_density(self.rho)
        if rho.shape != (self.povm.dim, self.povm.dim):
            raise DimensionMismatch(f'State of shape {rho.shape} does not '
                                    f'match d={self.povm.dim}.')
        rho.setflags(write=False)
        object.__setattr__(self, 'rho', rho)
        object.__setattr__(self, 'shots', int(self.shots))
        object.__setattr__(self, 'repetitions', int(self.repetitions))

    def reconstruction_set(self):
        if self.reconstruction == 'optimal':
            return optimal_reconstruction(self.povm, self.rho)
        return canonical_reconstruction(self.povm)

    def to_dict(self):
        return {'dim': self.povm.dim,
                'label': self.povm.label,
                'shots': self.shots,
                'repetitions': self.repetitions,
                'seed': self.seed,
                'reconstruction': self.reconstruction,
                'state_purity': purity(self.rho),
                'state': complex_to_json(self.rho)}


@dataclass(frozen=True, eq=False)
class SimResult():
    experiment: Experiment
    empirical_scaled_mse: float
    analytic_scaled_mse: float
    standard_error: float
    per_repetition: tuple
    z_score: float
    within_tolerance: bool
    finite_shot_bias: float = 0.0
    bias_note: str = BIAS_NOTE

    def to_dict(self):
        return {'experiment': self.experiment.to_dict(),
                'empirical_scaled_mse': self.empirical_scaled_mse,
                'analytic_scaled_mse': self.analytic_scaled_mse,
                'standard_error': json_float(self.standard_error),
                'z_score': json_float(self.z_score),
                'within_tolerance': self.within_tolerance,
                'acceptance_sigma': ACCEPTANCE_SIGMA,
                'finite_shot_bias': self.finite_shot_bias,
                'bias_note': self.bias_note,
                'per_repetition': list(self.per_repetition)}

    def csv_row(self):
        e = self.experiment
        return {'d': e.povm.dim,
                'label': e.povm.label,
                'purity': average_purity(e.povm),
                'N': e.shots,
                'R': e.repetitions,
                'empirical': self.empirical_scaled_mse,
                'stderr': self.standard_error,
                'analytic': self.analytic_scaled_mse}


def _multinomial(probs, shots, rng):
    '''Counts of N draws by inverse CDF lookup of uniform variates.'''
    probs = np.clip(probs, 0, None)
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(shots), side='right')
    return np.bincount(np.minimum(idx, probs.size - 1), minlength=probs.size)


def _frequencies(probs, shots, seed, rep):
    return _multinomial(probs, shots, rng_stream(seed, rep)) / shots


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def sample_frequencies(e, workers=None):
    '''R frequency vectors, one row per repetition.'''
    probs = born_probabilities(e.povm, e.rho)
    rows = _map(lambda r: _frequencies(probs, e.shots, e.seed, r),
                range(e.repetitions), workers)
    return np.array(rows)


def linear_estimate(f, theta):
    '''rho_hat = sum_j f_j Theta_j. Unit trace is checked, positivity is
    not guaranteed by linear estimators.'''
    f = np.asarray(f, dtype=float)
    if f.shape != (len(theta),):
        raise DimensionMismatch(f'{f.size} frequencies for {len(theta)} '
                                f'reconstruction operators.')
    estimate = hermitian_part(theta.estimate(f))
    defect = abs(np.trace(estimate).real - f.sum())
    if defect > 1e-10:
        log.warning(f'estimate trace deviates from sum(f) by {defect:.3e}')
    return estimate


def run(e, workers=None):
    '''Empirical scaled MSE N * mean ||rho_hat - rho||_HS^2 against the
    analytic value sum_j p_j tr(Theta_j^2) - tr(rho^2).'''
    theta = e.reconstruction_set()
    analytic = scaled_mse(e.povm, theta, e.rho)
    probs = born_probabilities(e.povm, e.rho)

    def repetition(r):
        f = _frequencies(probs, e.shots, e.seed, r)
        err = linear_estimate(f, theta) - e.rho
        return e.shots * float(np.real(np.vdot(err, err)))

    values = np.array(_map(repetition, range(e.repetitions), workers))
    empirical = float(values.mean())
    if e.repetitions > 1:
        stderr = float(values.std(ddof=1) / math.sqrt(e.repetitions))
    else:
        stderr = float('nan')
    if stderr > 0:
        z = (empirical - analytic) / stderr
    else:
        z = 0.0 if empirical == analytic else float('nan')
    within = bool(abs(z) <= ACCEPTANCE_SIGMA) if math.isfinite(z) else False
    log.info(f'{e.povm.label}: empirical {empirical:.6g} +- {stderr:.3g}, '
             f'analytic {analytic:.6g}')
    return SimResult(e, empirical, analytic, stderr, tuple(values.tolist()),
                     z, within)


def haar_state(d, seed, spectrum=None):
    '''Random state: a Haar random pure state when spectrum is None,
    otherwise U diag(spectrum) U^dagger with U Haar random.'''
    rng = rng_stream(seed)
    if spectrum is None:
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        v /= np.linalg.norm(v)
        return np.outer(v, v.conj())
    spectrum = np.asarray(spectrum, dtype=float)
    if (spectrum.shape != (d,) or np.any(spectrum < 0)
            or abs(spectrum.sum() - 1) > 1e-12):
        raise UsageError(f'Spectrum must hold {d} non-negative values summing '
                         f'to 1.')
    u = haar_unitary(d, rng)
    return hermitian_part((u * spectrum) @ u.conj().T)


@dataclass(frozen=True, eq=False)
class OrbitAverage():
    mean: float
    standard_error: float
    spread: float
    values: tuple
    closed_form: float = None

    def to_dict(self):
        return {'mean': self.mean,
                'standard_error': self.standard_error,
                'spread': self.spread,
                'closed_form': self.closed_form,
                'samples': len(self.values)}


def orbit_average_mse(p, spectrum, samples, seed, reconstruction='canonical'):
    '''Monte Carlo average of the scaled MSE over Haar conjugates of a state
    with the given spectrum. The canonical closed form is reported with it.'''
    if reconstruction not in RECONSTRUCTIONS:
        raise UsageError(f'Unknown reconstruction {reconstruction!r}.')
    if samples < 1:
        raise UsageError('At least one sample is required.')
    spectrum = np.asarray(spectrum, dtype=float)
    closed_form = None
    if reconstruction == 'canonical':
        theta = canonical_reconstruction(p)
        closed_form = average_scaled_mse(p, theta,
                                         float(np.dot(spectrum, spectrum)))
    values = []
    for s in range(samples):
        rho = haar_state(p.dim, (seed, s), spectrum)
        if reconstruction == 'canonical':
            values.append(scaled_mse(p, theta, rho))
        else:
            values.append(optimal_mse(p, rho))
    values = np.array(values)
    stderr = (float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1
              else float('nan'))
    return OrbitAverage(float(values.mean()), stderr,
                        float(values.max() - values.min()),
                        tuple(values.tolist()), closed_form)


def purity_matched(p, target, label=None):
    '''Depolarize p so that its average purity equals target.

    Depolarizing with weight y maps the average purity P to
    y^2 P + (1 - y^2)/d, which is inverted exactly.'''
    d = p.dim
    current = average_purity(p)
    if not 1 / d < target <= current + 1e-12:
        raise UsageError(f'Target purity {target} is outside (1/d, '
                         f'{current:.12g}] for {p.label or "this POVM"}.')
    y = math.sqrt(min(1.0, (target - 1 / d) / (current - 1 / d)))
    label = (f'{p.label} purity={target:.6g}'.strip() if label is None
             else label)
    return depolarize(p, y, label=label)


@dataclass(frozen=True)
class Comparison():
    label: str
    reference_mean: float
    reference_stderr: float
    contender_mean: float
    contender_stderr: float
    margin_sigma: float
    flagged: bool

    def to_dict(self):
        return {'label': self.label,
                'reference_mean': self.reference_mean,
                'reference_stderr': json_float(self.reference_stderr),
                'contender_mean': self.contender_mean,
                'contender_stderr': json_float(self.contender_stderr),
                'margin_sigma': json_float(self.margin_sigma),
                'flagged': self.flagged}


def efficiency_comparison(reference, contenders, spectrum=None, samples=200,
                          seed=0):
    '''Compare orbit averaged canonical MSEs at a common average purity.

    Every measurement is depolarized to the smallest average purity among
    them; a contender is flagged unless the reference beats it by at least
    ACCEPTANCE_SIGMA combined standard errors.'''
    d = reference.dim
    if spectrum is None:
        spectrum = np.zeros(d)
        spectrum[0] = 1
    target = min(average_purity(m) for m in [reference, *contenders])
    ref = orbit_average_mse(purity_matched(reference, target), spectrum,
                            samples, seed)
    results = []
    for c in contenders:
        matched = purity_matched(c, target)
        avg = orbit_average_mse(matched, spectrum, samples, seed)
        scale = math.sqrt(ref.standard_error ** 2 + avg.standard_error ** 2)
        diff = avg.mean - ref.mean
        margin = diff / scale if scale > 0 else (
            float('inf') if diff > 0 else float('-inf'))
        results.append(Comparison(matched.label, ref.mean, ref.standard_error,
                                  avg.mean, avg.standard_error, margin,
                                  not margin >= ACCEPTANCE_SIGMA))
    return results


def sweep(base, grid, rho, shots, repetitions, seed, mode='x',
          reconstruction='canonical', workers=None):
    '''Simulate depolarized versions of base over a grid of depolarizing
    weights (mode 'x') or average purities (mode 'purity').'''
    if mode not in ('x', 'purity'):
        raise UsageError(f'Unknown sweep mode {mode!r}.')
    rows = []
    for i, value in enumerate(grid):
        if mode == 'x':
            povm = depolarize(base, value, label=f'{base.label} x={value}')
        else:
            povm = purity_matched(base, value)
        e = Experiment(povm, rho, shots, repetitions, (seed, i),
                       reconstruction)
        rows.append(run(e, workers).csv_row())
    return rows


def write_csv(rows, stream):
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
