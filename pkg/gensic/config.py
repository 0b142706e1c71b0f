# Numerical tolerances shared by every module.
#
# Defaults are read from the packaged config.yml. A user YAML file can
# override any subset of keys and the verdict threshold alone can be
# overridden from the environment.
#
# The active record is process wide. Tolerances is frozen, so readers on any
# thread only ever see a complete record; configure() swaps in a new one and
# belongs at program start (the CLI calls it once before any computation).
import os
from dataclasses import dataclass, fields, replace

import yaml

from .exceptions import ConfigError

TOLERANCE_ENVVAR = 'GENSIC_TOLERANCE'
DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                              'config.yml')


@dataclass(frozen=True)
class Tolerances():
    '''Tolerances and thresholds used for numerical verdicts.

    Parameters
    ----------
    hermiticity: Largest entrywise |A - A^dagger| accepted silently.
    positivity: Most negative eigenvalue still counted as positive.
    completeness: Largest entrywise deviation of the outcome sum from 1.
    probability: Smallest Born probability accepted by F(rho).
    pinv_cutoff: Relative singular value cutoff of the pseudoinverse.
    condition_ceiling: Condition number above which a frame or Gram
                       matrix is declared singular.
    verdict: Residual below which a structural property holds.
    sampled_verdict: Spread below which a sampled invariance holds.
    random_gram_condition: Gram condition accepted for random POVMs.
    random_attempts: Retry budget of the random POVM constructor.
    quasi_balance_samples: Haar samples of the sampled quasi-balance test.
    quasi_balance_seed: Seed of the sampled quasi-balance test.
    '''
    hermiticity: float = 1e-10
    positivity: float = 1e-10
    completeness: float = 1e-9
    probability: float = 1e-12
    pinv_cutoff: float = 1e-10
    condition_ceiling: float = 1e8
    verdict: float = 1e-8
    sampled_verdict: float = 1e-7
    random_gram_condition: float = 1e6
    random_attempts: int = 50
    quasi_balance_samples: int = 200
    quasi_balance_seed: int = 2014


def _read_yaml(path):
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f'Cannot read configuration file {path}: {e}')
    except yaml.YAMLError as e:
        raise ConfigError(f'Malformed configuration file {path}: {e}')
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f'Configuration file {path} must hold a mapping.')
    return data


def _coerce(values, source):
    known = {f.name: f.type for f in fields(Tolerances)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f'Unknown tolerance keys in {source}: {unknown}')
    coerced = {}
    for key, value in values.items():
        cast = int if known[key] in (int, 'int') else float
        try:
            coerced[key] = cast(value)
        except (TypeError, ValueError):
            raise ConfigError(f'Tolerance {key} in {source} is not a number: '
                              f'{value!r}')
    return coerced


def load_tolerances(path=None, environ=None):
    '''Build a Tolerances record from the packaged defaults, an optional
    user file and the environment.'''
    environ = os.environ if environ is None else environ
    tol = replace(Tolerances(), **_coerce(_read_yaml(DEFAULT_CONFIG),
                                          DEFAULT_CONFIG))
    if path:
        tol = replace(tol, **_coerce(_read_yaml(path), path))
    override = environ.get(TOLERANCE_ENVVAR)
    if override:
        try:
            verdict = float(override)
        except ValueError:
            raise ConfigError(f'{TOLERANCE_ENVVAR} must be a number, '
                              f'got {override!r}')
        if verdict <= 0:
            raise ConfigError(f'{TOLERANCE_ENVVAR} must be positive.')
        tol = replace(tol, verdict=verdict)
    return tol


_active = None


def tolerances():
    '''Return the active tolerances, loading the defaults on first use.'''
    global _active
    if _active is None:
        _active = load_tolerances()
    return _active


def configure(path=None):
    '''Replace the active tolerances (used by the CLI --config flag).'''
    global _active
    _active = load_tolerances(path)
    return _active
