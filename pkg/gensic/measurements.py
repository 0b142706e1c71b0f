# Construct, validate, read and write measurements.
#
# Constructors live in the family plugins under gensic/families and are
# re-exported here. construct() loads a family plugin by name the same way
# for every family, so new families only need a new family_<name>.py module.
import importlib
import json
import logging

import numpy as np

from .exceptions import FormatError, InvalidPovm, UsageError
from .povm import (Povm, PurityReport, ValidationReport, average_purity,
                   bloch_basis, born_probabilities, check_traces, depolarize,
                   equiangular_fit, gram_matrix, mix, outcome_purities,
                   purity_report, require_valid, validate, weighted_purity,
                   weyl_heisenberg)
from .families.family_sic import sic_rank_one
from .families.family_gen_sic_depol import generalized_sic_depolarized
from .families.family_gen_sic_simplex import generalized_sic_simplex
from .families.family_mub import mub_complete
from .families.family_cube import cube_qubit
from .families.family_random import random_minimal_ic
from .opspace import as_density
from .utils import complex_from_json, complex_to_json

log = logging.getLogger(__name__)

FAMILIES = ('sic', 'gen-sic-depol', 'gen-sic-simplex', 'mub', 'cube',
            'random')


def load_family(name, params):
    '''Instantiate the family plugin registered under name.'''
    module_name = f'.families.family_{name.replace("-", "_")}'
    try:
        module = importlib.import_module(module_name, 'gensic')
    except ImportError:
        raise UsageError(f'Unknown measurement family {name!r}; choose from '
                         f'{", ".join(FAMILIES)}.')
    return module.plugin(params)


def construct(name, params):
    '''Build the measurement of a family and check it is a valid POVM.'''
    family = load_family(name, params)
    povm = family.build()
    require_valid(povm)
    log.info(f'constructed {povm.label} with {povm.n} outcomes')
    return povm


# Measurement files:
#   {"dim": d, "label": str, "outcomes": [n x d x d [re, im] pairs]}
# Fiducial files:
#   {"dim": d, "fiducial": [d [re, im] pairs]}
# State files:
#   {"dim": d, "state": [d x d [re, im] pairs]}

def povm_to_dict(p):
    return {'dim': p.dim,
            'label': p.label,
            'outcomes': complex_to_json(p.outcomes)}


def povm_from_dict(data):
    try:
        d = int(data['dim'])
        raw = data['outcomes']
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f'Measurement document lacks a valid field: {e}')
    if d < 1:
        raise FormatError(f'Measurement dimension must be positive, got {d}.')
    outcomes = complex_from_json(raw, what='outcomes')
    if outcomes.ndim != 3 or outcomes.shape[1:] != (d, d):
        raise FormatError(f'outcomes: expected n x {d} x {d} entries, got '
                          f'shape {outcomes.shape}.')
    return Povm.from_operators(list(outcomes), str(data.get('label', '')))


def _read_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise FormatError(f'Cannot read {path}: {e}')
    except json.JSONDecodeError as e:
        raise FormatError(f'{path} is not valid JSON: {e}')


def save_povm(p, path):
    with open(path, 'w') as f:
        json.dump(povm_to_dict(p), f)
        f.write('\n')


def load_povm(path, check=True):
    '''Read a measurement file; by default reject invalid POVMs.'''
    povm = povm_from_dict(_read_json(path))
    if check:
        require_valid(povm)
    return povm


def load_fiducial(path):
    data = _read_json(path)
    try:
        d = int(data['dim'])
        raw = data['fiducial']
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f'Fiducial document lacks a valid field: {e}')
    return d, complex_from_json(raw, shape=(d,), what='fiducial')


def save_fiducial(d, fiducial, path):
    with open(path, 'w') as f:
        json.dump({'dim': d, 'fiducial': complex_to_json(fiducial)}, f)
        f.write('\n')


def load_state(path):
    data = _read_json(path)
    try:
        d = int(data['dim'])
        raw = data['state']
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f'State document lacks a valid field: {e}')
    return as_density(complex_from_json(raw, shape=(d, d), what='state'))


def save_state(rho, path):
    rho = np.asarray(rho)
    with open(path, 'w') as f:
        json.dump({'dim': rho.shape[0], 'state': complex_to_json(rho)}, f)
        f.write('\n')


__all__ = [
    'FAMILIES', 'Povm', 'PurityReport', 'ValidationReport', 'InvalidPovm',
    'average_purity', 'bloch_basis', 'born_probabilities', 'check_traces',
    'construct', 'cube_qubit', 'depolarize', 'equiangular_fit',
    'generalized_sic_depolarized', 'generalized_sic_simplex', 'gram_matrix',
    'load_family', 'load_fiducial', 'load_povm', 'load_state', 'mix',
    'mub_complete', 'outcome_purities', 'povm_from_dict', 'povm_to_dict',
    'purity_report', 'random_minimal_ic', 'require_valid', 'save_fiducial',
    'save_povm', 'save_state', 'sic_rank_one', 'validate', 'weighted_purity',
    'weyl_heisenberg',
]
