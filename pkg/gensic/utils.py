import math
import os
from contextlib import contextmanager

import numpy as np
import scipy.linalg

from .exceptions import FormatError


@contextmanager
def pushd(newDir):
    '''Context manager function for shell-like pushd functionality

    Allows for constructs like:
    with pushd(directory):
        'code'...
    When 'code' is finished, the working directory is restored to what it
    was when pushd was invoked.'''
    previousDir = os.getcwd()
    os.chdir(newDir)
    try:
        yield
    finally:
        os.chdir(previousDir)


def rng_stream(seed, *keys):
    '''Deterministic numpy Generator for a seed and optional stream keys.

    rng_stream(seed, r) gives repetition r its own stream, so results do not
    depend on the order in which repetitions are evaluated. A tuple seed is
    treated as a seed followed by stream keys.'''
    if seed is None:
        raise ValueError('A seed is required for reproducible sampling.')
    parts = list(seed) if isinstance(seed, (tuple, list)) else [seed]
    entropy = [int(k) & 0xFFFFFFFFFFFFFFFF for k in [*parts, *keys]]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def json_float(x):
    '''Finite floats unchanged; None, nan and inf become None.'''
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


# Complex numbers are written as [re, im] pairs.

def complex_to_json(values):
    values = np.asarray(values, dtype=complex)
    if values.ndim == 0:
        return [float(values.real), float(values.imag)]
    return [complex_to_json(v) for v in values]


def complex_from_json(data, shape=None, what='array'):
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise FormatError(f'{what}: entries must be [re, im] number pairs.')
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise FormatError(f'{what}: entries must be [re, im] pairs.')
    values = arr[..., 0] + 1j * arr[..., 1]
    if shape is not None and values.shape != tuple(shape):
        raise FormatError(f'{what}: expected shape {tuple(shape)}, '
                          f'got {values.shape}.')
    return values


def haar_unitary(d, rng):
    '''Haar random unitary: QR of a Ginibre matrix with the phases of
    diag(R) divided out.'''
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = scipy.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def haar_orthogonal(n, rng):
    '''Haar random orthogonal matrix, QR with sign-fixed diagonal.'''
    q, r = scipy.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))
