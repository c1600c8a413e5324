"""
Seeded random generators.

Every random decision in the pipeline goes through a numpy ``Generator`` on the
PCG64 bit generator, so results are reproducible across platforms for a given
64-bit seed.
"""
import numpy as np

from .exceptions import ConfigurationError

MAX_SEED = 2 ** 64 - 1


def validate_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ConfigurationError(f'seed must be an integer, got {seed!r}')
    if not 0 <= int(seed) <= MAX_SEED:
        raise ConfigurationError(f'seed must be a 64-bit unsigned integer, got {seed}')
    return int(seed)


def make_rng(seed):
    """Return a PCG64-backed generator for ``seed``"""
    return np.random.Generator(np.random.PCG64(validate_seed(seed)))
