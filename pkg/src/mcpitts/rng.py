"""Seeded, platform-independent random streams.

Every generator is numpy's PCG64 fed by a :class:`numpy.random.SeedSequence`
built from a 64-bit master seed and a spawn key. Sub-streams (the x's of a
trace, the y's, trial ``k`` of an estimate, attempt ``k`` of a search) get
distinct spawn keys, so they are independent of each other and of how many
workers consume them.
"""

from __future__ import annotations

import numpy as np

SEED_MAX = 2**64 - 1

# spawn-key roots; keep stable, golden files depend on them
X_STREAM = 0
Y_STREAM = 1
SYSTEM_STREAM = 2
START_STREAM = 3
TRIAL_STREAM = 4
ATTEMPT_STREAM = 5
BITS_STREAM = 6


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must be an integer in [0, 2^64), got {seed}")
    return seed


def generator(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *key: int) -> int:
    """A child 64-bit seed, for APIs that take a plain integer seed."""
    ss = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=tuple(key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def random_bits(seed: int, length: int, *key: int) -> np.ndarray:
    """``length`` uniform bits as a uint8 array (the reference bit stream)."""
    return generator(seed, BITS_STREAM, *key).integers(0, 2, size=length, dtype=np.uint8)
