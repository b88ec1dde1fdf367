"""Seeding and independent substreams.

Every random draw in the package comes from a :class:`numpy.random.Generator`
backed by PCG64 (64-bit output, 128-bit state). Replica ``i`` of a run with
master seed ``s`` uses the stream seeded by
``SeedSequence(entropy=s, spawn_key=(i,))``; SeedSequence hashes the pair
into the PCG64 state, so a replica's stream does not depend on which worker
runs it or in what order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["MAX_SEED", "check_seed", "substream", "make_rng"]

MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def substream(master_seed: int, index: int) -> np.random.Generator:
    """Generator for replica ``index`` of a run seeded with ``master_seed``."""
    master_seed = check_seed(master_seed)
    if index < 0:
        raise ValueError("substream index must be >= 0")
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def make_rng(seed) -> np.random.Generator:
    """Pass generators through; turn an integer seed into a fresh PCG64 stream."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(check_seed(seed))))
