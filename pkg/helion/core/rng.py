"""
Seeded random streams

All randomness flows from an explicit 64-bit seed through numpy's PCG64 so
identical seeds give bitwise-identical results.
"""

from typing import List, Union

import numpy as np

GENERATOR_ID = f"numpy.PCG64/{np.__version__}"

SeedLike = Union[int, np.random.SeedSequence]


def seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.SeedSequence(int(seed))


def make_rng(seed: SeedLike) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_sequence(seed)))


def substreams(seed: SeedLike, count: int) -> List[np.random.Generator]:
    """Independent child generators, in spawn order"""
    return [np.random.Generator(np.random.PCG64(child)) for child in seed_sequence(seed).spawn(count)]


def child_seeds(seed: SeedLike, count: int) -> List[np.random.SeedSequence]:
    return seed_sequence(seed).spawn(count)
