"""Deterministic random streams derived from one master seed"""
from typing import List, Union

import numpy as np

Seed = Union[int, np.random.SeedSequence, np.random.Generator, None]


def as_generator(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn(seed: Union[int, np.random.SeedSequence], count: int) -> List[np.random.SeedSequence]:
    """Child seeds in a fixed order; the same master always yields the same children"""
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return sequence.spawn(count)
