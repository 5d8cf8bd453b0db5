"""
Seeded randomness.

A single integer seed is expanded through numpy's SeedSequence into named,
independent generator streams, one per protocol phase.
"""
from typing import Dict, Iterable

import numpy as np

# Order matters: changing it changes every transcript for a given seed
PHASE_STREAMS = ('distribution', 'blackbox', 'forgery', 'channel', 'recovery')


def make_rng(seed: int) -> np.random.Generator:
    """Create a generator from an integer seed."""
    return np.random.default_rng(np.random.SeedSequence(seed))


def spawn_streams(seed: int, names: Iterable[str] = PHASE_STREAMS) -> Dict[str, np.random.Generator]:
    """
    Split one seed into independent named generators.

    Args:
        seed: Root seed
        names: Stream names, in a fixed order

    Returns:
        Mapping of stream name to its generator
    """
    names = list(names)
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {name: np.random.default_rng(child) for name, child in zip(names, children)}
