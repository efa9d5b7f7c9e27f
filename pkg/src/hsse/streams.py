"""Reproducible random streams.

Every sampler takes an explicit :class:`numpy.random.Generator`. Streams are
Philox (counter-based) generators keyed by a :class:`numpy.random.SeedSequence`,
so independent child streams can be split off deterministically.
"""
from __future__ import annotations

import numpy as np


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def split(seed, k: int) -> list[np.random.Generator]:
    """``k`` independent child streams of ``seed``; the i-th child never depends on ``k``."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.Philox(c)) for c in ss.spawn(k)]
