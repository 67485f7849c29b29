"""Seeded random streams.

Scalar procedures use :class:`random.Random` because per-call overhead
dominates at the sizes they run at; batched procedures use numpy Generators.
Both are keyed by ``(seed, stream)`` so independent sessions never share state.
"""

from __future__ import annotations

import random

import numpy as np


def make_rng(seed: int, stream: int | str = 0) -> random.Random:
    return random.Random(f"{seed}:{stream}")


def make_np_rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(stream)])


def uniform_index(rng: random.Random, size: int) -> int:
    """Uniform integer in ``[0, size)``; bias is below ``size / 2**53``."""
    return int(rng.random() * size)
