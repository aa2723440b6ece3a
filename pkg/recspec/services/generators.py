from typing import Optional

import numpy as np


# Mixing constant of splitmix64, spreads consecutive task indices apart.
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, task_index: int) -> int:
    """
    Seed of one task of a batch.

    Tasks of a batch draw from independent streams that depend only on
    the master seed and the task index, never on scheduling order.

    :param master_seed: seed of the whole run.
    :param task_index: index of the task.
    :return: 64-bit seed.
    """
    z = (master_seed + (task_index + 1) * _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """:return: numpy generator for the seed."""
    return np.random.default_rng(seed)


def random_symbols(
    length: int,
    alphabet_size: int,
    rng: np.random.Generator,
    weights: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Draw i.i.d. symbols, uniform unless weights are given."""
    return rng.choice(alphabet_size, size=length, p=weights).astype(np.int64)
