"""Deterministic derivation of independent random substreams.

Every stochastic routine in the package takes an integer seed and derives
its generators through :func:`substream` or :func:`derive_seed`, so results
are reproducible and independent of how work is split across workers.
"""

import numpy as np

# Fixed role tags used as substream components.
DATA_STREAM = 0
ESTIMATOR_STREAM = 1


def _entropy(seed: int, parts: tuple[int, ...]) -> tuple[int, ...]:
    if seed < 0:
        raise ValueError("seeds must be non-negative integers")
    return (int(seed),) + tuple(int(p) for p in parts)


def substream(seed: int, *parts: int) -> np.random.Generator:
    """Return a generator keyed by ``(seed, *parts)``.

    Identical arguments always yield an identical stream; distinct argument
    tuples yield statistically independent streams.
    """
    return np.random.default_rng(np.random.SeedSequence(_entropy(seed, parts)))


def derive_seed(seed: int, *parts: int) -> int:
    """Collapse ``(seed, *parts)`` into a single 64-bit seed."""
    lo, hi = np.random.SeedSequence(_entropy(seed, parts)).generate_state(2, np.uint32)
    return int(lo) | (int(hi) << 32)
