"""Deterministic RNG stream derivation.

Every stochastic step (query selection, response noise, posterior sampling)
draws from its own stream addressed by (seed, purpose, iteration), so a
session can be replayed exactly from its seed and history regardless of
which steps re-run.
"""

from __future__ import annotations

import numpy as np

POSTERIOR_STREAM = 0
SELECTION_STREAM = 1
RESPONSE_STREAM = 2
VALIDATION_STREAM = 3


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for the sub-stream addressed by ``key`` under ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def derive_seed(seed: int, *key: int) -> int:
    """Stable integer seed for the sub-stream addressed by ``key``."""
    return int(np.random.SeedSequence(entropy=seed, spawn_key=key).generate_state(1)[0])
