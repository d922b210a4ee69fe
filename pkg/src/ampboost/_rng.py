"""Named RNG sub-streams derived from a single 64-bit seed.

Every stochastic stage (problem generation, cost sampling, shots) pulls an
independent generator keyed by name, so multi-stage experiments reproduce
exactly from one recorded seed.
"""

import zlib

import numpy as np


def substream(seed: int, name: str) -> np.random.Generator:
    """Return a Generator for the (seed, name) pair, stable across runs."""
    tag = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, tag]))
