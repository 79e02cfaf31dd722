"""Seeded random streams.

All randomness flows through :func:`stream`, which derives an independent
PCG64 generator from ``(seed, tag, index)`` via numpy's ``SeedSequence``
hashing. Chunked or parallel work therefore reproduces serial results as
long as each chunk asks for its own index.
"""

import zlib

import numpy as np

DEFAULT_SEED = 20190318


def _tag_word(tag: str) -> int:
    return zlib.crc32(tag.encode("utf-8"))


def stream(seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Return the generator for sub-task ``(tag, index)`` of a seeded run."""
    seed = int(seed)
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence([seed & 0xFFFFFFFF, seed >> 32, _tag_word(tag), int(index)])
    return np.random.Generator(np.random.PCG64(ss))
