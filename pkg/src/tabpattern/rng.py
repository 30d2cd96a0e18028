"""Deterministic random streams.

All randomness in the package flows through Philox, a counter-based
bit generator whose streams are reproducible across platforms and numpy
builds. Substreams are derived from a root seed plus a path of purpose
tags (strings are folded to integers with CRC-32), so independent
consumers -- one per generated dataset, per training epoch, per
bootstrap tree -- never share state. Generating datasets in parallel
therefore yields results identical to sequential generation.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key(part: int | str) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    if part < 0:
        raise ValueError(f"stream path elements must be non-negative, got {part}")
    return int(part)


def substream(seed: int, *path: int | str) -> np.random.Generator:
    """Return a Philox generator for (seed, path), independent of all other paths."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(_key(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *path: int | str) -> int:
    """Fold (seed, path) into a single 63-bit integer seed."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(_key(p) for p in path))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))
