"""Deterministic random substreams.

Every Monte Carlo routine in this package draws from a substream derived
from ``(seed, *key)`` through a counter-based Philox generator.  Work split
across trials or sample chunks therefore produces bit-identical results no
matter how the work is scheduled: substream ``(seed, i)`` depends only on the
seed and the index ``i``, never on how many draws other substreams made.
"""

from __future__ import annotations

import numpy as np

# Chunk size used by vectorized estimators: sample s lives in chunk s // CHUNK.
CHUNK = 1 << 16

_MASK64 = (1 << 64) - 1


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream identified by ``(seed, *key)``."""
    ss = np.random.SeedSequence(entropy=int(seed) & _MASK64,
                                spawn_key=tuple(int(k) & _MASK64 for k in key))
    return np.random.Generator(np.random.Philox(ss))


def chunked_standard_normal(seed: int, total: int, cols: int, *key: int) -> np.ndarray:
    """(total, cols) standard normals, drawn chunk by chunk from substreams.

    The result for sample index s is a function of (seed, key, s) alone.
    """
    out = np.empty((total, cols), dtype=float)
    for c in range(0, total, CHUNK):
        hi = min(c + CHUNK, total)
        rng = substream(seed, *key, c // CHUNK)
        out[c:hi] = rng.standard_normal((hi - c, cols))
    return out


def chunked_uniform(seed: int, total: int, cols: int, *key: int) -> np.ndarray:
    """(total, cols) uniforms in [0, 1), chunked like chunked_standard_normal."""
    out = np.empty((total, cols), dtype=float)
    for c in range(0, total, CHUNK):
        hi = min(c + CHUNK, total)
        rng = substream(seed, *key, c // CHUNK)
        out[c:hi] = rng.random((hi - c, cols))
    return out


def sphere_directions(seed: int, total: int, n: int, *key: int) -> np.ndarray:
    """(total, n) uniform directions on S^{n-1}, chunk-deterministic."""
    g = chunked_standard_normal(seed, total, n, *key)
    g /= np.linalg.norm(g, axis=1)[:, None]
    return g


def fresh_seed() -> int:
    """Entropy-derived seed for runs where the user supplied none."""
    return int(np.random.SeedSequence().entropy) & _MASK64
