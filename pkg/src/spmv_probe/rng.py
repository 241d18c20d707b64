"""Counter-based pseudo-random primitives (splitmix64).

The generator's reproducibility contract is bit-identical output for a
given seed, independent of numpy/numba versions, so all of its randomness
comes from this one finalizer rather than a library RNG. The same mixing
function serves vectorized numpy streams and scalar draws inside jitted
code.
"""

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def mix64(z):
    """splitmix64 finalizer; works elementwise on uint64 scalars or arrays."""
    z = np.uint64(z) if np.isscalar(z) else z.astype(np.uint64)
    with np.errstate(over="ignore"):  # uint64 wraparound is the point
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def mix64_jit(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def derive_seed(seed: int, *tags: int) -> int:
    """Fold tags into a seed to get an independent substream key."""
    z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        for t in tags:
            z = mix64((z + GOLDEN) ^ np.uint64(t & 0xFFFFFFFFFFFFFFFF))
        return int(mix64(z + GOLDEN))


def stream_u64(seed: int, start: int, count: int) -> np.ndarray:
    """Random-access uint64 stream: element i is a pure function of (seed, i)."""
    idx = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (idx + np.uint64(1)) * GOLDEN)


def stream_unit(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform [0, 1) doubles from the counter stream."""
    return (stream_u64(seed, start, count) >> np.uint64(11)) * 2.0**-53


def stream_normal(seed: int, start: int, count: int) -> np.ndarray:
    """Standard normal draws via Box-Muller on the counter stream."""
    pairs = (count + 1) // 2
    u1 = stream_unit(seed, start, pairs)
    u2 = stream_unit(seed, start + pairs, pairs)
    r = np.sqrt(-2.0 * np.log1p(-u1))  # log1p avoids log(0)
    theta = 2.0 * np.pi * u2
    out = np.empty(pairs * 2)
    out[0::2] = r * np.cos(theta)
    out[1::2] = r * np.sin(theta)
    return out[:count]


def permutation(seed: int, n: int) -> np.ndarray:
    """Seed-derived permutation of range(n) (sort of random keys)."""
    keys = stream_u64(seed, 0, n)
    return np.argsort(keys, kind="stable")
