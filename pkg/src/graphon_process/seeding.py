"""Deterministic randomness plumbing.

Two mechanisms cover every random decision in the library:

* stream RNGs: `numpy` generators derived from a root seed plus a string
  tag and integer indices, for anything drawn sequentially (vertex
  arrivals, restarts, batch selection);
* a counter-based pair hash, for per-edge coin flips.  The uniform for an
  unordered vertex pair depends only on (seed, min_id, max_id), so edge
  decisions are identical no matter in which order, or in how many grow
  calls, the pairs are visited.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_SHIFT_A = np.uint64(30)
_SHIFT_B = np.uint64(27)
_SHIFT_C = np.uint64(31)
_SHIFT_OUT = np.uint64(11)
_INV_2_53 = 1.0 / float(1 << 53)


def substream(seed, tag, *indices):
    """Independent Generator for (seed, tag, indices).

    Uses SeedSequence spawning by entropy concatenation; stable across
    processes and platforms.
    """
    entropy = [np.uint32(seed & 0xFFFFFFFF), np.uint32((seed >> 32) & 0xFFFFFFFF)]
    entropy.extend(np.frombuffer(tag.encode("utf8").ljust(4, b"\0"), dtype=np.uint8))
    for ix in indices:
        entropy.append(np.uint32(ix & 0xFFFFFFFF))
        entropy.append(np.uint32((ix >> 32) & 0xFFFFFFFF))
    return np.random.default_rng(np.random.SeedSequence([int(e) for e in entropy]))


def _mix64(z):
    z = (z ^ (z >> _SHIFT_A)) * _MIX1
    z = (z ^ (z >> _SHIFT_B)) * _MIX2
    return z ^ (z >> _SHIFT_C)


def pair_uniform(seed, i, j):
    """Uniform in [0, 1) for unordered id pair {i, j}, fixed by seed.

    `i` and `j` may be scalars or equally shaped integer arrays; ids must
    be < 2**32.  Symmetric in (i, j).
    """
    i = np.asarray(i, dtype=np.uint64)
    j = np.asarray(j, dtype=np.uint64)
    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    key = (hi << np.uint64(32)) | lo
    with np.errstate(over="ignore"):
        z = _mix64(key + _GOLDEN * np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
        z = _mix64(z + _GOLDEN)
    return (z >> _SHIFT_OUT).astype(np.float64) * _INV_2_53
