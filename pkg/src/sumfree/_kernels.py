"""Hot numeric kernels: counter-based sampling and the safe-element census.

Each kernel has a numba-compiled implementation and a pure-numpy fallback
computing bit-identical results.  Set SUMFREE_PURE_NUMPY=1 to force the
fallback (or run without numba installed).
"""

from __future__ import annotations

import os

import numpy as np

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK64 = (1 << 64) - 1

USE_NUMBA = os.environ.get("SUMFREE_PURE_NUMPY", "") not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover
        HAS_NUMBA = False
        USE_NUMBA = False
else:
    HAS_NUMBA = False


def splitmix64_finalize(z: int) -> int:
    """Scalar splitmix64 finalizer on a 64-bit value."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def mix(v: int) -> int:
    """Per-counter whitening: the finalizer applied after a golden-ratio offset."""
    return splitmix64_finalize((v + _GOLDEN) & _MASK64)


def rng_u53(master_seed: int, trial_index: int, e: int) -> float:
    """Deterministic uniform in [0,1) for one (seed, trial, element) counter."""
    z = splitmix64_finalize(master_seed ^ mix(trial_index) ^ mix(e))
    return (z >> 11) * 2.0**-53


def _sample_mask_numpy(n: int, p: float, master_seed: int, trial_index: int) -> np.ndarray:
    base = np.uint64(master_seed & _MASK64) ^ np.uint64(mix(trial_index))
    with np.errstate(over="ignore"):
        z = (np.arange(n, dtype=np.uint64) + np.uint64(_GOLDEN))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
        z = base ^ z
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
    u = (z >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return u < p


def _safe_mask_z2n_numpy(two_n: int, w_elems: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    if w_elems.size == 0:
        return np.ones(candidates.size, dtype=np.bool_)
    memb = np.zeros(two_n, dtype=np.bool_)
    memb[w_elems] = True
    out = np.empty(candidates.size, dtype=np.bool_)
    # Chunk the candidate axis so the |chunk| x |W| work arrays stay small.
    step = max(1, (1 << 22) // max(1, w_elems.size))
    for i in range(0, candidates.size, step):
        c = candidates[i : i + step, None]
        unsafe = (memb[(c - w_elems) % two_n] | memb[(c + w_elems) % two_n]).any(axis=1)
        out[i : i + step] = ~unsafe
    return out


if USE_NUMBA:

    @njit(cache=True)
    def _sample_mask_numba(n, p, master_seed, trial_mixed):  # pragma: no cover
        out = np.empty(n, dtype=np.bool_)
        base = np.uint64(master_seed) ^ np.uint64(trial_mixed)
        for e in range(n):
            z = np.uint64(e) + np.uint64(_GOLDEN)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
            z = base ^ z
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
            out[e] = (z >> np.uint64(11)) * 2.0**-53 < p
        return out

    @njit(cache=True)
    def _safe_mask_z2n_numba(two_n, w_elems, candidates):  # pragma: no cover
        memb = np.zeros(two_n, dtype=np.bool_)
        for y in w_elems:
            memb[y] = True
        out = np.empty(candidates.size, dtype=np.bool_)
        for i in range(candidates.size):
            x = candidates[i]
            safe = True
            for y in w_elems:
                if memb[(x - y) % two_n] or memb[(x + y) % two_n]:
                    safe = False
                    break
            out[i] = safe
        return out


def sample_mask(n: int, p: float, master_seed: int, trial_index: int) -> np.ndarray:
    """Boolean inclusion mask: element e is in the sample iff its counter u < p."""
    if p <= 0.0:
        return np.zeros(n, dtype=np.bool_)
    if p >= 1.0:
        return np.ones(n, dtype=np.bool_)
    if USE_NUMBA:
        return _sample_mask_numba(
            n, p, np.uint64(master_seed & _MASK64), np.uint64(mix(trial_index))
        )
    return _sample_mask_numpy(n, p, master_seed & _MASK64, trial_index)


def safe_mask_z2n(two_n: int, w_elems: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """For each candidate even x, whether W ∪ {x} stays sum-free in Z_{2n}.

    W must be a set of odd residues; x is unsafe iff some y in W has
    x-y or x+y (mod 2n) also in W.
    """
    w_elems = np.asarray(w_elems, dtype=np.int64)
    candidates = np.asarray(candidates, dtype=np.int64)
    if USE_NUMBA:
        return _safe_mask_z2n_numba(two_n, w_elems, candidates)
    return _safe_mask_z2n_numpy(two_n, w_elems, candidates)
