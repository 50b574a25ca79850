"""Counter-based RNG kernels and the safe-element mask."""

import numpy as np

from sumfree import GroupSpec, Subset, is_sum_free
from sumfree._kernels import (
    _safe_mask_z2n_numpy,
    _sample_mask_numpy,
    mix,
    rng_u53,
    safe_mask_z2n,
    sample_mask,
    splitmix64_finalize,
)


def test_splitmix64_reference_vector():
    # splitmix64(seed=0) first outputs, from the published reference
    # implementation: finalize(0 + GOLDEN), finalize(0 + 2*GOLDEN), ...
    golden = 0x9E3779B97F4A7C15
    expected = (0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F)
    for i, want in enumerate(expected, start=1):
        assert splitmix64_finalize((i * golden) & ((1 << 64) - 1)) == want


def test_rng_u53_range_and_determinism():
    vals = [rng_u53(123, 4, e) for e in range(100)]
    assert all(0.0 <= v < 1.0 for v in vals)
    assert vals == [rng_u53(123, 4, e) for e in range(100)]


def test_sample_mask_matches_scalar_rng():
    n, p, seed, trial = 300, 0.37, 9876543210, 12
    mask = sample_mask(n, p, seed, trial)
    expected = np.array([rng_u53(seed, trial, e) < p for e in range(n)])
    assert np.array_equal(mask, expected)


def test_numba_and_numpy_masks_agree():
    for n, p, seed, trial in ((100, 0.2, 7, 0), (500, 0.9, 2**63 + 5, 3)):
        a = sample_mask(n, p, seed, trial)
        b = _sample_mask_numpy(n, p, seed & ((1 << 64) - 1), trial)
        assert np.array_equal(a, b)


def test_large_trial_index_no_overflow():
    # mix(trial) can exceed 2^63; the kernel must not overflow.
    mask = sample_mask(50, 0.5, 1, 10**6)
    assert mask.dtype == np.bool_


def test_safe_mask_matches_direct_definition():
    two_n = 60
    G = GroupSpec((two_n,))
    rng = np.random.default_rng(3)
    odds = np.arange(1, two_n, 2)
    w = odds[rng.random(odds.size) < 0.4]
    W = Subset.from_elements(G, w.tolist())
    candidates = np.arange(2, two_n // 2, 2, dtype=np.int64)
    mask = safe_mask_z2n(two_n, w, candidates)
    for x, ok in zip(candidates, mask):
        assert ok == is_sum_free(W.add(int(x)))
    assert np.array_equal(mask, _safe_mask_z2n_numpy(two_n, w, candidates))


def test_safe_mask_empty_w():
    mask = safe_mask_z2n(20, np.array([], dtype=np.int64), np.arange(2, 10, 2))
    assert mask.all()
