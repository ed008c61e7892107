"""The keyed noise family.

Core claims:
    - draws are pure functions of (seed, numerator, level)
    - kernels agree bit for bit with the plain-integer reference
    - across distinct keys the draws look like independent N(0,1):
      moments within 4-standard-error bands, KS not rejecting at 0.01,
      cross-seed correlation at two fixed keys near zero
"""

import math

import numpy as np
import pytest
from scipy import stats

from dyadicbm import _kernels
from dyadicbm.dyadic import Dyadic, canonicalize
from dyadicbm.noise import GENERATOR_ID, NoiseSource, keyed_u64, reference_normal


def test_same_key_same_draw():
    src = NoiseSource(123)
    r = canonicalize(5, 3)
    assert src.normal(r) == src.normal(r)
    assert NoiseSource(123).normal(r) == src.normal(r)


def test_kernel_matches_integer_reference():
    edge = [0, 1, 2, 3, 12345, 2**32, 2**53 + 1, 2**64 - 1]
    seeds, nums, lvls = [], [], []
    for s in [0, 1, 42, 2**64 - 1]:
        for a in edge:
            for b in [0, 1, 7, 31, 48]:
                seeds.append(s)
                nums.append(a)
                lvls.append(b)
    out = _kernels.normals(
        np.asarray(seeds, dtype=np.uint64),
        np.asarray(nums, dtype=np.uint64),
        np.asarray(lvls, dtype=np.uint64),
    )
    expect = [reference_normal(s, a, b) for s, a, b in zip(seeds, nums, lvls)]
    assert out.tolist() == expect


def test_reference_hash_is_stable():
    # frozen values pin the stream: changing the mixing would silently
    # invalidate every recorded seed, so lock it down
    assert keyed_u64(0, 0, 0) == 3746585686858627171
    assert keyed_u64(42, 5, 3) == 11903706863437536863
    assert keyed_u64(2**64 - 1, 2**53 + 1, 48) == 11331959832471961684
    assert reference_normal(42, 5, 3) == 0.3726653668548058
    a = {keyed_u64(s, n, l) for s in range(3) for n in range(5) for l in range(4)}
    assert len(a) == 60  # no collisions among small keys


def test_seed_validation():
    with pytest.raises(ValueError):
        NoiseSource(-1)
    with pytest.raises(ValueError):
        NoiseSource(1 << 64)
    NoiseSource((1 << 64) - 1)


def test_unknown_generator_rejected():
    with pytest.raises(ValueError):
        NoiseSource(0, generator_id="other-rng/v9")
    assert NoiseSource(0).generator_id == GENERATOR_ID


def test_vector_draws_match_scalar():
    src = NoiseSource(7)
    rs = [canonicalize(k, n) for k, n in [(1, 1), (3, 2), (4, 0), (9, 5)]]
    vec = src.normals([r.numerator for r in rs], [r.level for r in rs])
    assert vec.tolist() == [src.normal(r) for r in rs]


def test_draw_moments_over_distinct_keys():
    n = 100_000
    j = np.arange(n, dtype=np.uint64)
    nums = 2 * j + np.uint64(1)
    lvls = (j % np.uint64(12)) + np.uint64(1)  # all keys canonical
    x = NoiseSource(2024).normals(nums, lvls)
    assert abs(x.mean()) <= 4.0 / math.sqrt(n)
    assert abs(x.var() - 1.0) <= 4.0 * math.sqrt(2.0 / n)


def test_draws_pass_normality_ks():
    j = np.arange(10_000, dtype=np.uint64)
    x = NoiseSource(9).normals(2 * j + np.uint64(1), np.full(j.shape, 6, np.uint64))
    assert stats.kstest(x, "norm", method="asymp").pvalue >= 0.01


def test_cross_seed_correlation_of_two_keys():
    n = 100_000
    seeds = np.arange(n, dtype=np.uint64)
    r1, r2 = Dyadic(1, 1), Dyadic(3, 2)
    x = _kernels.normals(seeds, np.full(n, r1.numerator, np.uint64),
                         np.full(n, r1.level, np.uint64))
    y = _kernels.normals(seeds, np.full(n, r2.numerator, np.uint64),
                         np.full(n, r2.level, np.uint64))
    corr = np.corrcoef(x, y)[0, 1]
    assert abs(corr) <= 4.0 / math.sqrt(n)
