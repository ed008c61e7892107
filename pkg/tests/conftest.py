"""Shared test doubles and independent oracles."""

import numpy as np
import pytest

from dyadicbm.noise import NoiseSource


class MappingNoise:
    """Test double: draws looked up from {(numerator, level): value}.

    Missing keys fall back to `default`, so a plain MappingNoise() forces
    every draw to zero.
    """

    def __init__(self, mapping=None, default=0.0, seed=0):
        self.mapping = dict(mapping or {})
        self.default = default
        self.seed = seed
        self.generator_id = "test-mapping"

    def normals(self, nums, lvls):
        nums = np.atleast_1d(np.asarray(nums))
        lvls = np.atleast_1d(np.asarray(lvls))
        return np.asarray(
            [
                self.mapping.get((int(k), int(n)), self.default)
                for k, n in zip(nums, lvls)
            ],
            dtype=float,
        )


class ScaledNoise:
    """Fault injection: real draws multiplied by a constant factor."""

    def __init__(self, seed, factor):
        self._src = NoiseSource(seed)
        self.factor = factor
        self.seed = seed
        self.generator_id = f"scaled-x{factor}"

    def normals(self, nums, lvls):
        return self._src.normals(nums, lvls) * self.factor


def zero_factory(seed):
    return MappingNoise(seed=seed)


def window_maxima_oracle(values, level, window_level):
    """Straightforward double-loop scan of |B(r) - B(k/2**n)| window maxima.

    Independent of the library implementation on purpose; used as the exact
    reference for the vectorized/compiled kernels.
    """
    step = 2 ** (level - window_level)
    out = []
    for k in range((window_level + 1) * 2**window_level + 1):
        lo = k * step
        ref = values[lo]
        worst = 0.0
        for j in range(lo, lo + 2 * step + 1):
            worst = max(worst, abs(values[j] - ref))
        out.append(worst)
    return np.asarray(out)


def increment_cov_oracle(r1, r2, r3, r4):
    """Cov(B(r2)-B(r1), B(r4)-B(r3)) from the min-covariance identity."""
    m = min
    return m(r2, r4) - m(r2, r3) - m(r1, r4) + m(r1, r3)


@pytest.fixture
def zero_noise():
    return MappingNoise()
