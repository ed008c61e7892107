"""Deterministic, seed-keyed standard normal noise indexed by dyadic times.

The draw at canonical dyadic k/2**n is a pure function of (seed, k, n): the
three words are absorbed into a 64-bit state through splitmix64 avalanche
rounds, the top 53 bits become a uniform strictly inside (0, 1), and the
inverse normal CDF maps it to a standard normal variate.  Purity gives
order-independent refinement, bit-level reproducibility, and lock-free
parallel generation; one keyed family covers integer times and midpoint
displacements alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from . import _kernels
from ._kernels.numpy_backend import KEY_WHITEN, LVL_GAMMA, NUM_GAMMA
from .dyadic import Dyadic

GENERATOR_ID = "splitmix64x3-ndtri/v1"

_MASK = (1 << 64) - 1
_SEED_MAX = 1 << 64


def _mix64_int(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def keyed_u64(seed: int, num: int, lvl: int) -> int:
    """Pure-python reference of the keyed hash; kernels must match it."""
    h = _mix64_int((seed + KEY_WHITEN) & _MASK)
    h = _mix64_int((h + num * NUM_GAMMA) & _MASK)
    h = _mix64_int((h + lvl * LVL_GAMMA) & _MASK)
    return h


def reference_normal(seed: int, num: int, lvl: int) -> float:
    """Scalar reference draw, bypassing the kernel backends entirely."""
    u = ((keyed_u64(seed, num, lvl) >> 11) + 0.5) * 2.0**-53
    return float(ndtri(u))


@dataclass(frozen=True)
class NoiseSource:
    """Keyed family of independent N(0,1) draws, one per canonical dyadic."""

    seed: int
    generator_id: str = field(default=GENERATOR_ID)

    def __post_init__(self):
        if not 0 <= self.seed < _SEED_MAX:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.generator_id != GENERATOR_ID:
            raise ValueError(
                f"unknown generator {self.generator_id!r}; "
                f"this build provides {GENERATOR_ID!r}"
            )

    def normal(self, r: Dyadic) -> float:
        """The draw attached to canonical dyadic r."""
        return float(
            self.normals(
                np.asarray([r.numerator], dtype=np.uint64),
                np.asarray([r.level], dtype=np.uint64),
            )[0]
        )

    def normals(self, numerators, levels) -> np.ndarray:
        """Vectorized draws at (numerators[i], levels[i]); broadcastable."""
        nums, lvls = np.broadcast_arrays(
            np.asarray(numerators, dtype=np.uint64),
            np.asarray(levels, dtype=np.uint64),
        )
        shape = nums.shape
        seeds = np.full(nums.size, self.seed, dtype=np.uint64)
        out = _kernels.normals(seeds, nums.ravel(), lvls.ravel())
        return out.reshape(shape)
