"""Numpy implementation of the hot kernels.

This module defines the reference semantics for the keyed noise stream and
the path pyramid; the compiled extension (``_core``) must reproduce every
output bit for bit.  All floating-point expressions here are written so that
each element undergoes exactly the same IEEE-754 operations in both
backends: integer hashing (exact), a power-of-two scaling to (0, 1) (exact),
the shared cephes ``ndtri`` inverse normal CDF, and plain add/multiply
recurrences (no fused multiply-add, no reassociation).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtri

BACKEND = "numpy"

_U64 = np.uint64
_MASK = (1 << 64) - 1

# splitmix64 finalizer constants plus two absorption increments
KEY_WHITEN = 0x9E3779B97F4A7C15
NUM_GAMMA = 0x9E3779B97F4A7C15
LVL_GAMMA = 0xC2B2AE3D27D4EB4F
_MIX_1 = _U64(0xBF58476D1CE4E5B9)
_MIX_2 = _U64(0x94D049BB133111EB)
_U53 = 1.0 / 9007199254740992.0  # 2**-53, exact


def _mix64(z):
    """splitmix64 finalizer, elementwise on uint64 arrays."""
    z = (z ^ (z >> _U64(30))) * _MIX_1
    z = (z ^ (z >> _U64(27))) * _MIX_2
    return z ^ (z >> _U64(31))


def _keyed(seeds, nums, lvls):
    """Avalanche hash of (seed, numerator, level) -> uint64."""
    with np.errstate(over="ignore"):
        h = _mix64(seeds + _U64(KEY_WHITEN))
        h = _mix64(h + nums * _U64(NUM_GAMMA))
        h = _mix64(h + lvls * _U64(LVL_GAMMA))
    return h


def _to_unit(h):
    """Map uint64 hashes to doubles strictly inside (0, 1)."""
    return ((h >> _U64(11)).astype(np.float64) + 0.5) * _U53


def uniforms(seeds, nums, lvls):
    """Uniform(0,1) draws keyed by (seed, numerator, level); 1-d arrays."""
    return _to_unit(_keyed(_as_u64(seeds), _as_u64(nums), _as_u64(lvls)))


def normals(seeds, nums, lvls):
    """Standard normal draws keyed by (seed, numerator, level); 1-d arrays."""
    return ndtri(uniforms(seeds, nums, lvls))


def _as_u64(a):
    return np.ascontiguousarray(a, dtype=np.uint64)


def _midpoint_scale(lvl: int) -> float:
    # displacement scale for refining level lvl -> lvl+1: 1/sqrt(2**(lvl+2))
    return 1.0 / math.sqrt(float(1 << (lvl + 2)))


def build_paths(seeds, horizon: int, level: int):
    """Build one path per seed on the grid {k/2**level : 0 <= k <= T*2**level}.

    Returns a (len(seeds), horizon*2**level + 1) float64 matrix.  Column 0 is
    exactly 0; integer times are partial sums of unit draws; midpoints are
    filled level by level as the neighbour average plus a scaled draw.  Grid
    points laid down at a coarse level are never recomputed, so any coarser
    grid is an exact sub-array of a finer one from the same seed.
    """
    seeds = _as_u64(seeds)
    n_paths = seeds.shape[0]
    stride = 1 << level
    out = np.zeros((n_paths, horizon * stride + 1))
    seeds_col = seeds[:, None]

    nums0 = np.arange(1, horizon + 1, dtype=np.uint64)[None, :]
    z = ndtri(_to_unit(_keyed(seeds_col, nums0, np.zeros(1, dtype=np.uint64))))
    out[:, stride::stride] = np.cumsum(z, axis=1)

    for lvl in range(level):
        step = stride >> lvl
        half = step >> 1
        scale = _midpoint_scale(lvl)
        odd = np.arange(1, 2 * horizon * (1 << lvl), 2, dtype=np.uint64)[None, :]
        lvl_key = np.asarray([lvl + 1], dtype=np.uint64)
        z = ndtri(_to_unit(_keyed(seeds_col, odd, lvl_key)))
        coarse = out[:, ::step]
        out[:, half::step] = 0.5 * (coarse[:, :-1] + coarse[:, 1:]) + z * scale
    return out


def interval_abs_max(values, step: int, n_intervals: int):
    """Per-row maxima of |v[j] - v[k*step]| over windows j in [k*step, k*step+2*step].

    ``values`` is (n_paths, grid); returns (n_paths, n_intervals).
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    width = 2 * step + 1
    if step < 1 or n_intervals < 1:
        raise ValueError("step and n_intervals must be positive")
    if (n_intervals - 1) * step + width > values.shape[1]:
        raise ValueError(
            f"{n_intervals} windows of width {width} at stride {step} "
            f"overrun a grid of {values.shape[1]} points"
        )
    win = np.lib.stride_tricks.sliding_window_view(values, width, axis=1)
    win = win[:, :: step, :][:, :n_intervals, :]
    return np.abs(win - win[:, :, :1]).max(axis=2)
