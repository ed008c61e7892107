"""Brownian paths on dyadic grids, built by recursive midpoint displacement.

A path at refinement level n stores B(k/2**n) for k = 0..T*2**n.  Level 0 is
the partial-sum walk over unit draws; each refinement keeps every existing
grid value untouched (a copy, never a recomputation) and fills midpoints with
the neighbour average plus an independent draw scaled by 1/sqrt(2**(n+2)).
Because the draw at a midpoint depends only on (seed, numerator, level),
paths from the same seed are consistent across levels bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dyadic import Dyadic, canonicalize
from .noise import GENERATOR_ID, NoiseSource

MAX_LEVEL = 48


@dataclass(frozen=True)
class DyadicPath:
    """One realization of B on {k/2**level : 0 <= k <= horizon*2**level}."""

    horizon: int
    level: int
    values: np.ndarray
    seed: int
    generator_id: str = GENERATOR_ID

    def __post_init__(self):
        expected = self.horizon * (1 << self.level) + 1
        if self.values.shape != (expected,):
            raise ValueError(
                f"level-{self.level} horizon-{self.horizon} path needs "
                f"{expected} values, got {self.values.shape}"
            )
        if self.values[0] != 0.0:
            raise ValueError("paths start at 0")
        self.values.flags.writeable = False

    @property
    def grid_size(self) -> int:
        return self.values.shape[0]

    def time_of(self, k: int) -> Dyadic:
        """The canonical dyadic time of grid index k."""
        if not 0 <= k < self.grid_size:
            raise ValueError(f"grid index {k} out of range")
        return canonicalize(k, self.level)

    def value_at(self, r: Dyadic) -> float:
        """Stored value at an on-grid dyadic time (exact read)."""
        if r.value > self.horizon:
            raise ValueError(f"{r} is beyond the horizon {self.horizon}")
        return float(self.values[r.index_at_level(self.level)])

    def evaluate(self, t) -> float:
        """B at time t: exact on-grid, linear interpolation off-grid."""
        if isinstance(t, Dyadic):
            if t.is_on_level(self.level):
                return self.value_at(t)
            t = t.value
        t = float(t)
        if not 0.0 <= t <= self.horizon:
            raise ValueError(f"time {t} outside [0, {self.horizon}]")
        x = t * (1 << self.level)
        k = int(math.floor(x))
        frac = x - k
        if frac == 0.0:
            return float(self.values[k])
        return float(self.values[k] + frac * (self.values[k + 1] - self.values[k]))

    def downsample(self, m: int) -> "DyadicPath":
        """The level-m restriction (m <= level); values are shared, not copied."""
        if not 0 <= m <= self.level:
            raise ValueError(f"cannot downsample level {self.level} to {m}")
        return DyadicPath(
            self.horizon,
            m,
            self.values[:: 1 << (self.level - m)],
            self.seed,
            self.generator_id,
        )

    def to_csv(self, fileobj) -> None:
        """Write the path as `t,value` rows with an exact config echo.

        Times are exact decimals of k/2**level; values use 17 significant
        digits, which round-trips doubles exactly.
        """
        echo = json.dumps(
            {
                "generator_id": self.generator_id,
                "horizon": self.horizon,
                "level": self.level,
                "seed": self.seed,
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        fileobj.write(f"# dyadicbm-path {echo}\n")
        fileobj.write("t,value\n")
        for k, v in enumerate(self.values):
            t = self.time_of(k).decimal()
            fileobj.write(f"{t},{v:.17g}\n")


def construct_level0(horizon: int, src) -> DyadicPath:
    """The integer-time walk: B(0)=0 and B(k) = B(k-1) + X_k."""
    if horizon < 1:
        raise ValueError("horizon must be a positive integer")
    values = np.zeros(horizon + 1)
    draws = src.normals(
        np.arange(1, horizon + 1, dtype=np.uint64),
        np.zeros(horizon, dtype=np.uint64),
    )
    values[1:] = np.cumsum(draws)
    return DyadicPath(horizon, 0, values, src.seed, _generator_of(src))


def refine(path: DyadicPath, src) -> DyadicPath:
    """One midpoint-displacement step: level n -> n+1.

    Even-index entries of the result are the input values, copied exactly;
    the entry between old neighbours a, b is (a+b)/2 plus the draw at the
    new odd dyadic scaled by 1/sqrt(2**(n+2)).
    """
    if src.seed != path.seed:
        raise ValueError(
            f"source seed {src.seed} does not match path seed {path.seed}; "
            "refinement must reuse the path's noise family"
        )
    if path.level >= MAX_LEVEL:
        raise ValueError(f"refinement beyond level {MAX_LEVEL} not supported")
    old = path.values
    new = np.empty(2 * old.shape[0] - 1)
    new[::2] = old
    odd = np.arange(1, 2 * (old.shape[0] - 1), 2, dtype=np.uint64)
    draws = src.normals(odd, np.full(odd.shape, path.level + 1, dtype=np.uint64))
    scale = 1.0 / math.sqrt(float(1 << (path.level + 2)))
    new[1::2] = 0.5 * (old[:-1] + old[1:]) + draws * scale
    return DyadicPath(path.horizon, path.level + 1, new, path.seed, path.generator_id)


def refine_to(path: DyadicPath, target_level: int, src) -> DyadicPath:
    """Iterate refine until the path reaches target_level."""
    if target_level < path.level:
        raise ValueError(
            f"target level {target_level} below current level {path.level}"
        )
    while path.level < target_level:
        path = refine(path, src)
    return path


def build_path(horizon: int, level: int, src) -> DyadicPath:
    """Construct the level-`level` path directly.

    Equivalent to construct_level0 followed by `level` refinements; real
    noise sources take the compiled/vectorized kernel route.
    """
    if not 0 <= level <= MAX_LEVEL:
        raise ValueError(f"level must be in [0, {MAX_LEVEL}]")
    if isinstance(src, NoiseSource):
        if horizon < 1:
            raise ValueError("horizon must be a positive integer")
        values = _kernels.build_paths(
            np.asarray([src.seed], dtype=np.uint64), horizon, level
        )[0]
        return DyadicPath(horizon, level, values, src.seed, src.generator_id)
    return refine_to(construct_level0(horizon, src), level, src)


def _generator_of(src) -> str:
    return getattr(src, "generator_id", "custom")
