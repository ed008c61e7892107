"""Ensembles of independent paths with mergeable statistical accumulators.

Paths come from consecutive seeds base_seed..base_seed+n_paths-1, so an
ensemble is fully described by its config.  Accumulators are per-grid-point
sums and sums of squares, plus a cross-product matrix and retained samples at
a designated subset of grid points.  Generation proceeds in fixed-size seed
blocks that are absorbed in seed order, which makes results independent of
the worker count; merging two ensembles that are adjacent in seed order
reproduces the one-shot accumulators up to float reassociation (documented
relative tolerance 1e-9) and the retained samples exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._parallel import ordered_block_map
from .dyadic import Dyadic
from .noise import GENERATOR_ID, NoiseSource
from .path import DyadicPath, build_path

MERGE_RTOL = 1e-9
DEFAULT_RETAIN_CAP = 1_000_000
_BLOCK = 4096
_SEED_MAX = 1 << 64


@dataclass(frozen=True)
class EnsembleConfig:
    horizon: int
    level: int
    n_paths: int
    base_seed: int
    track_points: tuple = ()
    retain_cap: int = DEFAULT_RETAIN_CAP
    generator_id: str = GENERATOR_ID

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be a positive integer")
        if self.n_paths < 1:
            raise ValueError("need at least one path")
        if self.base_seed < 0 or self.base_seed + self.n_paths > _SEED_MAX:
            raise ValueError("seed range exceeds unsigned 64-bit integers")
        if self.retain_cap < 0:
            raise ValueError("retain_cap must be non-negative")
        for r in self.track_points:
            if not r.is_on_level(self.level) or r.value > self.horizon:
                raise ValueError(f"tracked point {r} is off the ensemble grid")
        if len(set(self.track_points)) != len(self.track_points):
            raise ValueError("tracked points must be unique")

    @property
    def grid_size(self) -> int:
        return self.horizon * (1 << self.level) + 1

    @property
    def seeds(self) -> range:
        return range(self.base_seed, self.base_seed + self.n_paths)

    def track_indices(self) -> np.ndarray:
        return np.asarray(
            [r.index_at_level(self.level) for r in self.track_points], dtype=np.intp
        )

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "level": self.level,
            "n_paths": self.n_paths,
            "base_seed": self.base_seed,
            "track_points": [[r.numerator, r.level] for r in self.track_points],
            "retain_cap": self.retain_cap,
            "generator_id": self.generator_id,
        }


class Ensemble:
    """Accumulated statistics over the paths of an EnsembleConfig."""

    def __init__(self, config: EnsembleConfig):
        self.config = config
        self.count = 0
        self.sum_values = np.zeros(config.grid_size)
        self.sum_squares = np.zeros(config.grid_size)
        n_track = len(config.track_points)
        self.cross = np.zeros((n_track, n_track))
        self._track_idx = config.track_indices()
        self._retain_rows = min(config.n_paths, config.retain_cap)
        self.retained = np.empty((self._retain_rows, n_track))

    def _absorb_block(self, block: np.ndarray) -> None:
        """Add a (paths, grid) block; blocks must arrive in seed order."""
        self.sum_values += block.sum(axis=0)
        self.sum_squares += (block * block).sum(axis=0)
        if self._track_idx.size:
            x = block[:, self._track_idx]
            self.cross += np.einsum("bi,bj->ij", x, x, optimize=False)
            lo = min(self.count, self._retain_rows)
            hi = min(self.count + block.shape[0], self._retain_rows)
            if hi > lo:
                self.retained[lo:hi] = x[: hi - lo]
        self.count += block.shape[0]

    # -- point statistics ---------------------------------------------------

    def _grid_index(self, r: Dyadic) -> int:
        if not r.is_on_level(self.config.level) or r.value > self.config.horizon:
            raise ValueError(f"{r} is off the ensemble grid")
        return r.index_at_level(self.config.level)

    def mean_at(self, r: Dyadic) -> float:
        return float(self.sum_values[self._grid_index(r)] / self.count)

    def var_at(self, r: Dyadic) -> float:
        if self.count < 2:
            raise ValueError("variance needs at least two paths")
        i = self._grid_index(r)
        s1, s2 = self.sum_values[i], self.sum_squares[i]
        return float((s2 - s1 * s1 / self.count) / (self.count - 1))

    def _track_pos(self, r: Dyadic) -> int:
        try:
            return self.config.track_points.index(r)
        except ValueError:
            raise ValueError(f"{r} is not a tracked point of this ensemble")

    def cov(self, s: Dyadic, t: Dyadic) -> float:
        """Sample covariance of (B(s), B(t)) over the ensemble."""
        if self.count < 2:
            raise ValueError("covariance needs at least two paths")
        i, j = self._track_pos(s), self._track_pos(t)
        si = self.sum_values[self._track_idx[i]]
        sj = self.sum_values[self._track_idx[j]]
        return float((self.cross[i, j] - si * sj / self.count) / (self.count - 1))

    def samples_at(self, r: Dyadic, n: int | None = None) -> np.ndarray:
        """Retained values of B(r), in seed order (first `n` if given)."""
        col = self.retained[:, self._track_pos(r)]
        if n is not None:
            if n > col.shape[0]:
                raise ValueError(
                    f"requested {n} samples, only {col.shape[0]} retained"
                )
            col = col[:n]
        return col

    @property
    def n_retained(self) -> int:
        return min(self.count, self._retain_rows)

    # -- merging ------------------------------------------------------------

    def merge(self, other: "Ensemble") -> "Ensemble":
        """Combine with an ensemble that continues this one's seed range."""
        a, b = self.config, other.config
        compatible = (
            a.horizon == b.horizon
            and a.level == b.level
            and a.track_points == b.track_points
            and a.retain_cap == b.retain_cap
            and a.generator_id == b.generator_id
        )
        if not compatible:
            raise ValueError("ensembles have incompatible configs")
        if b.base_seed != a.base_seed + a.n_paths:
            raise ValueError(
                "merge requires seed ranges adjacent in seed order "
                f"(got {a.base_seed}+{a.n_paths} then {b.base_seed})"
            )
        merged = Ensemble(
            EnsembleConfig(
                horizon=a.horizon,
                level=a.level,
                n_paths=a.n_paths + b.n_paths,
                base_seed=a.base_seed,
                track_points=a.track_points,
                retain_cap=a.retain_cap,
                generator_id=a.generator_id,
            )
        )
        merged.count = self.count + other.count
        merged.sum_values = self.sum_values + other.sum_values
        merged.sum_squares = self.sum_squares + other.sum_squares
        merged.cross = self.cross + other.cross
        keep = merged._retain_rows
        take_b = max(0, keep - self.n_retained)
        merged.retained = np.concatenate(
            [self.retained[: min(self.n_retained, keep)], other.retained[:take_b]]
        )
        return merged


def generate_ensemble(
    horizon: int,
    level: int,
    n_paths: int,
    base_seed: int,
    track_points=(),
    retain_cap: int = DEFAULT_RETAIN_CAP,
    workers: int = 1,
    source_factory=None,
    _block: int = _BLOCK,
) -> Ensemble:
    """Accumulate n_paths independent paths from consecutive seeds.

    The seed range is partitioned into fixed-size blocks absorbed in seed
    order; `workers` only parallelizes block construction, so results are
    identical for any worker count.  `source_factory` swaps in a custom
    noise source per seed (test doubles); the default takes the fast kernel
    route.
    """
    config = EnsembleConfig(
        horizon=horizon,
        level=level,
        n_paths=n_paths,
        base_seed=base_seed,
        track_points=tuple(track_points),
        retain_cap=retain_cap,
    )
    ens = Ensemble(config)

    def make_block(start: int) -> np.ndarray:
        stop = min(start + _block, n_paths)
        seeds = np.arange(
            base_seed + start, base_seed + stop, dtype=np.uint64
        )
        if source_factory is None:
            return _kernels.build_paths(seeds, horizon, level)
        return np.stack(
            [
                build_path(horizon, level, source_factory(int(s))).values
                for s in seeds
            ]
        )

    ordered_block_map(
        range(0, n_paths, _block), make_block, ens._absorb_block, workers
    )
    return ens


def single_path(ens_or_config, index: int = 0) -> DyadicPath:
    """Rebuild the index-th path of an ensemble (ensembles keep only sums)."""
    config = getattr(ens_or_config, "config", ens_or_config)
    if not 0 <= index < config.n_paths:
        raise ValueError("path index out of range")
    return build_path(
        config.horizon, config.level, NoiseSource(config.base_seed + index)
    )
