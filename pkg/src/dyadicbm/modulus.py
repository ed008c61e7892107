"""Local oscillation statistics of dyadic paths and their tail bounds.

For a window level n, the statistic over interval k is the supremum of
|B(r) - B(k/2**n)| for dyadic r in [k/2**n, (k+2)/2**n], taken over
k = 0..(n+1)*2**n; the aggregate is the maximum over k.  On a finite path
the supremum is approximated from below by the maximum over the measurement
grid (level m >= n), which is non-decreasing in m.  The per-interval tail
obeys P(M_{k,n} >= 3*alpha) <= 36 * alpha**-4 * 2**(-2n) and the aggregate
tail at alpha = 1/(3n) obeys P(M_n >= 1/n) <= 2916 * (n+1) * n**4 * 2**(-n),
a summable sequence; both bound evaluators live here next to the estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._parallel import ordered_block_map
from .defaults import registered
from .noise import GENERATOR_ID
from .path import MAX_LEVEL, DyadicPath, build_path
from .report import StatReport, band_record, upper_bound_record

_BLOCK = 512


def n_intervals(window_level: int) -> int:
    """Number of windows: k runs over 0..(n+1)*2**n inclusive."""
    return (window_level + 1) * (1 << window_level) + 1


def required_horizon(window_level: int) -> int:
    """Smallest integer horizon covering every window [k/2**n, (k+2)/2**n].

    The last window ends at (n+1) + 2**(1-n), so n+2 suffices for n >= 1
    but n = 0 needs horizon 3.
    """
    n = window_level
    return math.ceil((((n + 1) << n) + 2) / (1 << n))


@dataclass(frozen=True)
class ModulusStat:
    """Windowed oscillation maxima of one path at a given window level."""

    window_level: int
    measure_level: int
    per_interval: np.ndarray

    def __post_init__(self):
        if self.per_interval.shape != (n_intervals(self.window_level),):
            raise ValueError("per-interval vector has the wrong length")
        self.per_interval.flags.writeable = False

    @property
    def aggregate(self) -> float:
        """Max over all windows (a lower bound for the dyadic supremum)."""
        return float(self.per_interval.max())


def _check_window_geometry(horizon: int, level: int, window_level: int) -> None:
    n = window_level
    if n < 0:
        raise ValueError("window level must be non-negative")
    if level < n:
        raise ValueError(
            f"measurement level {level} is below window level {n}"
        )
    if level > MAX_LEVEL:
        raise ValueError(f"measurement level {level} exceeds {MAX_LEVEL}")
    if horizon * (1 << n) < ((n + 1) << n) + 2:
        raise ValueError(
            f"horizon {horizon} too small for window level {n}; "
            f"need at least {required_horizon(n)}"
        )


def compute_modulus(path: DyadicPath, window_level: int) -> ModulusStat:
    """Windowed oscillation maxima of `path` over the level-n windows."""
    _check_window_geometry(path.horizon, path.level, window_level)
    step = 1 << (path.level - window_level)
    per = _kernels.interval_abs_max(
        path.values[None, :], step, n_intervals(window_level)
    )[0]
    return ModulusStat(window_level, path.level, per)


def interval_tail_bound(window_level: int, alpha: float) -> float:
    """Per-window tail bound 36 * alpha**-4 * 2**(-2n)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if window_level < 0:
        raise ValueError("window level must be non-negative")
    return 36.0 * alpha**-4 * 2.0 ** (-2 * window_level)


def modulus_tail_term(n: int) -> float:
    """Aggregate tail bound 2916 * (n+1) * n**4 * 2**(-n) at alpha = 1/(3n)."""
    if n < 1:
        raise ValueError("the tail term is defined for n >= 1")
    return 2916.0 * (n + 1) * n**4 * 2.0**-n


def tail_term_series(max_n: int):
    """Terms and partial sums of the aggregate tail bound for n = 1..max_n."""
    terms = np.asarray([modulus_tail_term(n) for n in range(1, max_n + 1)])
    return terms, np.cumsum(terms)


def modulus_tail_suite(
    window_level: int | None = None,
    measure_level: int | None = None,
    n_paths: int | None = None,
    base_seed: int = 0,
    alphas=None,
    *,
    horizon: int | None = None,
    series_max_n: int | None = None,
    workers: int = 1,
    source_factory=None,
) -> StatReport:
    """Empirical window-tail probabilities against their bounds, plus the
    summability diagnostics of the aggregate tail terms."""
    reg = registered()
    mod = reg["modulus"]
    n = mod["window_level"] if window_level is None else window_level
    m = mod["measure_level"] if measure_level is None else measure_level
    n_paths = mod["paths"] if n_paths is None else n_paths
    alphas = list(mod["alphas"] if alphas is None else alphas)
    series_max_n = mod["series_max_n"] if series_max_n is None else series_max_n
    horizon = required_horizon(n) if horizon is None else horizon
    _check_window_geometry(horizon, m, n)
    if n_paths < 1:
        raise ValueError("need at least one path")
    if not alphas or any(a <= 0 for a in alphas):
        raise ValueError("alpha grid must be non-empty and positive")

    n_k = n_intervals(n)
    step = 1 << (m - n)
    thresholds = np.asarray([3.0 * a for a in alphas])
    counts_interval = np.zeros((len(alphas), n_k), dtype=np.int64)
    counts_max = np.zeros(len(alphas), dtype=np.int64)

    def make_block(start: int) -> np.ndarray:
        stop = min(start + _BLOCK, n_paths)
        seeds = np.arange(base_seed + start, base_seed + stop, dtype=np.uint64)
        if source_factory is None:
            values = _kernels.build_paths(seeds, horizon, m)
        else:
            values = np.stack(
                [
                    build_path(horizon, m, source_factory(int(s))).values
                    for s in seeds
                ]
            )
        return _kernels.interval_abs_max(values, step, n_k)

    def absorb(per_path: np.ndarray) -> None:
        for i, thr in enumerate(thresholds):
            counts_interval[i] += (per_path >= thr).sum(axis=0)
            counts_max[i] += int((per_path.max(axis=1) >= thr).sum())

    ordered_block_map(range(0, n_paths, _BLOCK), make_block, absorb, workers)

    records = []
    for i, a in enumerate(alphas):
        probs = counts_interval[i] / n_paths
        worst = int(np.argmax(probs))
        max_prob = counts_max[i] / n_paths
        union = float(probs.sum())
        records.append(
            upper_bound_record(
                f"interval-tail[n={n},alpha={a}]",
                interval_tail_bound(n, a),
                float(probs[worst]),
                stderr=math.sqrt(max(probs[worst] * (1 - probs[worst]), 0.0) / n_paths),
                detail={"worst_k": worst, "aggregate_prob": max_prob,
                        "union_sum": union},
            )
        )
        records.append(
            upper_bound_record(
                f"union-consistency[n={n},alpha={a}]",
                union,
                max_prob,
                detail={"note": "P(max >= t) cannot exceed the summed "
                                "per-window frequencies"},
            )
        )

    terms, sums = tail_term_series(series_max_n)
    ratios = terms[1:] / terms[:-1]
    records.append(
        upper_bound_record(
            "tail-term-eventually-decreasing",
            1.0,
            float(ratios[15:].max()),
            detail={"from_n": 16},
        )
    )
    records.append(
        band_record(
            "tail-term-ratio-limit",
            0.5,
            float(ratios[-1]),
            stderr=0.005,
            detail={"at_n": series_max_n - 1},
        )
    )
    records.append(
        upper_bound_record(
            "tail-series-converged",
            1e-12,
            float((sums[-1] - sums[-11]) / sums[-1]),
            detail={"partial_sum": float(sums[-1]), "tail_terms": 10},
        )
    )

    config = {
        "defaults_version": reg["version"],
        "suite": "modulus",
        "window_level": n,
        "measure_level": m,
        "horizon": horizon,
        "paths": n_paths,
        "base_seed": base_seed,
        "alphas": alphas,
        "series_max_n": series_max_n,
        "generator_id": GENERATOR_ID,
        "tail_term_at_n": modulus_tail_term(n) if n >= 1 else None,
        "note": "window maxima are grid lower bounds of the dyadic suprema",
    }
    return StatReport("modulus", config, records)
