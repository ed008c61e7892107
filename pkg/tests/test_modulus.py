"""Window oscillation statistics and their tail bounds.

Core claims:
    - window maxima match the double-loop oracle exactly, and are zero on
      zero-noise paths
    - the hand-computed example (values 0,1,0,2 at level 0) comes out right
    - maxima are non-decreasing in the measurement level
    - geometry preconditions (window level vs horizon/level) are enforced,
      including the horizon-3 requirement at window level 0
    - bound evaluators give the exact arithmetic values; the aggregate tail
      terms are eventually decreasing with summable partial sums
    - empirical window-tail frequencies sit below the evaluated bound and
      respect union-bound consistency
"""

import math

import numpy as np
import pytest

from conftest import MappingNoise, window_maxima_oracle, zero_factory
from dyadicbm.modulus import (
    compute_modulus,
    interval_tail_bound,
    modulus_tail_term,
    modulus_tail_suite,
    n_intervals,
    required_horizon,
    tail_term_series,
)
from dyadicbm.noise import NoiseSource
from dyadicbm.path import build_path, construct_level0, refine_to


def test_zero_noise_gives_zero_maxima(zero_noise):
    path = refine_to(construct_level0(3, zero_noise), 4, zero_noise)
    stat = compute_modulus(path, 0)
    assert stat.per_interval.tolist() == [0.0, 0.0]
    assert stat.aggregate == 0.0


def test_level0_worked_example():
    src = MappingNoise({(1, 0): 1.0, (2, 0): -1.0, (3, 0): 2.0})
    path = construct_level0(3, src)
    assert path.values.tolist() == [0.0, 1.0, 0.0, 2.0]
    stat = compute_modulus(path, 0)
    # windows [0,2] and [1,3]: max deviations from B(0) and B(1)
    assert stat.per_interval.tolist() == [1.0, 1.0]
    assert stat.aggregate == 1.0


def test_matches_double_loop_oracle():
    rng = np.random.default_rng(0)
    for _ in range(25):
        n = int(rng.integers(0, 4))
        m = n + int(rng.integers(0, 3))
        horizon = required_horizon(n)
        path = build_path(horizon, m, NoiseSource(int(rng.integers(0, 2**32))))
        stat = compute_modulus(path, n)
        oracle = window_maxima_oracle(path.values, m, n)
        assert stat.per_interval.tolist() == oracle.tolist()


def test_monotone_in_measurement_level():
    src = NoiseSource(77)
    for n in [0, 1, 2]:
        horizon = required_horizon(n)
        coarse = compute_modulus(build_path(horizon, n + 1, src), n)
        fine = compute_modulus(build_path(horizon, n + 2, src), n)
        assert np.all(fine.per_interval >= coarse.per_interval)
        assert fine.measure_level == n + 2


def test_geometry_preconditions():
    src = NoiseSource(0)
    with pytest.raises(ValueError):
        compute_modulus(build_path(2, 3, src), 4)  # level below window level
    with pytest.raises(ValueError, match="need at least 3"):
        compute_modulus(build_path(2, 2, src), 0)  # window level 0 needs T=3
    with pytest.raises(ValueError, match="need at least 4"):
        compute_modulus(build_path(3, 4, src), 2)
    compute_modulus(build_path(3, 3, src), 1)  # n >= 1 needs T = n+2


def test_required_horizon_values():
    assert [required_horizon(n) for n in range(5)] == [3, 3, 4, 5, 6]
    assert n_intervals(2) == 13


def test_interval_tail_bound_values():
    assert interval_tail_bound(4, 1.0) == 36 / 256
    assert interval_tail_bound(2, 0.75) == pytest.approx(36 * 0.75**-4 / 16)
    with pytest.raises(ValueError):
        interval_tail_bound(2, 0.0)
    alphas = np.linspace(0.1, 8.0, 50)
    bounds = [interval_tail_bound(3, a) for a in alphas]
    assert all(b1 > b2 for b1, b2 in zip(bounds, bounds[1:]))  # decays in alpha
    assert bounds[-1] < 1e-2


def test_aggregate_tail_term_values():
    assert modulus_tail_term(10) == 2916 * 11 * 10**4 * 2.0**-10 == 313242.1875
    assert modulus_tail_term(1) == 2916 * 2 * 0.5
    with pytest.raises(ValueError):
        modulus_tail_term(0)


def test_aggregate_tail_series_summable():
    terms, sums = tail_term_series(200)
    ratios = terms[1:] / terms[:-1]
    assert np.all(ratios[15:] < 1.0)  # eventually decreasing
    assert abs(ratios[-1] - 0.5) < 0.02  # dominant factor 2**-n
    assert sums[-1] == sums[150]  # converged to double precision long ago


def test_tail_suite_bounds_and_union_consistency():
    report = modulus_tail_suite(
        window_level=2, measure_level=8, n_paths=2000, base_seed=0,
        alphas=[0.5, 0.75, 1.0],
    )
    assert report.passed
    interval = {r.name: r for r in report.records if "interval-tail" in r.name}
    est = interval["interval-tail[n=2,alpha=0.75]"]
    assert est.target == pytest.approx(36 * 0.75**-4 / 16)
    assert est.estimate <= est.target


def test_tail_suite_zero_noise_estimates_zero():
    report = modulus_tail_suite(
        window_level=1, measure_level=3, n_paths=50, base_seed=0,
        alphas=[0.5], source_factory=zero_factory,
    )
    assert report.passed
    for rec in report.records:
        if "interval-tail" in rec.name or "union-consistency" in rec.name:
            assert rec.estimate == 0.0


def test_tail_suite_worker_independence():
    a = modulus_tail_suite(window_level=1, measure_level=5, n_paths=1500,
                           base_seed=9, alphas=[0.75], workers=1)
    b = modulus_tail_suite(window_level=1, measure_level=5, n_paths=1500,
                           base_seed=9, alphas=[0.75], workers=3)
    assert a.to_json() == b.to_json()
