"""The maximal inequality: exact enumeration oracle and Monte Carlo.

Core claims:
    - hand-enumerable sign-walk cases come out exactly (lhs 1/2 at n=3,
      alpha=2/3; zero beyond the walk's range; the n=1 reduction)
    - an independent itertools enumeration agrees with the chunked oracle
    - the inequality holds with zero tolerance on every exact result and
      both sides are non-increasing in alpha
    - Monte Carlo estimates agree with exact values within 4 standard
      errors, are chunking-independent, and honor the trial floor
    - the fourth-moment tail bound dominates the true normal tail and
      reduces to the per-window bound at delta = 2 * 2**-n
"""

import itertools
import math

import numpy as np
import pytest
from scipy.special import erfc

from dyadicbm.etemadi import (
    ENUM_LIMIT,
    EtemadiResult,
    FiniteStepDistribution,
    GaussianStepDistribution,
    etemadi_exact,
    etemadi_mc,
    gaussian_fourth_moment_bound,
    markov_tail_bound,
    rademacher,
)
from dyadicbm.modulus import interval_tail_bound


def itertools_oracle(dist, n, alpha):
    """Independent enumeration over itertools.product."""
    lhs = 0.0
    k_mass = [0.0] * n
    for combo in itertools.product(range(dist.support_size), repeat=n):
        w = math.prod(dist.probabilities[i] for i in combo)
        s, top = 0.0, 0.0
        for k, i in enumerate(combo):
            s += dist.values[i]
            top = max(top, abs(s))
            if abs(s) >= alpha:
                k_mass[k] += w
        if top >= 3 * alpha:
            lhs += w
    return lhs, max(k_mass)


def test_distribution_validation():
    with pytest.raises(ValueError):
        FiniteStepDistribution((1.0,), (0.9,))
    with pytest.raises(ValueError):
        FiniteStepDistribution((1.0, -1.0), (1.2, -0.2))
    with pytest.raises(ValueError):
        GaussianStepDistribution(0.0)


def test_sign_walk_hand_case():
    # three +-1 steps: max |S_k| >= 2 exactly when the first two agree
    res = etemadi_exact(rademacher(), 3, 2 / 3)
    assert res.lhs == 0.5
    assert res.rhs_factor == 1.0
    assert res.holds()


def test_threshold_beyond_walk_range():
    res = etemadi_exact(rademacher(), 3, 4.0)
    assert res.lhs == 0.0
    assert res.rhs_factor == 0.0


def test_single_step_reduction():
    # n=1: P(|S_1| >= 3a) <= P(|S_1| >= a) = rhs <= 3*rhs
    for a in [0.0, 0.5, 1.0, 2.0]:
        res = etemadi_exact(rademacher(), 1, a)
        assert res.lhs <= res.rhs_factor <= 3 * res.rhs_factor


def test_matches_itertools_oracle():
    dist = FiniteStepDistribution((-2.0, 0.5, 1.0), (0.25, 0.25, 0.5))
    for n in [1, 2, 4, 6]:
        for alpha in [0.3, 1.0, 2.5]:
            res = etemadi_exact(dist, n, alpha)
            lhs, rhs = itertools_oracle(dist, n, alpha)
            assert res.lhs == pytest.approx(lhs, abs=1e-14)
            assert res.rhs_factor == pytest.approx(rhs, abs=1e-14)


def test_inequality_zero_tolerance_on_grid():
    steps = rademacher()
    alphas = [0.2 * i for i in range(1, 21)]
    for n in range(1, 13):
        for a in alphas:
            res = etemadi_exact(steps, n, a)
            assert res.lhs <= 3.0 * res.rhs_factor


def test_sides_non_increasing_in_alpha():
    steps = rademacher()
    alphas = np.linspace(0.0, 4.0, 30)
    results = [etemadi_exact(steps, 8, a) for a in alphas]
    for prev, cur in zip(results, results[1:]):
        assert cur.lhs <= prev.lhs
        assert cur.rhs_factor <= prev.rhs_factor


def test_enumeration_guards():
    with pytest.raises(ValueError):
        etemadi_exact(rademacher(), 24, 1.0)  # 2**24 > limit
    assert 2**23 < ENUM_LIMIT
    with pytest.raises(TypeError):
        etemadi_exact(GaussianStepDistribution(), 3, 1.0)
    with pytest.raises(ValueError):
        etemadi_exact(rademacher(), 0, 1.0)
    with pytest.raises(ValueError):
        etemadi_exact(rademacher(), 3, -0.5)


def test_chunked_enumeration_is_partition_independent():
    dist = FiniteStepDistribution((-1.0, 0.0, 2.0), (0.3, 0.3, 0.4))
    a = etemadi_exact(dist, 7, 1.2, _chunk=17)
    b = etemadi_exact(dist, 7, 1.2, _chunk=1 << 16)
    assert abs(a.lhs - b.lhs) <= 1e-12
    assert abs(a.rhs_factor - b.rhs_factor) <= 1e-12


def test_exact_result_invariant_enforced():
    with pytest.raises(ValueError):
        EtemadiResult(n=2, alpha=1.0, lhs=0.9, rhs_factor=0.1, method="exact")
    with pytest.raises(ValueError):
        EtemadiResult(n=2, alpha=1.0, lhs=1.4, rhs_factor=0.5, method="exact")


def test_mc_degenerate_threshold():
    res = etemadi_mc(rademacher(), 4, 0.0, 2000, seed=0)
    assert res.lhs == 1.0
    assert res.rhs_factor == 1.0
    assert res.holds()


def test_mc_trial_floor():
    with pytest.raises(ValueError):
        etemadi_mc(rademacher(), 4, 1.0, 999, seed=0)


def test_mc_reproducible_and_chunk_independent():
    a = etemadi_mc(GaussianStepDistribution(), 8, 1.0, 4000, seed=5)
    b = etemadi_mc(GaussianStepDistribution(), 8, 1.0, 4000, seed=5)
    assert (a.lhs, a.rhs_factor) == (b.lhs, b.rhs_factor)
    c = etemadi_mc(GaussianStepDistribution(), 8, 1.0, 4000, seed=6)
    assert (a.lhs, a.rhs_factor) != (c.lhs, c.rhs_factor)


def test_mc_agrees_with_exact_on_sign_walks():
    exact = etemadi_exact(rademacher(), 10, 1.0)
    mc = etemadi_mc(rademacher(), 10, 1.0, 1_000_000, seed=0)
    assert abs(mc.lhs - exact.lhs) <= 4 * mc.lhs_stderr
    assert abs(mc.rhs_factor - exact.rhs_factor) <= 4 * mc.rhs_stderr


def test_mc_gaussian_inequality_within_band():
    res = etemadi_mc(GaussianStepDistribution(), 64, 1.0, 100_000, seed=0)
    assert res.holds(4.0)


def test_markov_tail_bound_dominates_exact_tail():
    # exact two-sided tail of N(0,1) is erfc(c/sqrt(2))
    assert markov_tail_bound(2.0) == 3.0 / 16.0
    assert erfc(2.0 / math.sqrt(2)) == pytest.approx(0.0455, abs=2e-4)
    for c in np.linspace(1.4, 8.0, 40):
        assert erfc(c / math.sqrt(2)) <= markov_tail_bound(c)
    with pytest.raises(ValueError):
        markov_tail_bound(0.0)


def test_fourth_moment_bound_values_and_window_consistency():
    assert gaussian_fourth_moment_bound(1.0, 1.0) == 9.0
    with pytest.raises(ValueError):
        gaussian_fourth_moment_bound(0.0, 1.0)
    with pytest.raises(ValueError):
        gaussian_fourth_moment_bound(1.0, 0.0)
    # at the largest window span delta = 2 * 2**-n the bound becomes the
    # per-window constant 36 * alpha**-4 * 2**-2n
    for n in range(0, 8):
        for alpha in [0.5, 1.0, 2.0]:
            delta = 2.0 * 2.0**-n
            assert gaussian_fourth_moment_bound(alpha, delta) == pytest.approx(
                interval_tail_bound(n, alpha), rel=1e-15
            )


def test_fourth_moment_bound_dominates_transformed_tail():
    # P(|B(t+delta)-B(t)| >= alpha) = erfc(alpha / sqrt(2 delta))
    for alpha in [0.5, 1.0, 1.5]:
        for delta in [0.01, 0.125, 0.5]:
            exact = erfc(alpha / math.sqrt(2 * delta))
            assert exact <= gaussian_fourth_moment_bound(alpha, delta)
