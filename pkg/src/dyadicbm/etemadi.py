"""The maximal inequality for partial sums, as an executable object.

For independent steps X_1..X_n with partial sums S_k, the inequality says

    P(max_k |S_k| >= 3*alpha) <= 3 * max_k P(|S_k| >= alpha).

Finite-support step laws get an exact oracle that enumerates every outcome
sequence and sums path probabilities; continuous (Gaussian) steps get a
Monte Carlo estimator with counter-based per-trial randomness, so results
are independent of trial chunking.  The fourth-moment tail bound
P(|N(0,1)| >= c) <= 3/c**4 used alongside the inequality lives here too.
Threshold events are closed (ties count as exceeding).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .defaults import registered
from .noise import GENERATOR_ID, keyed_u64
from .report import StatReport, band_record, upper_bound_record

ENUM_LIMIT = 10**7
MIN_TRIALS = 1000
_CHUNK = 1 << 14
_MC_STREAM = 0x6574656D616469  # distinct key domain for trial randomness


@dataclass(frozen=True)
class FiniteStepDistribution:
    """Step law with finite support {(value, probability)}."""

    values: tuple
    probabilities: tuple

    def __post_init__(self):
        if len(self.values) != len(self.probabilities) or not self.values:
            raise ValueError("support and probabilities must match and be non-empty")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("probabilities must be non-negative")
        if abs(sum(self.probabilities) - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1 within 1e-12")

    @property
    def support_size(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class GaussianStepDistribution:
    """Centered normal step law with the given standard deviation."""

    sd: float = 1.0

    def __post_init__(self):
        if not self.sd > 0:
            raise ValueError("standard deviation must be positive")


def rademacher() -> FiniteStepDistribution:
    return FiniteStepDistribution((-1.0, 1.0), (0.5, 0.5))


@dataclass(frozen=True)
class EtemadiResult:
    """Both sides of the inequality at threshold alpha for n steps."""

    n: int
    alpha: float
    lhs: float
    rhs_factor: float
    method: str
    trials: int | None = None
    lhs_stderr: float | None = None
    rhs_stderr: float | None = None

    def __post_init__(self):
        if not (0.0 <= self.lhs <= 1.0 and 0.0 <= self.rhs_factor <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.method == "exact" and self.lhs > 3.0 * self.rhs_factor:
            raise ValueError(
                "exact enumeration violated the maximal inequality; "
                "this is a bug in the oracle"
            )

    @property
    def bound(self) -> float:
        return 3.0 * self.rhs_factor

    def combined_stderr(self) -> float:
        if self.method == "exact":
            return 0.0
        return math.sqrt(self.lhs_stderr**2 + 9.0 * self.rhs_stderr**2)

    def holds(self, width: float = 4.0) -> bool:
        """Inequality check: exact results get zero tolerance, Monte Carlo
        results get a `width`-standard-error allowance for sampling noise."""
        return self.lhs <= self.bound + width * self.combined_stderr()


def etemadi_exact(
    dist: FiniteStepDistribution, n: int, alpha: float, _chunk: int = 1 << 16
) -> EtemadiResult:
    """Exact probabilities by exhaustive enumeration of all s**n sequences."""
    if not isinstance(dist, FiniteStepDistribution):
        raise TypeError("exact enumeration needs a finite-support distribution")
    if n < 1:
        raise ValueError("need at least one step")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    s = dist.support_size
    total = s**n
    if total > ENUM_LIMIT:
        raise ValueError(
            f"enumeration of {s}**{n} = {total} outcomes exceeds {ENUM_LIMIT}"
        )
    values = np.asarray(dist.values)
    probs = np.asarray(dist.probabilities)
    place = s ** np.arange(n, dtype=np.int64)

    lhs_mass = 0.0
    k_mass = np.zeros(n)
    total_mass = 0.0
    for start in range(0, total, _chunk):
        idx = np.arange(start, min(start + _chunk, total), dtype=np.int64)
        digits = (idx[:, None] // place[None, :]) % s
        sums = np.cumsum(values[digits], axis=1)
        weights = probs[digits].prod(axis=1)
        total_mass += float(weights.sum())
        abs_sums = np.abs(sums)
        lhs_mass += float(weights[abs_sums.max(axis=1) >= 3.0 * alpha].sum())
        k_mass += (weights[:, None] * (abs_sums >= alpha)).sum(axis=0)
    if abs(total_mass - 1.0) > 1e-12:
        raise ArithmeticError(
            f"enumerated mass {total_mass} drifted from 1 beyond 1e-12"
        )
    return EtemadiResult(
        n=n,
        alpha=alpha,
        lhs=min(lhs_mass, 1.0),
        rhs_factor=min(float(k_mass.max()), 1.0),
        method="exact",
    )


def _mc_steps(dist, stream_seed: int, lo: int, hi: int, n: int) -> np.ndarray:
    """Steps for trials lo..hi-1, keyed by (stream, trial, step)."""
    trials = np.arange(lo, hi, dtype=np.uint64)
    nums = np.repeat(trials, n)
    lvls = np.tile(np.arange(1, n + 1, dtype=np.uint64), hi - lo)
    seeds = np.full(nums.shape, stream_seed, dtype=np.uint64)
    if isinstance(dist, GaussianStepDistribution):
        z = _kernels.normals(seeds, nums, lvls)
        return (z * dist.sd).reshape(hi - lo, n)
    u = _kernels.uniforms(seeds, nums, lvls)
    cum = np.cumsum(np.asarray(dist.probabilities))
    idx = np.minimum(
        np.searchsorted(cum, u, side="left"), dist.support_size - 1
    )
    return np.asarray(dist.values)[idx].reshape(hi - lo, n)


def etemadi_mc(
    dist, n: int, alpha: float, trials: int, seed: int
) -> EtemadiResult:
    """Monte Carlo estimate of both sides from the same trials."""
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials")
    if n < 1:
        raise ValueError("need at least one step")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    stream_seed = keyed_u64(seed, _MC_STREAM, 0)
    lhs_count = 0
    k_counts = np.zeros(n, dtype=np.int64)
    for lo in range(0, trials, _CHUNK):
        hi = min(lo + _CHUNK, trials)
        sums = np.cumsum(_mc_steps(dist, stream_seed, lo, hi, n), axis=1)
        abs_sums = np.abs(sums)
        lhs_count += int((abs_sums.max(axis=1) >= 3.0 * alpha).sum())
        k_counts += (abs_sums >= alpha).sum(axis=0)
    lhs = lhs_count / trials
    p_k = k_counts / trials
    worst = int(np.argmax(p_k))
    rhs = float(p_k[worst])
    return EtemadiResult(
        n=n,
        alpha=alpha,
        lhs=lhs,
        rhs_factor=rhs,
        method="monte-carlo",
        trials=trials,
        lhs_stderr=math.sqrt(lhs * (1.0 - lhs) / trials),
        rhs_stderr=math.sqrt(rhs * (1.0 - rhs) / trials),
    )


def markov_tail_bound(c: float) -> float:
    """Fourth-moment Markov bound P(|N(0,1)| >= c) <= 3/c**4."""
    if c <= 0:
        raise ValueError("threshold must be positive")
    return 3.0 / c**4


def gaussian_fourth_moment_bound(alpha: float, delta: float) -> float:
    """Tail bound 9 * alpha**-4 * delta**2 for a N(0, delta) increment.

    This is the Markov step applied at c = alpha/sqrt(delta): the chance
    that an increment over a time span delta exceeds alpha in absolute
    value is at most 3 * (sqrt(delta)/alpha)**4 = 9*alpha**-4*delta**2
    after rounding 3 up through the square.
    """
    if alpha <= 0 or delta <= 0:
        raise ValueError("alpha and delta must be positive")
    return 9.0 * alpha**-4 * delta**2


def etemadi_suite(
    alphas=None,
    seed: int = 0,
    *,
    exact_max_n: int | None = None,
    mc_n: int | None = None,
    mc_trials: int | None = None,
    mc_alphas=None,
    gaussian_n: int | None = None,
    gaussian_trials: int | None = None,
    gaussian_alphas=None,
) -> StatReport:
    """Exact inequality checks on sign steps plus Monte Carlo suites."""
    reg = registered()
    et = reg["etemadi"]
    alphas = list(et["alphas"] if alphas is None else alphas)
    exact_max_n = et["exact_max_n"] if exact_max_n is None else exact_max_n
    mc_n = et["mc_n"] if mc_n is None else mc_n
    mc_trials = et["mc_trials"] if mc_trials is None else mc_trials
    mc_alphas = list(et["mc_alphas"] if mc_alphas is None else mc_alphas)
    gaussian_n = et["gaussian_n"] if gaussian_n is None else gaussian_n
    gaussian_trials = (
        et["gaussian_trials"] if gaussian_trials is None else gaussian_trials
    )
    gaussian_alphas = list(
        et["gaussian_alphas"] if gaussian_alphas is None else gaussian_alphas
    )
    if not alphas:
        raise ValueError("alpha grid must be non-empty")

    steps = rademacher()
    records = []
    for n in range(1, exact_max_n + 1):
        for a in alphas:
            res = etemadi_exact(steps, n, a)
            records.append(
                upper_bound_record(
                    f"exact-signs[n={n},alpha={a}]",
                    res.bound,
                    res.lhs,
                    detail={"rhs_factor": res.rhs_factor, "method": "exact"},
                )
            )

    for a in mc_alphas:
        exact = etemadi_exact(steps, mc_n, a)
        mc = etemadi_mc(steps, mc_n, a, mc_trials, seed)
        records.append(
            band_record(
                f"mc-vs-exact-lhs[n={mc_n},alpha={a}]",
                exact.lhs,
                mc.lhs,
                mc.lhs_stderr,
                detail={"trials": mc_trials},
            )
        )
        records.append(
            band_record(
                f"mc-vs-exact-rhs[n={mc_n},alpha={a}]",
                exact.rhs_factor,
                mc.rhs_factor,
                mc.rhs_stderr,
                detail={"trials": mc_trials},
            )
        )

    for a in gaussian_alphas:
        mc = etemadi_mc(GaussianStepDistribution(), gaussian_n, a,
                        gaussian_trials, seed)
        records.append(
            upper_bound_record(
                f"mc-gaussian[n={gaussian_n},alpha={a}]",
                mc.bound + 4.0 * mc.combined_stderr(),
                mc.lhs,
                stderr=mc.combined_stderr(),
                detail={"rhs_factor": mc.rhs_factor, "trials": gaussian_trials},
            )
        )

    config = {
        "defaults_version": reg["version"],
        "suite": "etemadi",
        "alphas": alphas,
        "exact_max_n": exact_max_n,
        "mc_n": mc_n,
        "mc_trials": mc_trials,
        "mc_alphas": mc_alphas,
        "gaussian_n": gaussian_n,
        "gaussian_trials": gaussian_trials,
        "gaussian_alphas": gaussian_alphas,
        "seed": seed,
        "generator_id": GENERATOR_ID,
    }
    return StatReport("etemadi", config, records)
