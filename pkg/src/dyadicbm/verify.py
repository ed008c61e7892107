"""Statistical verification of the Brownian law on dyadic grids.

Checks cover the marginal law B(r) ~ N(0, r), the covariance identity
Cov(B(s), B(t)) = min(s, t), independence of increments over disjoint
intervals, and stationarity B(r2) - B(r1) =_d B(r2 - r1).  Moment checks use
pre-registered 4-standard-error bands with standard errors from normal
theory under the exact law; distributional checks use Kolmogorov-Smirnov
tests with asymptotic critical values at significance 0.01.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import stats
from scipy.special import kolmogi

from .defaults import as_dyadic, registered
from .dyadic import Dyadic, canonicalize
from .ensemble import Ensemble, generate_ensemble
from .report import CheckRecord, StatReport, band_record

KS_ALPHA = 0.01
BAND_WIDTH = 4.0


def dyadic_sub(a: Dyadic, b: Dyadic) -> Dyadic:
    """Exact difference a - b of dyadics (a >= b)."""
    lvl = max(a.level, b.level)
    return canonicalize(a.index_at_level(lvl) - b.index_at_level(lvl), lvl)


def check_mean(ens: Ensemble, r: Dyadic) -> CheckRecord:
    """Empirical mean of B(r) against 0 with theoretical stderr sqrt(r/N)."""
    stderr = math.sqrt(r.value / ens.count)
    return band_record(
        f"mean[{r.decimal()}]", 0.0, ens.mean_at(r), stderr, BAND_WIDTH
    )


def check_variance(ens: Ensemble, r: Dyadic) -> CheckRecord:
    """Empirical variance of B(r) against r; stderr r*sqrt(2/N)."""
    stderr = r.value * math.sqrt(2.0 / ens.count)
    return band_record(
        f"var[{r.decimal()}]", r.value, ens.var_at(r), stderr, BAND_WIDTH
    )


def check_covariance(ens: Ensemble, s: Dyadic, t: Dyadic) -> CheckRecord:
    """Empirical Cov(B(s), B(t)) against min(s, t).

    The standard error is the exact-law value sqrt((s*t + min(s,t)^2) / N)
    for the sample covariance of a bivariate normal pair.
    """
    target = min(s.value, t.value)
    stderr = math.sqrt((s.value * t.value + target * target) / ens.count)
    return band_record(
        f"cov[{s.decimal()},{t.decimal()}]", target, ens.cov(s, t), stderr, BAND_WIDTH
    )


def _increment_cov(ens, r1, r2, r3, r4) -> float:
    return (
        ens.cov(r2, r4) - ens.cov(r2, r3) - ens.cov(r1, r4) + ens.cov(r1, r3)
    )


def check_increment_independence(
    ens: Ensemble, r1: Dyadic, r2: Dyadic, r3: Dyadic, r4: Dyadic
) -> CheckRecord:
    """Correlation of B(r2)-B(r1) and B(r4)-B(r3) against 0, band 4/sqrt(N).

    Requires 0 <= r1 < r2 <= r3 < r4; the intervals may touch.
    """
    if not (r1 < r2 and (r2 < r3 or r2 == r3) and r3 < r4):
        raise ValueError("increments need 0 <= r1 < r2 <= r3 < r4")
    cov12 = _increment_cov(ens, r1, r2, r3, r4)
    var1 = _increment_cov(ens, r1, r2, r1, r2)
    var2 = _increment_cov(ens, r3, r4, r3, r4)
    corr = cov12 / math.sqrt(var1 * var2)
    stderr = 1.0 / math.sqrt(ens.count)
    name = f"corr-incr[({r1.decimal()},{r2.decimal()})x({r3.decimal()},{r4.decimal()})]"
    return band_record(name, 0.0, corr, stderr, BAND_WIDTH)


def check_increment_variance(ens: Ensemble, r1: Dyadic, r2: Dyadic) -> CheckRecord:
    """Var(B(r2) - B(r1)) against r2 - r1 (stationarity in second moments)."""
    if not r1 < r2:
        raise ValueError("increment needs r1 < r2")
    gap = r2.value - r1.value
    est = _increment_cov(ens, r1, r2, r1, r2)
    stderr = gap * math.sqrt(2.0 / ens.count)
    return band_record(
        f"var-incr[{r1.decimal()},{r2.decimal()}]", gap, est, stderr, BAND_WIDTH
    )


def _ks_record(name, statistic, p_value, critical, sizes) -> CheckRecord:
    return CheckRecord(
        name=name,
        target=0.0,
        estimate=float(statistic),
        stderr=0.0,
        band=float(critical),
        passed=bool(p_value >= KS_ALPHA),
        detail={"p_value": float(p_value), "alpha": KS_ALPHA,
                "method": "asymp", "sizes": sizes},
    )


def check_marginal_normality(
    ens: Ensemble, r: Dyadic, n_samples: int | None = None
) -> CheckRecord:
    """One-sample KS of B(r)/sqrt(r) against N(0,1) at significance 0.01."""
    x = ens.samples_at(r, n_samples) / math.sqrt(r.value)
    res = stats.kstest(x, "norm", method="asymp")
    critical = kolmogi(KS_ALPHA) / math.sqrt(len(x))
    return _ks_record(
        f"ks-normal[{r.decimal()}]", res.statistic, res.pvalue, critical, [len(x)]
    )


def check_stationarity(
    ens: Ensemble, r1: Dyadic, r2: Dyadic, n_samples: int | None = None
) -> CheckRecord:
    """Two-sample KS of B(r2)-B(r1) against B(r2-r1) at significance 0.01.

    Both samples come from the same paths, which only makes the test
    conservative under the null (they coincide entirely when r1 = 0).
    """
    if not r1 < r2:
        raise ValueError("stationarity needs r1 < r2")
    diff = ens.samples_at(r2, n_samples) - ens.samples_at(r1, n_samples)
    direct = ens.samples_at(dyadic_sub(r2, r1), n_samples)
    if np.array_equal(diff, direct):
        statistic, p_value = 0.0, 1.0
    else:
        res = stats.ks_2samp(diff, direct, method="asymp")
        statistic, p_value = res.statistic, res.pvalue
    n, m = len(diff), len(direct)
    critical = kolmogi(KS_ALPHA) * math.sqrt((n + m) / (n * m))
    return _ks_record(
        f"ks-stationary[{r1.decimal()},{r2.decimal()}]",
        statistic, p_value, critical, [n, m],
    )


def law_suite(
    n_paths: int | None = None,
    base_seed: int = 0,
    *,
    horizon: int | None = None,
    level: int | None = None,
    ks_samples: int | None = None,
    workers: int = 1,
    source_factory=None,
) -> StatReport:
    """Run the registered law checks and return a StatReport.

    The set of checked points, pairs, and interval quadruples is fixed by
    the shipped defaults file; only sample sizes, seed, grid geometry, and
    parallelism can be overridden.
    """
    reg = registered()
    law = reg["law"]
    horizon = law["horizon"] if horizon is None else horizon
    level = law["level"] if level is None else level
    n_paths = law["paths"] if n_paths is None else n_paths
    ks_samples = law["ks_samples"] if ks_samples is None else ks_samples
    if n_paths < 1000:
        raise ValueError("law suite needs at least 10^3 paths")
    ks_samples = min(ks_samples, n_paths)

    mean_var = [as_dyadic(p) for p in law["mean_var_points"]]
    cov_pts = [as_dyadic(p) for p in law["cov_points"]]
    marginal = [as_dyadic(p) for p in law["marginal_points"]]
    quads = [tuple(as_dyadic(p) for p in q) for q in law["ii_quadruples"]]
    pairs = [tuple(as_dyadic(p) for p in q) for q in law["is_pairs"]]

    tracked = {canonicalize(0, 0)}
    tracked.update(cov_pts, marginal, mean_var)
    for quad in quads:
        tracked.update(quad)
    for r1, r2 in pairs:
        tracked.update((r1, r2, dyadic_sub(r2, r1)))
    track_points = tuple(sorted(tracked))

    ens = generate_ensemble(
        horizon,
        level,
        n_paths,
        base_seed,
        track_points=track_points,
        retain_cap=ks_samples,
        workers=workers,
        source_factory=source_factory,
    )

    records = []
    for r in mean_var:
        records.append(check_mean(ens, r))
        records.append(check_variance(ens, r))
    for s in cov_pts:
        for t in cov_pts:
            records.append(check_covariance(ens, s, t))
    for r in marginal:
        records.append(check_marginal_normality(ens, r, ks_samples))
    for quad in quads:
        records.append(check_increment_independence(ens, *quad))
    for r1, r2 in pairs:
        records.append(check_increment_variance(ens, r1, r2))
        records.append(check_stationarity(ens, r1, r2, ks_samples))

    config = {
        "defaults_version": reg["version"],
        "suite": "law",
        "horizon": horizon,
        "level": level,
        "paths": n_paths,
        "base_seed": base_seed,
        "ks_samples": ks_samples,
        "ks_alpha": KS_ALPHA,
        "band_width": BAND_WIDTH,
        "generator_id": ens.config.generator_id,
        "track_points": [[r.numerator, r.level] for r in track_points],
    }
    return StatReport("law", config, records)
