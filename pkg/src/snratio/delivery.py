"""Delivery-probability analysis for aligned content transmission.

Setting: helpers form a planar Poisson process, each caches one file drawn
from a popularity profile, and all helpers transmitting the same file use
the same modulation so their signals combine at a receiver requesting that
file.  Conditioned on the request, the SIR is then a ratio of shot noises
weighted by fading, and the conditional delivery probability P(SIR > theta)
follows from the shot-noise ratio tail.

This module provides the conditional probability in its expectation form,
its alpha = 4 specialization, a series form driven by empirical inverse
moments of the fading-weighted popularity of the competing files, upper and
lower bounds, the high-threshold approximation, the closed form for the
conventional nearest-helper service without alignment, and the resulting
alignment gain.

All closed forms are independent of the helper density; the density is
carried on the scenario only for the Monte Carlo simulator.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from .errors import (
    ContractError,
    DegenerateScenarioError,
    MomentReliabilityWarning,
    ParameterDomainError,
    QuadratureError,
    SeriesDivergenceError,
)
from .mc import Estimate, substream
from .popularity import PopularityProfile, ZipfSpec, zipf
from .shotnoise import SeriesControl, reciprocal_gamma

#: Target size of the per-chunk fading matrix (samples x files).
_FADING_CHUNK_CELLS = 4_000_000

#: Relative-standard-error threshold above which an empirical inverse moment
#: is flagged as untrustworthy.
_MOMENT_RSE_LIMIT = 0.10

TOTAL_METHODS = ("expectation", "alpha4", "series", "upper", "lower", "baseline")


@dataclass(frozen=True)
class Scenario:
    """A network instance: popularity profile, path loss, SIR thresholds, density."""

    profile: PopularityProfile
    alpha: float
    thresholds: np.ndarray
    helper_density: float

    def __init__(self, profile, alpha, thresholds, helper_density):
        if not alpha > 2.0:
            raise ParameterDomainError(f"alpha must exceed 2, got {alpha}")
        if not helper_density > 0.0:
            raise ParameterDomainError(f"helper_density must be positive, got {helper_density}")
        th = np.atleast_1d(np.asarray(thresholds, dtype=float)).copy()
        if th.size == 1 and profile.n_files > 1:
            th = np.full(profile.n_files, th[0])
        if th.size != profile.n_files:
            raise ParameterDomainError(
                f"need one threshold per file: {th.size} thresholds, {profile.n_files} files"
            )
        if np.any(th <= 0.0):
            raise ParameterDomainError("thresholds must be positive")
        th.setflags(write=False)
        object.__setattr__(self, "profile", profile)
        object.__setattr__(self, "alpha", float(alpha))
        object.__setattr__(self, "thresholds", th)
        object.__setattr__(self, "helper_density", float(helper_density))

    @classmethod
    def from_zipf(cls, n_files, gamma, theta, alpha, helper_density=0.1):
        return cls(zipf(ZipfSpec(n_files, gamma)), alpha, theta, helper_density)

    @property
    def n_files(self) -> int:
        return self.profile.n_files

    @property
    def delta(self) -> float:
        return 2.0 / self.alpha


@dataclass(frozen=True)
class FadingBatch:
    """Size and seed of the fading sample used for the expectation forms."""

    sample_count: int = 20000
    seed: int = 0

    def __post_init__(self):
        if self.sample_count < 1:
            raise ParameterDomainError("sample_count must be at least 1")


def _check_file_index(n_files: int, k: int):
    if not 0 <= k < n_files:
        raise ParameterDomainError(f"file index {k} out of range for {n_files} files")


def g_given_h(profile: PopularityProfile, k: int, alpha: float, h) -> float:
    """Fading-weighted popularity of the files competing with file ``k``.

    ``h`` holds one unit-mean exponential draw per file; the value is the
    sum over the other files of ``a_n * h_n ** (2 / alpha)``.
    """
    h = np.asarray(h, dtype=float)
    w = profile.weights * h ** (2.0 / alpha)
    return float(w.sum() - w[k])


def g_sample(profile: PopularityProfile, k: int, alpha: float,
             rng: np.random.Generator) -> float:
    """One draw of the competing weighted popularity for file ``k``."""
    if profile.n_files == 1:
        raise DegenerateScenarioError(
            "a single-file database has no competing files; "
            "delivery succeeds with probability 1"
        )
    _check_file_index(profile.n_files, k)
    return g_given_h(profile, k, alpha, rng.exponential(size=profile.n_files))


def _fading_chunk_size(n_files: int) -> int:
    return max(1, _FADING_CHUNK_CELLS // max(1, n_files))


def _fading_chunks(profile: PopularityProfile, alpha: float, batch: FadingBatch):
    """Yield (h, weighted, row_total) fading chunks from the batch stream.

    One Philox substream drives the whole batch, so different consumers of
    the same batch see the same draws (common random numbers).
    """
    rng = substream(batch.seed, 0)
    n = profile.n_files
    chunk = _fading_chunk_size(n)
    d = 2.0 / alpha
    left = batch.sample_count
    while left > 0:
        m = min(chunk, left)
        left -= m
        h = rng.exponential(size=(m, n))
        weighted = profile.weights * h**d
        yield h, weighted, weighted.sum(axis=1)


class _RunningMean:
    """Streaming mean/stderr accumulator."""

    __slots__ = ("n", "total", "total_sq")

    def __init__(self):
        self.n = 0
        self.total = 0.0
        self.total_sq = 0.0

    def add(self, values: np.ndarray):
        self.n += values.size
        self.total += float(values.sum())
        self.total_sq += float(np.square(values).sum())

    def estimate(self, seed: int) -> Estimate:
        mean = self.total / self.n
        if self.n > 1:
            var = max(0.0, (self.total_sq - self.n * mean * mean) / (self.n - 1))
        else:
            var = 0.0
        return Estimate(mean, math.sqrt(var / self.n), self.n, seed)


def _tail_integrand(h_k, g, a_k, theta, alpha):
    """Per-sample conditional success probability given (h_k, g_k)."""
    d = 2.0 / alpha
    ratio = (h_k / theta) ** d * (a_k / g)
    arg = (1.0 - 2.0 / (1.0 + ratio)) * math.tan(math.pi / alpha)
    return np.arctan(arg) * (alpha / (2.0 * math.pi)) + 0.5


def conditional_delivery_prob(k: int, scenario: Scenario, batch: FadingBatch) -> Estimate:
    """Conditional delivery probability of file ``k``, expectation form.

    Averages the shot-noise-ratio tail over the joint fading of the
    requested file and its competitors.  A single-file database succeeds
    with probability 1 by convention (empty interference).
    """
    if scenario.n_files == 1:
        return Estimate(1.0, 0.0, batch.sample_count, batch.seed)
    _check_file_index(scenario.n_files, k)
    a_k = float(scenario.profile.weights[k])
    theta = float(scenario.thresholds[k])
    acc = _RunningMean()
    for h, weighted, totals in _fading_chunks(scenario.profile, scenario.alpha, batch):
        g = totals - weighted[:, k]
        acc.add(_tail_integrand(h[:, k], g, a_k, theta, scenario.alpha))
    return acc.estimate(batch.seed)


def conditional_delivery_prob_alpha4(k: int, scenario: Scenario, batch: FadingBatch) -> Estimate:
    """The arctan specialization of the conditional probability at alpha = 4."""
    if scenario.alpha != 4.0:
        raise ContractError(f"this form requires alpha = 4, got {scenario.alpha}")
    if scenario.n_files == 1:
        return Estimate(1.0, 0.0, batch.sample_count, batch.seed)
    _check_file_index(scenario.n_files, k)
    a_k = float(scenario.profile.weights[k])
    theta = float(scenario.thresholds[k])
    acc = _RunningMean()
    for h, weighted, totals in _fading_chunks(scenario.profile, scenario.alpha, batch):
        g = totals - weighted[:, k]
        vals = 1.0 - (2.0 / math.pi) * np.arctan((g / a_k) * np.sqrt(theta / h[:, k]))
        acc.add(vals)
    return acc.estimate(batch.seed)


def inverse_g_moments(profile: PopularityProfile, k: int, alpha: float,
                      batch: FadingBatch, m_max: int):
    """Empirical negative moments E[g_k ** -m] for m = 1 .. m_max.

    Returns ``(means, rses)``; each relative standard error above 10%
    marks a moment whose Monte Carlo value should not be trusted (high
    inverse moments can be heavy-tailed or outright infinite).
    """
    if profile.n_files == 1:
        raise DegenerateScenarioError("no competing files to take moments over")
    _check_file_index(profile.n_files, k)
    samples = []
    for _, weighted, totals in _fading_chunks(profile, alpha, batch):
        samples.append(totals - weighted[:, k])
    g = np.concatenate(samples)
    means = np.empty(m_max)
    rses = np.empty(m_max)
    n = g.size
    for m in range(1, m_max + 1):
        vals = g ** (-float(m))
        mu = float(vals.mean())
        sd = float(vals.std(ddof=1)) if n > 1 else 0.0
        means[m - 1] = mu
        rses[m - 1] = sd / (math.sqrt(n) * mu) if mu > 0 else np.inf
    return means, rses


def conditional_delivery_prob_series(k: int, scenario: Scenario, max_terms: int,
                                     batch: FadingBatch, tol: float = 1e-10) -> Estimate:
    """Conditional delivery probability as a series over inverse moments.

    Each term couples ``(a_k / theta_k ** (2/alpha)) ** m`` with the
    empirical moment E[g_k ** -m]; reciprocal-gamma poles contribute exactly
    zero.  Terms that grow for three consecutive orders raise
    :class:`SeriesDivergenceError`: the sufficient condition that the
    per-term root stays below 1 is violated at this popularity/threshold.
    """
    if scenario.n_files == 1:
        return Estimate(1.0, 0.0, batch.sample_count, batch.seed)
    ctrl = SeriesControl(max_terms=max_terms, tol=tol)
    a_k = float(scenario.profile.weights[k])
    theta = float(scenario.thresholds[k])
    d = scenario.delta
    y = a_k / theta**d
    moments, rses = inverse_g_moments(scenario.profile, k, scenario.alpha, batch, max_terms)

    total = 0.0
    var = 0.0
    prev_mag = None
    growth = 0
    for m in range(1, max_terms + 1):
        rg = reciprocal_gamma(1.0 - m * d)
        if rg == 0.0:
            continue
        coef = (1.0 if m % 2 == 1 else -1.0) * rg * y**m
        term = coef * moments[m - 1]
        mag = abs(term)
        if not math.isfinite(mag):
            raise SeriesDivergenceError(
                f"series term {m} overflowed (argument {y:g})", argument=y)
        if rses[m - 1] > _MOMENT_RSE_LIMIT and mag >= tol:
            warnings.warn(
                f"inverse moment m={m} has relative standard error "
                f"{rses[m - 1]:.1%}; series value may be unreliable",
                MomentReliabilityWarning,
                stacklevel=2,
            )
        total += term
        var += (coef * moments[m - 1] * rses[m - 1]) ** 2
        if mag < tol:
            return Estimate(total, math.sqrt(var), batch.sample_count, batch.seed)
        if prev_mag is not None and mag > prev_mag:
            growth += 1
            if growth >= 3:
                raise SeriesDivergenceError(
                    "series terms grew for 3 consecutive orders: the "
                    f"per-term convergence condition fails at argument {y:g} "
                    f"(popularity {a_k:g} too large for threshold {theta:g})",
                    argument=y,
                )
        else:
            growth = 0
        prev_mag = mag
    raise SeriesDivergenceError(
        f"series did not reach tol={tol:g} within {max_terms} terms", argument=y)


def high_sir_approx(a_k: float, theta: float, alpha: float) -> float:
    """Leading-order conditional delivery probability for large thresholds.

    Linear in ``a_k / (1 - a_k)``; requires ``a_k < 1``.
    """
    if not 0.0 < a_k < 1.0:
        raise ContractError(f"a_k must lie in (0, 1), got {a_k}")
    if not theta > 0.0:
        raise ParameterDomainError(f"theta must be positive, got {theta}")
    if not alpha > 2.0:
        raise ParameterDomainError(f"alpha must exceed 2, got {alpha}")
    d = 2.0 / alpha
    return (math.sin(math.pi * d) / (math.pi * d)) * theta ** (-d) * a_k / (1.0 - a_k)


def delivery_upper_bound(a_k: float, theta: float, alpha: float) -> float:
    """Closed-form upper bound on the conditional delivery probability."""
    if not 0.0 < a_k <= 1.0:
        raise ParameterDomainError(f"a_k must lie in (0, 1], got {a_k}")
    if theta < 0.0:
        raise ParameterDomainError(f"theta must be nonnegative, got {theta}")
    if not alpha > 2.0:
        raise ParameterDomainError(f"alpha must exceed 2, got {alpha}")
    return 1.0 / (1.0 + theta ** (2.0 / alpha) * (1.0 / a_k - 1.0))


def delivery_lower_bound(a_k: float, theta: float, alpha: float,
                         batch: FadingBatch) -> Estimate:
    """Lower bound on the conditional delivery probability (fading average).

    Monte Carlo average over the requested file's fading alone; at
    ``a_k = 1`` the bound equals 1 exactly.
    """
    if not 0.0 < a_k <= 1.0:
        raise ParameterDomainError(f"a_k must lie in (0, 1], got {a_k}")
    if not theta > 0.0:
        raise ParameterDomainError(f"theta must be positive, got {theta}")
    if not alpha > 2.0:
        raise ParameterDomainError(f"alpha must exceed 2, got {alpha}")
    if a_k == 1.0:
        return Estimate(1.0, 0.0, batch.sample_count, batch.seed)
    d = 2.0 / alpha
    eta = a_k / ((1.0 - a_k) * special.gamma(1.0 + d) * theta**d)
    rng = substream(batch.seed, 0)
    acc = _RunningMean()
    left = batch.sample_count
    while left > 0:
        m = min(left, 1_000_000)
        left -= m
        h = rng.exponential(size=m)
        arg = (1.0 - 2.0 / (1.0 + eta * h**d)) * math.tan(math.pi / alpha)
        acc.add(0.5 + (alpha / (2.0 * math.pi)) * np.arctan(arg))
    return acc.estimate(batch.seed)


class Alpha4Bounds(NamedTuple):
    upper: float
    lower_a: float
    lower_b: float


def alpha4_bounds(a_k: float, theta: float) -> Alpha4Bounds:
    """Closed-form upper and lower bounds at alpha = 4.

    ``lower_a`` is the incomplete-gamma bound, evaluated through the scaled
    complementary error function for stability at all skews; ``lower_b`` is
    the simpler arctan bound, which is never tighter than ``lower_a``.
    """
    if not 0.0 < a_k <= 1.0:
        raise ParameterDomainError(f"a_k must lie in (0, 1], got {a_k}")
    if not theta > 0.0:
        raise ParameterDomainError(f"theta must be positive, got {theta}")
    upper = 1.0 / (1.0 + math.sqrt(theta) * (1.0 / a_k - 1.0))
    zeta = (math.pi * theta / 4.0) * ((1.0 - a_k) / a_k) ** 2
    lower_a = float(special.erfcx(math.sqrt(zeta)))
    lower_b = 1.0 - (2.0 / math.pi) * math.atan(
        (math.pi * math.sqrt(theta) / 2.0) * (1.0 / a_k - 1.0)
    )
    return Alpha4Bounds(upper, lower_a, lower_b)


def mu_integral(theta: float, alpha: float, tol: float = 1e-8) -> float:
    """The near-field interference integral of the nearest-helper service.

    Integral over [1, inf) of 1 / (1 + x ** (alpha/2) / theta), evaluated by
    adaptive quadrature to absolute tolerance ``tol``; the algebraic tail is
    folded in by the inversion x -> 1/y, which maps the domain to (0, 1].
    """
    if not theta > 0.0:
        raise ParameterDomainError(f"theta must be positive, got {theta}")
    if not alpha > 2.0:
        raise ParameterDomainError(f"alpha must exceed 2, got {alpha}")
    half = alpha / 2.0

    def integrand(y):
        return theta * y ** (half - 2.0) / (theta * y**half + 1.0)

    val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=tol / 2.0, limit=200)
    if err > tol:
        raise QuadratureError(
            f"mu({theta}, {alpha}) quadrature error {err:g} exceeds {tol:g}")
    return float(val)


def baseline_delivery_prob(a_k: float, theta: float, alpha: float) -> float:
    """Conditional delivery probability for nearest-helper service, no alignment.

    Every co-channel helper, including those holding the same file, appears
    as independently faded interference; only the nearest helper holding the
    requested file serves.
    """
    if not 0.0 < a_k <= 1.0:
        raise ParameterDomainError(f"a_k must lie in (0, 1], got {a_k}")
    if not theta > 0.0:
        raise ParameterDomainError(f"theta must be positive, got {theta}")
    if not alpha > 2.0:
        raise ParameterDomainError(f"alpha must exceed 2, got {alpha}")
    d = 2.0 / alpha
    scale = (math.pi * d) / math.sin(math.pi * d)
    return 1.0 / (1.0 + mu_integral(theta, alpha)
                  + theta**d * scale * (1.0 / a_k - 1.0))


def alignment_gain_approx(a_1: float, theta_1: float, alpha: float) -> float:
    """Approximate ratio of delivery probabilities with and without alignment.

    Driven by the most popular file; grows with its popularity and tends to
    ``1 + mu(theta, alpha)`` as that popularity approaches 1.
    """
    if not 0.0 < a_1 <= 1.0:
        raise ParameterDomainError(f"a_1 must lie in (0, 1], got {a_1}")
    return 1.0 + mu_integral(theta_1, alpha) / (
        1.0 + theta_1 ** (2.0 / alpha) * (1.0 / a_1 - 1.0)
    )


def _total_mc(scenario: Scenario, batch: FadingBatch, alpha4: bool) -> Estimate:
    """Popularity-weighted total via the shared fading batch.

    Accumulates the weighted per-sample value so the standard error reflects
    the correlation between per-file terms evaluated on common draws.
    """
    w = scenario.profile.weights
    acc = _RunningMean()
    for h, weighted, totals in _fading_chunks(scenario.profile, scenario.alpha, batch):
        mix = np.zeros(h.shape[0])
        for k in range(scenario.n_files):
            g = totals - weighted[:, k]
            theta = float(scenario.thresholds[k])
            if alpha4:
                vals = 1.0 - (2.0 / math.pi) * np.arctan(
                    (g / w[k]) * np.sqrt(theta / h[:, k]))
            else:
                vals = _tail_integrand(h[:, k], g, w[k], theta, scenario.alpha)
            mix += w[k] * vals
        acc.add(mix)
    return acc.estimate(batch.seed)


def total_delivery_prob(scenario: Scenario, method: str, batch: FadingBatch,
                        max_terms: int = 60) -> Estimate:
    """Popularity-weighted delivery probability under the chosen method.

    ``method`` is one of ``expectation``, ``alpha4``, ``series``, ``upper``,
    ``lower`` or ``baseline``.  Closed-form methods return zero standard
    error; series divergence propagates to the caller.
    """
    if method not in TOTAL_METHODS:
        raise ParameterDomainError(f"unknown method {method!r}; expected one of {TOTAL_METHODS}")
    w = scenario.profile.weights
    n = scenario.n_files
    if n == 1:
        if method == "baseline":
            return Estimate(baseline_delivery_prob(1.0, float(scenario.thresholds[0]),
                                                   scenario.alpha), 0.0, 1, batch.seed)
        return Estimate(1.0, 0.0, batch.sample_count, batch.seed)

    if method == "expectation":
        return _total_mc(scenario, batch, alpha4=False)
    if method == "alpha4":
        if scenario.alpha != 4.0:
            raise ContractError(f"method 'alpha4' requires alpha = 4, got {scenario.alpha}")
        return _total_mc(scenario, batch, alpha4=True)
    if method == "series":
        total = 0.0
        var = 0.0
        for k in range(n):
            est = conditional_delivery_prob_series(k, scenario, max_terms, batch)
            total += w[k] * est.mean
            var += (w[k] * est.stderr) ** 2
        return Estimate(total, math.sqrt(var), batch.sample_count, batch.seed)
    if method == "upper":
        total = sum(w[k] * delivery_upper_bound(w[k], float(scenario.thresholds[k]),
                                                scenario.alpha) for k in range(n))
        return Estimate(float(total), 0.0, 1, batch.seed)
    if method == "lower":
        total = 0.0
        var = 0.0
        for k in range(n):
            est = delivery_lower_bound(w[k], float(scenario.thresholds[k]),
                                       scenario.alpha, batch)
            total += w[k] * est.mean
            var += (w[k] * est.stderr) ** 2
        return Estimate(total, math.sqrt(var), batch.sample_count, batch.seed)
    # baseline
    total = sum(w[k] * baseline_delivery_prob(w[k], float(scenario.thresholds[k]),
                                              scenario.alpha) for k in range(n))
    return Estimate(float(total), 0.0, 1, batch.seed)
