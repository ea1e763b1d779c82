"""Monte Carlo oracle: planar Poisson sampling, shot noise, and SIR trials.

The infinite plane is approximated by a disk around the origin.  The disk
radius for a process of density ``lam`` is the larger of two rules:

* the expected shot-noise mass beyond the disk,
  ``2 pi lam R**(2-alpha) / (alpha - 2)``, stays below ``tail_tol``;
* the expected in-disk point count stays at least ``pi * coverage**2``,
  so the near field of the process is resolved even at low densities.

With ``tail_compensation`` on (the default) the analytic mean of the
beyond-disk contribution is added back to every truncated sum, so what is
lost to the window is only the zero-mean fluctuation of the far tail.  For
coherent (complex-amplitude) sums the compensation enters as an independent
complex Gaussian of matching variance.  Doubling the disk radius must leave
every reported estimate within one combined standard error; the validation
suite checks exactly that.

Reproducibility: all trial loops run over the fixed chunk grid of
:mod:`snratio.mc`, with one counter-based substream per chunk and integer
per-chunk aggregates, so estimates are bit-identical under any partitioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .delivery import Scenario, _check_file_index
from .errors import (
    ParameterDomainError,
    SingularConfigurationError,
    WindowEnlargementError,
)
from .mc import (
    Estimate,
    bernoulli_estimate,
    gather_chunked_samples,
    mean_estimate,
    run_counting_chunks,
    substream,
)
from .popularity import decompose_densities
from .shotnoise import RatioSpec

#: Disk radii keep the expected in-window point count above
#: ``pi * COVERAGE_FACTOR ** 2`` (about 113 points).
COVERAGE_FACTOR = 6.0

#: Stream-index stride separating the chunk grids of per-file sub-runs.
_STREAM_STRIDE = 1_000_000


@dataclass(frozen=True)
class DiskRegion:
    """Finite observation disk centred on the origin."""

    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ParameterDomainError(f"radius must be positive, got {self.radius}")

    @property
    def area(self) -> float:
        return math.pi * self.radius**2

    def doubled(self) -> "DiskRegion":
        return DiskRegion(self.radius * 2.0)


@dataclass(frozen=True)
class TrialConfig:
    """Trial count, master seed, and truncation policy of a simulation run."""

    trials: int
    seed: int = 0
    tail_tol: float = 1e-4
    tail_compensation: bool = True
    partitions: int = 1
    max_enlargements: int = 3

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterDomainError("trials must be at least 1")
        if not self.tail_tol > 0.0:
            raise ParameterDomainError("tail_tol must be positive")
        if self.partitions < 1:
            raise ParameterDomainError("partitions must be at least 1")


def tail_mean(density: float, alpha: float, radius: float) -> float:
    """Expected shot-noise contribution of the process beyond ``radius``."""
    return 2.0 * math.pi * density * radius ** (2.0 - alpha) / (alpha - 2.0)


def rule_radius(density: float, alpha: float, tail_tol: float) -> float:
    """Smallest radius whose expected beyond-window mass is below ``tail_tol``."""
    return (2.0 * math.pi * density / ((alpha - 2.0) * tail_tol)) ** (1.0 / (alpha - 2.0))


def default_region(density: float, alpha: float, tail_tol: float,
                   coverage: float = COVERAGE_FACTOR) -> DiskRegion:
    """Default disk: the tail rule, floored so the near field is populated."""
    if not density > 0.0:
        raise ParameterDomainError(f"density must be positive, got {density}")
    if not alpha > 2.0:
        raise ParameterDomainError(f"alpha must exceed 2, got {alpha}")
    return DiskRegion(max(rule_radius(density, alpha, tail_tol),
                          coverage / math.sqrt(density)))


def sample_ppp(density: float, region: DiskRegion, rng: np.random.Generator) -> np.ndarray:
    """One realization of a homogeneous Poisson process on the disk.

    Returns an ``(n, 2)`` array of planar coordinates; ``n`` is Poisson with
    mean ``density * region.area`` and points are uniform on the disk.
    """
    if not density > 0.0:
        raise ParameterDomainError(f"density must be positive, got {density}")
    n = rng.poisson(density * region.area)
    r = region.radius * np.sqrt(rng.random(n))
    phi = 2.0 * math.pi * rng.random(n)
    return np.column_stack((r * np.cos(phi), r * np.sin(phi)))


def shot_noise_value(points: np.ndarray, alpha: float, fading_mode: str = "none",
                     rng: np.random.Generator | None = None) -> float:
    """Path-loss sum over a point set, optionally with exponential fading.

    Pure function of the provided points: no window correction is applied
    here.  A point exactly at the origin is a probability-zero singular
    configuration and is rejected.
    """
    if not alpha > 2.0:
        raise ParameterDomainError(f"alpha must exceed 2, got {alpha}")
    if fading_mode not in ("none", "exponential"):
        raise ParameterDomainError(f"unknown fading mode {fading_mode!r}")
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return 0.0
    r = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(r == 0.0):
        raise SingularConfigurationError("point exactly at the origin")
    terms = r ** (-alpha)
    if fading_mode == "exponential":
        if rng is None:
            raise ParameterDomainError("exponential fading requires an rng")
        terms = terms * rng.exponential(size=terms.size)
    return float(terms.sum())


def _shot_chunk(density, alpha, region, rng, n_trials, compensate) -> np.ndarray:
    """Vectorized truncated shot-noise sums for ``n_trials`` trials."""
    counts = rng.poisson(density * region.area, size=n_trials)
    r = region.radius * np.sqrt(rng.random(int(counts.sum())))
    idx = np.repeat(np.arange(n_trials), counts)
    s = np.bincount(idx, weights=r ** (-alpha), minlength=n_trials)
    if compensate:
        s += tail_mean(density, alpha, region.radius)
    return s


def shot_noise_samples(density: float, alpha: float, cfg: TrialConfig,
                       region: DiskRegion | None = None) -> np.ndarray:
    """Independent shot-noise samples, one per trial, in deterministic order."""
    if region is None:
        region = default_region(density, alpha, cfg.tail_tol)

    def chunk(rng, n):
        return _shot_chunk(density, alpha, region, rng, n, cfg.tail_compensation)

    return gather_chunked_samples(cfg.trials, cfg.seed, chunk)


def _ratio_chunk(rng, n, spec: RatioSpec, cfg: TrialConfig, reg1, reg2):
    """Ratio samples for one chunk, resampling zero denominators."""
    s1 = _shot_chunk(spec.lambda1, spec.alpha, reg1, rng, n, cfg.tail_compensation)
    s2 = _shot_chunk(spec.lambda2, spec.alpha, reg2, rng, n, cfg.tail_compensation)
    resampled = 0
    bad = s2 == 0.0
    if bad.any():
        r1, r2 = reg1, reg2
        for _ in range(cfg.max_enlargements):
            if not bad.any():
                break
            resampled += int(bad.sum())
            r1, r2 = r1.doubled(), r2.doubled()
            m = int(bad.sum())
            s1[bad] = _shot_chunk(spec.lambda1, spec.alpha, r1, rng, m,
                                  cfg.tail_compensation)
            s2[bad] = _shot_chunk(spec.lambda2, spec.alpha, r2, rng, m,
                                  cfg.tail_compensation)
            bad = s2 == 0.0
        if bad.any():
            raise WindowEnlargementError(
                f"{int(bad.sum())} trials still had an empty denominator "
                f"after {cfg.max_enlargements} window enlargements")
    return s1 / s2, resampled


def ratio_regions(spec: RatioSpec, cfg: TrialConfig) -> tuple[DiskRegion, DiskRegion]:
    return (default_region(spec.lambda1, spec.alpha, cfg.tail_tol),
            default_region(spec.lambda2, spec.alpha, cfg.tail_tol))


def ratio_samples(spec: RatioSpec, cfg: TrialConfig,
                  region1: DiskRegion | None = None,
                  region2: DiskRegion | None = None):
    """Samples of the shot-noise ratio; returns ``(values, resampled)``."""
    if region1 is None or region2 is None:
        d1, d2 = ratio_regions(spec, cfg)
        region1 = region1 or d1
        region2 = region2 or d2
    resampled = 0

    def chunk(rng, n):
        nonlocal resampled
        vals, res = _ratio_chunk(rng, n, spec, cfg, region1, region2)
        resampled += res
        return vals

    vals = gather_chunked_samples(cfg.trials, cfg.seed, chunk)
    return vals, resampled


def empirical_ratio_ccdf(x: float, spec: RatioSpec, cfg: TrialConfig,
                         region1: DiskRegion | None = None,
                         region2: DiskRegion | None = None) -> Estimate:
    """Fraction of trials where the sampled shot-noise ratio exceeds ``x``."""
    (est,) = ratio_ccdf_estimates([x], spec, cfg, region1, region2)
    return est


def ratio_ccdf_estimates(xs, spec: RatioSpec, cfg: TrialConfig,
                         region1: DiskRegion | None = None,
                         region2: DiskRegion | None = None) -> list[Estimate]:
    """Empirical CCDF at several points from one shared set of trials."""
    if region1 is None or region2 is None:
        d1, d2 = ratio_regions(spec, cfg)
        region1 = region1 or d1
        region2 = region2 or d2
    xs = [float(x) for x in xs]
    if any(x < 0.0 for x in xs):
        raise ParameterDomainError("ccdf points must be nonnegative")

    def chunk(rng, n):
        vals, res = _ratio_chunk(rng, n, spec, cfg, region1, region2)
        return tuple(int((vals > x).sum()) for x in xs) + (res,)

    counts = run_counting_chunks(cfg.trials, cfg.seed, chunk, cfg.partitions)
    resampled = counts[-1]
    return [bernoulli_estimate(c, cfg.trials, cfg.seed, resampled)
            for c in counts[:-1]]


def ratio_laplace_estimate(s: float, spec: RatioSpec, cfg: TrialConfig) -> Estimate:
    """Monte Carlo estimate of E[exp(-s * ratio)]."""
    if not s > 0.0:
        raise ParameterDomainError(f"s must be positive, got {s}")
    vals, resampled = ratio_samples(spec, cfg)
    return mean_estimate(np.exp(-s * vals), cfg.seed, resampled)


def _coupled_shot_chunk(density, alpha, region, rng, n_trials, compensate):
    """Shot-noise sums on a disk and on its doubling, from one realization.

    Points are drawn on the doubled disk; restricting them to the base disk
    is an exact realization of the process there, so the two sums differ
    only by the annulus contribution.
    """
    big = region.doubled()
    counts = rng.poisson(density * big.area, size=n_trials)
    r = big.radius * np.sqrt(rng.random(int(counts.sum())))
    idx = np.repeat(np.arange(n_trials), counts)
    vals = r ** (-alpha)
    s_big = np.bincount(idx, weights=vals, minlength=n_trials)
    inner = r <= region.radius
    s_base = np.bincount(idx[inner], weights=vals[inner], minlength=n_trials)
    if compensate:
        s_big += tail_mean(density, alpha, big.radius)
        s_base += tail_mean(density, alpha, region.radius)
    return s_base, s_big


def window_doubling_probe(x: float, spec: RatioSpec, cfg: TrialConfig) -> tuple[Estimate, Estimate]:
    """Empirical ratio CCDF at ``x`` under the default windows and their doubling.

    Both estimates come from the same realizations (coupled), so their
    difference isolates the truncation effect of the window choice.
    """
    reg1, reg2 = ratio_regions(spec, cfg)

    def chunk(rng, n):
        b1, g1 = _coupled_shot_chunk(spec.lambda1, spec.alpha, reg1, rng, n,
                                     cfg.tail_compensation)
        b2, g2 = _coupled_shot_chunk(spec.lambda2, spec.alpha, reg2, rng, n,
                                     cfg.tail_compensation)
        ok = b2 > 0.0
        base_succ = int((b1[ok] > x * b2[ok]).sum())
        big_succ = int((g1 > x * g2).sum())
        return base_succ, big_succ, int(n - ok.sum())

    base_succ, big_succ, skipped = run_counting_chunks(cfg.trials, cfg.seed, chunk,
                                                       cfg.partitions)
    base = bernoulli_estimate(base_succ, cfg.trials - skipped if skipped else cfg.trials,
                              cfg.seed, skipped)
    big = bernoulli_estimate(big_succ, cfg.trials, cfg.seed)
    return base, big


# ---------------------------------------------------------------------------
# SIR trials
# ---------------------------------------------------------------------------

def aligned_regions(scenario: Scenario, k: int, cfg: TrialConfig):
    """Disk for the requested file's process and disk for the interferers."""
    lam = scenario.helper_density
    lam_k = float(scenario.profile.weights[k]) * lam
    return (default_region(lam_k, scenario.alpha, cfg.tail_tol),
            default_region(lam, scenario.alpha, cfg.tail_tol))


def _aligned_sir_chunk(rng, n, scenario: Scenario, k: int, cfg: TrialConfig,
                       mode: str, sig_region: DiskRegion, int_region: DiskRegion):
    """SIR samples for ``n`` trials with the request fixed to file ``k``.

    mode "complex": per-point circularly symmetric complex fading; signal
    and per-file interference powers are squared magnitudes of coherent sums.
    mode "exponential": the distributionally equivalent form with one
    unit-mean exponential weight per file and plain path-loss sums.
    """
    alpha = scenario.alpha
    nf = scenario.n_files
    dens = decompose_densities(scenario.profile, scenario.helper_density)

    # Requested file's process on its own disk.
    c_sig = rng.poisson(dens[k] * sig_region.area, size=n)
    r_sig = sig_region.radius * np.sqrt(rng.random(int(c_sig.sum())))
    idx_sig = np.repeat(np.arange(n), c_sig)
    tau_sig = tail_mean(dens[k], alpha, sig_region.radius) if cfg.tail_compensation else 0.0

    # Interfering files share the interference disk; file k contributes none.
    dens_int = dens.copy()
    dens_int[k] = 0.0
    c_int = rng.poisson(dens_int * int_region.area, size=(n, nf))
    r_int = int_region.radius * np.sqrt(rng.random(int(c_int.sum())))
    key_int = np.repeat(np.arange(n * nf), c_int.ravel())
    if cfg.tail_compensation:
        tau_int = tail_mean(1.0, alpha, int_region.radius) * dens_int
    else:
        tau_int = np.zeros(nf)

    if mode == "complex":
        amp_sig = r_sig ** (-alpha / 2.0)
        z_sig = (np.bincount(idx_sig, weights=amp_sig * rng.standard_normal(amp_sig.size),
                             minlength=n)
                 + 1j * np.bincount(idx_sig, weights=amp_sig * rng.standard_normal(amp_sig.size),
                                    minlength=n)) / math.sqrt(2.0)
        z_sig += math.sqrt(tau_sig / 2.0) * (rng.standard_normal(n)
                                             + 1j * rng.standard_normal(n))
        s0 = np.abs(z_sig) ** 2

        amp_int = r_int ** (-alpha / 2.0)
        re = np.bincount(key_int, weights=amp_int * rng.standard_normal(amp_int.size),
                         minlength=n * nf).reshape(n, nf)
        im = np.bincount(key_int, weights=amp_int * rng.standard_normal(amp_int.size),
                         minlength=n * nf).reshape(n, nf)
        re = re / math.sqrt(2.0) + np.sqrt(tau_int / 2.0) * rng.standard_normal((n, nf))
        im = im / math.sqrt(2.0) + np.sqrt(tau_int / 2.0) * rng.standard_normal((n, nf))
        interference = (re**2 + im**2).sum(axis=1)
    elif mode == "exponential":
        gain_sig = np.bincount(idx_sig, weights=r_sig ** (-alpha), minlength=n) + tau_sig
        s0 = rng.exponential(size=n) * gain_sig
        gains = np.bincount(key_int, weights=r_int ** (-alpha),
                            minlength=n * nf).reshape(n, nf) + tau_int
        interference = (rng.exponential(size=(n, nf)) * gains).sum(axis=1)
    else:
        raise ParameterDomainError(f"unknown mode {mode!r}")

    if nf == 1:
        return np.full(n, np.inf)
    return s0 / interference


def sir_samples_aligned(scenario: Scenario, k: int, cfg: TrialConfig,
                        mode: str = "exponential",
                        signal_region: DiskRegion | None = None,
                        interference_region: DiskRegion | None = None) -> np.ndarray:
    """Per-trial SIR samples under aligned transmission, request fixed to ``k``."""
    _check_file_index(scenario.n_files, k)
    if signal_region is None or interference_region is None:
        ds, di = aligned_regions(scenario, k, cfg)
        signal_region = signal_region or ds
        interference_region = interference_region or di

    def chunk(rng, n):
        return _aligned_sir_chunk(rng, n, scenario, k, cfg, mode,
                                  signal_region, interference_region)

    return gather_chunked_samples(cfg.trials, cfg.seed, chunk)


def simulate_sir_aligned(scenario: Scenario, k: int, cfg: TrialConfig,
                         mode: str = "exponential",
                         signal_region: DiskRegion | None = None,
                         interference_region: DiskRegion | None = None) -> Estimate:
    """P(SIR > theta_k) under aligned transmission, request fixed to file ``k``."""
    _check_file_index(scenario.n_files, k)
    if scenario.n_files == 1:
        return Estimate(1.0, 0.0, cfg.trials, cfg.seed)
    if signal_region is None or interference_region is None:
        ds, di = aligned_regions(scenario, k, cfg)
        signal_region = signal_region or ds
        interference_region = interference_region or di
    theta = float(scenario.thresholds[k])

    def chunk(rng, n):
        sir = _aligned_sir_chunk(rng, n, scenario, k, cfg, mode,
                                 signal_region, interference_region)
        return (int((sir > theta).sum()),)

    (successes,) = run_counting_chunks(cfg.trials, cfg.seed, chunk, cfg.partitions)
    return bernoulli_estimate(successes, cfg.trials, cfg.seed)


def _nearest_positions(trial_idx: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Position of each trial's nearest point; exactly one per trial present.

    ``trial_idx`` maps points to trials (any order); the result indexes the
    flat point arrays.  Trials without points simply do not appear.
    """
    order = np.lexsort((radii, trial_idx))
    first = np.unique(trial_idx[order], return_index=True)[1]
    return order[first]


def _baseline_sir_chunk(rng, n, scenario: Scenario, k: int, cfg: TrialConfig,
                        sig_region: DiskRegion, int_region: DiskRegion):
    """Nearest-helper SIR samples (no alignment); returns (sir, resampled).

    The serving helper is the nearest point of the requested file's process
    and is excluded from the interference; every other point interferes with
    its own independent exponential fade.
    """
    alpha = scenario.alpha
    lam = scenario.helper_density
    lam_k = float(scenario.profile.weights[k]) * lam
    lam_o = lam - lam_k

    resampled = 0
    sig_r = sig_region
    todo = np.arange(n)
    sir = np.empty(n)
    for attempt in range(cfg.max_enlargements + 1):
        m = todo.size
        if m == 0:
            break
        ck = rng.poisson(lam_k * sig_r.area, size=m)
        empty = ck == 0
        work = ~empty

        rk = sig_r.radius * np.sqrt(rng.random(int(ck.sum())))
        idxk = np.repeat(np.arange(m), ck)
        hk = rng.exponential(size=rk.size)

        if lam_o > 0.0:
            co = rng.poisson(lam_o * int_region.area, size=m)
            ro = int_region.radius * np.sqrt(rng.random(int(co.sum())))
            idxo = np.repeat(np.arange(m), co)
            ho = rng.exponential(size=ro.size)
            int_other = np.bincount(idxo, weights=ho * ro ** (-alpha), minlength=m)
            tau_other = (tail_mean(lam_o, alpha, int_region.radius)
                         if cfg.tail_compensation else 0.0)
        else:
            int_other = np.zeros(m)
            tau_other = 0.0

        # Serving helper: nearest point of the requested file's process.
        serv_pos = _nearest_positions(idxk, rk)
        serv_trial = idxk[serv_pos]

        signal = np.zeros(m)
        signal[serv_trial] = hk[serv_pos] * rk[serv_pos] ** (-alpha)

        int_k = np.bincount(idxk, weights=hk * rk ** (-alpha), minlength=m) - signal
        tau_k = tail_mean(lam_k, alpha, sig_r.radius) if cfg.tail_compensation else 0.0
        interference = int_k + int_other + tau_k + tau_other

        with np.errstate(divide="ignore"):
            vals = np.where(interference > 0.0, signal / interference, np.inf)
        sir[todo[work]] = vals[work]

        todo = todo[empty]
        if todo.size:
            if attempt == cfg.max_enlargements:
                raise WindowEnlargementError(
                    f"{todo.size} trials had no helper for the requested file "
                    f"after {cfg.max_enlargements} window enlargements")
            resampled += todo.size
            sig_r = sig_r.doubled()
    return sir, resampled


def baseline_regions(scenario: Scenario, k: int, cfg: TrialConfig):
    return aligned_regions(scenario, k, cfg)


def sir_samples_baseline(scenario: Scenario, k: int, cfg: TrialConfig,
                         signal_region: DiskRegion | None = None,
                         interference_region: DiskRegion | None = None) -> np.ndarray:
    """Per-trial nearest-helper SIR samples, request fixed to file ``k``."""
    _check_file_index(scenario.n_files, k)
    if signal_region is None or interference_region is None:
        ds, di = baseline_regions(scenario, k, cfg)
        signal_region = signal_region or ds
        interference_region = interference_region or di

    def chunk(rng, n):
        sir, _ = _baseline_sir_chunk(rng, n, scenario, k, cfg,
                                     signal_region, interference_region)
        return sir

    return gather_chunked_samples(cfg.trials, cfg.seed, chunk)


def simulate_sir_baseline(scenario: Scenario, k: int, cfg: TrialConfig,
                          signal_region: DiskRegion | None = None,
                          interference_region: DiskRegion | None = None) -> Estimate:
    """P(SIR > theta_k) for nearest-helper service without alignment."""
    _check_file_index(scenario.n_files, k)
    if signal_region is None or interference_region is None:
        ds, di = baseline_regions(scenario, k, cfg)
        signal_region = signal_region or ds
        interference_region = interference_region or di
    theta = float(scenario.thresholds[k])

    def chunk(rng, n):
        sir, res = _baseline_sir_chunk(rng, n, scenario, k, cfg,
                                       signal_region, interference_region)
        return int((sir > theta).sum()), res

    successes, resampled = run_counting_chunks(cfg.trials, cfg.seed, chunk,
                                               cfg.partitions)
    return bernoulli_estimate(successes, cfg.trials, cfg.seed, resampled)


def _request_counts(scenario: Scenario, cfg: TrialConfig) -> np.ndarray:
    """Multinomial split of the trials over the files, by popularity."""
    rng = substream(cfg.seed, 0)
    return rng.multinomial(cfg.trials, scenario.profile.weights)


def _simulate_total(scenario: Scenario, cfg: TrialConfig, per_file, return_strata):
    """Popularity-mixed success probability over randomized requests.

    Requests are split over the files by one multinomial draw (equivalent to
    drawing them one by one); each file's stratum then runs on its own chunk
    grid at a disjoint stream offset.
    """
    counts = _request_counts(scenario, cfg)
    successes = 0
    resampled = 0
    strata = {}
    for k, t_k in enumerate(counts):
        if t_k == 0:
            continue
        sub = TrialConfig(trials=int(t_k), seed=cfg.seed, tail_tol=cfg.tail_tol,
                          tail_compensation=cfg.tail_compensation,
                          partitions=cfg.partitions,
                          max_enlargements=cfg.max_enlargements)
        succ_k, res_k = per_file(k, sub, stream_offset=(k + 1) * _STREAM_STRIDE)
        successes += succ_k
        resampled += res_k
        strata[k] = bernoulli_estimate(succ_k, int(t_k), cfg.seed, res_k)
    total = bernoulli_estimate(successes, cfg.trials, cfg.seed, resampled)
    if return_strata:
        return total, strata
    return total


def simulate_total_aligned(scenario: Scenario, cfg: TrialConfig,
                           mode: str = "exponential", return_strata: bool = False):
    """Total delivery probability under aligned transmission, requests randomized.

    With ``return_strata`` the per-file conditional estimates (at their
    random request counts) are returned alongside the total.
    """
    if scenario.n_files == 1:
        est = Estimate(1.0, 0.0, cfg.trials, cfg.seed)
        return (est, {0: est}) if return_strata else est

    def per_file(k, sub, stream_offset):
        regions = aligned_regions(scenario, k, sub)
        theta = float(scenario.thresholds[k])

        def chunk(rng, n):
            sir = _aligned_sir_chunk(rng, n, scenario, k, sub, mode, *regions)
            return (int((sir > theta).sum()), 0)

        return run_counting_chunks(sub.trials, sub.seed, chunk, sub.partitions,
                                   stream_offset=stream_offset)

    return _simulate_total(scenario, cfg, per_file, return_strata)


def simulate_total_baseline(scenario: Scenario, cfg: TrialConfig,
                            return_strata: bool = False):
    """Total delivery probability for nearest-helper service, requests randomized."""

    def per_file(k, sub, stream_offset):
        regions = baseline_regions(scenario, k, sub)
        theta = float(scenario.thresholds[k])

        def chunk(rng, n):
            sir, res = _baseline_sir_chunk(rng, n, scenario, k, sub, *regions)
            return int((sir > theta).sum()), res

        return run_counting_chunks(sub.trials, sub.seed, chunk, sub.partitions,
                                   stream_offset=stream_offset)

    return _simulate_total(scenario, cfg, per_file, return_strata)
