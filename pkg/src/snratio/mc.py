"""Monte Carlo plumbing: estimates, keyed substreams, and chunked trial runs.

Reproducibility contract: every randomized operation derives its draws from
counter-based (Philox) substreams keyed by ``(master seed, chunk index)``
over a fixed grid of trial chunks.  Per-chunk results are integers (success
and resample counts), so merging partial aggregates is exact and the final
estimate is bit-identical no matter how the chunks are partitioned across
workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError

#: Number of trials evaluated per substream.  Fixed so that partitioning
#: across workers never changes which draws belong to which trial.
CHUNK_TRIALS = 4096


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo point estimate with its standard error and provenance."""

    mean: float
    stderr: float
    trials: int
    seed: int
    resampled: int = 0


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator keyed by (seed, index), counter-based."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, index))))


def bernoulli_estimate(successes: int, trials: int, seed: int, resampled: int = 0) -> Estimate:
    """Estimate of a success probability from exact integer counts."""
    if trials < 1:
        raise ParameterDomainError("trials must be at least 1")
    p = successes / trials
    if trials > 1:
        sd = math.sqrt(p * (1.0 - p) * trials / (trials - 1.0))
    else:
        sd = 0.0
    return Estimate(p, sd / math.sqrt(trials), trials, seed, resampled)


def mean_estimate(values: np.ndarray, seed: int, resampled: int = 0) -> Estimate:
    """Estimate of a mean from a sample of real values."""
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < 1:
        raise ParameterDomainError("need at least one sample")
    sd = float(values.std(ddof=1)) if n > 1 else 0.0
    return Estimate(float(values.mean()), sd / math.sqrt(n), n, seed, resampled)


def chunk_sizes(total: int, chunk: int = CHUNK_TRIALS) -> list[int]:
    """Split a trial count over the fixed chunk grid (last chunk may be short)."""
    if total < 1:
        raise ParameterDomainError("total trials must be at least 1")
    full, rest = divmod(total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def run_counting_chunks(total_trials: int, seed: int, chunk_fn,
                        partitions: int = 1, stream_offset: int = 0):
    """Run ``chunk_fn(rng, n) -> tuple of ints`` over the chunk grid.

    ``partitions`` only controls how many worker threads evaluate the chunks;
    the per-chunk substreams and the integer aggregation make the summed
    result independent of the partitioning.  Returns the elementwise sum of
    the per-chunk tuples.
    """
    if partitions < 1:
        raise ParameterDomainError("partitions must be at least 1")
    sizes = chunk_sizes(total_trials)

    def one(args):
        index, n = args
        return chunk_fn(substream(seed, stream_offset + index), n)

    jobs = list(enumerate(sizes))
    if partitions == 1:
        results = [one(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=partitions) as pool:
            results = list(pool.map(one, jobs))
    return tuple(int(sum(col)) for col in zip(*results))


def gather_chunked_samples(total_trials: int, seed: int, sample_fn,
                           stream_offset: int = 0) -> np.ndarray:
    """Concatenate per-chunk sample arrays in chunk order (deterministic)."""
    parts = []
    for index, n in enumerate(chunk_sizes(total_trials)):
        parts.append(sample_fn(substream(seed, stream_offset + index), n))
    return np.concatenate(parts)
