"""Popularity profiles, density decomposition, and request sampling."""

import numpy as np
import pytest
from scipy import stats

from snratio import (
    PopularityProfile,
    ZipfSpec,
    decompose_densities,
    sample_request,
    zipf,
)
from snratio.errors import ParameterDomainError


class TestProfileValidation:
    def test_rejects_unnormalized(self):
        with pytest.raises(ParameterDomainError):
            PopularityProfile([0.5, 0.4])

    def test_rejects_negative_and_empty(self):
        with pytest.raises(ParameterDomainError):
            PopularityProfile([1.2, -0.2])
        with pytest.raises(ParameterDomainError):
            PopularityProfile([])

    def test_weights_are_read_only(self):
        p = PopularityProfile([0.25, 0.75])
        with pytest.raises(ValueError):
            p.weights[0] = 1.0


class TestZipf:
    def test_uniform_at_zero_skew(self):
        p = zipf(ZipfSpec(4, 0.0))
        assert np.allclose(p.weights, 0.25, rtol=0, atol=1e-15)

    def test_frozen_harmonic_weights(self):
        p = zipf(ZipfSpec(3, 1.0))
        assert p.weights == pytest.approx([6 / 11, 3 / 11, 2 / 11], rel=1e-12)
        assert p.weights == pytest.approx([0.54545, 0.27273, 0.18182], abs=5e-6)

    def test_degenerate_skew_concentrates_on_first_file(self):
        p = zipf(ZipfSpec(50, 50.0))
        assert p.weights[0] > 1.0 - 1e-10

    def test_strictly_decreasing_for_positive_skew(self):
        p = zipf(ZipfSpec(20, 0.7))
        assert np.all(np.diff(p.weights) < 0.0)

    def test_spec_validation(self):
        with pytest.raises(ParameterDomainError):
            ZipfSpec(0, 1.0)
        with pytest.raises(ParameterDomainError):
            ZipfSpec(5, -0.1)


class TestDecomposeDensities:
    def test_uniform_split(self):
        dens = decompose_densities(PopularityProfile([0.5, 0.5]), 0.1)
        assert dens == pytest.approx([0.05, 0.05], rel=1e-15)

    def test_frozen_harmonic_split(self):
        dens = decompose_densities(zipf(ZipfSpec(3, 1.0)), 0.11)
        assert dens == pytest.approx([0.06, 0.03, 0.02], rel=1e-12)

    def test_preserves_total_density(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            w = rng.dirichlet(np.ones(rng.integers(1, 30)))
            w = w / w.sum()
            lam = float(10 ** rng.uniform(-3, 1))
            assert decompose_densities(PopularityProfile(w), lam).sum() == pytest.approx(
                lam, rel=1e-12)

    def test_rejects_nonpositive_density(self):
        with pytest.raises(ParameterDomainError):
            decompose_densities(PopularityProfile([1.0]), 0.0)


class TestSampleRequest:
    def test_single_file_always_index_zero(self):
        p = PopularityProfile([1.0])
        rng = np.random.default_rng(0)
        assert all(sample_request(p, rng) == 0 for _ in range(20))

    def test_frequencies_match_weights(self):
        # Chi-square goodness of fit at the 1% level against the weights.
        p = zipf(ZipfSpec(3, 1.0))
        draws = sample_request(p, np.random.default_rng(123), size=100_000)
        counts = np.bincount(draws, minlength=3)
        result = stats.chisquare(counts, 100_000 * p.weights)
        assert result.pvalue > 0.01

    def test_identical_seed_identical_sequence(self):
        p = zipf(ZipfSpec(10, 0.8))
        a = sample_request(p, np.random.default_rng(55), size=1000)
        b = sample_request(p, np.random.default_rng(55), size=1000)
        assert np.array_equal(a, b)

    def test_scalar_and_vector_forms(self):
        p = zipf(ZipfSpec(5, 1.0))
        rng = np.random.default_rng(9)
        assert isinstance(sample_request(p, rng), int)
        out = sample_request(p, rng, size=7)
        assert out.shape == (7,)
        assert out.min() >= 0 and out.max() < 5
