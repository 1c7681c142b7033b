"""
Tests for the Monte Carlo homodyne receiver
"""

import json

import numpy as np
import pytest

from helion.core.errors import ConfigValidationError, DimensionError
from helion.schemas.config import MeanStrategy, Priors
from helion.services.bounds import binomial_ci, photons_for_error
from helion.services.discrim import optimal_state
from helion.services.receiver import (
    decide,
    draw_truths,
    expected_detected_photons,
    log_likelihood_ratio,
    measure,
    quadrature_variance,
    run_trials,
    sample_homodyne,
)


def test_llr_sign_follows_the_true_mean():
    e1 = np.array([1.0 + 0j, 0.0])
    e2 = np.array([0.0 + 0j, 1.0j])
    gap = np.sum(np.abs(e2 - e1) ** 2) / (2 * 0.5)
    assert log_likelihood_ratio(e2, e1, e2, 0.5) == pytest.approx(gap)
    assert log_likelihood_ratio(e1, e1, e2, 0.5) == pytest.approx(-gap)


def test_llr_batches_over_rows():
    e1 = np.array([1.0 + 0j, 0.0])
    e2 = np.array([0.0 + 0j, 1.0])
    z = np.stack([e1, e2, 0.5 * (e1 + e2)])
    llr = log_likelihood_ratio(z, e1, e2, 0.5)
    assert llr.shape == (3,)
    assert llr[2] == pytest.approx(0.0)


def test_llr_rejects_mismatched_shapes():
    with pytest.raises(DimensionError):
        log_likelihood_ratio(np.zeros(3), np.zeros(2), np.zeros(2), 0.5)


def test_decision_threshold_and_ties(equal_priors):
    assert decide(0.0, equal_priors) == 1
    assert decide(1e-12, equal_priors) == 2
    skewed = Priors(pi1=0.9, pi2=0.1)
    assert decide(2.0, skewed) == 1  # below ln 9
    assert decide(2.5, skewed) == 2


def test_decision_needs_both_priors():
    with pytest.raises(ConfigValidationError):
        decide(1.0, Priors(pi1=1.0, pi2=0.0))


def test_fixed_split_is_exact(rng):
    truths = draw_truths(Priors(pi1=0.3, pi2=0.7), 1001, rng, fixed_split=True)
    assert int(np.count_nonzero(truths == 2)) == round(0.7 * 1001)


def test_shot_noise_variance(rng):
    samples = sample_homodyne(np.zeros((4000, 64)), 0.5, rng)
    var_re, var_im, pooled = quadrature_variance(samples, np.zeros((4000, 64)))
    assert pooled == pytest.approx(0.5, rel=0.02)
    assert var_re == pytest.approx(0.5, rel=0.02)
    assert var_im == pytest.approx(0.5, rel=0.02)


def test_observed_error_matches_gaussian_prediction(medium_pair, medium_spectrum, equal_priors):
    lambda_1 = medium_spectrum.eigenvalues[0]
    inside = 0
    for k, target in enumerate([0.02, 0.05, 0.1, 0.2, 0.3, 0.38]):
        n = photons_for_error(target, lambda_1, 0.5)
        batch = run_trials(
            medium_pair, optimal_state(medium_spectrum, n), equal_priors, 0.5, 4000, seed=1000 + k
        )
        assert batch.predicted_error == pytest.approx(target, rel=1e-6)
        lo, hi = binomial_ci(batch.predicted_error, 4000)
        inside += lo <= batch.error_rate <= hi
    assert inside >= 5


def test_no_light_is_a_coin_flip(medium_pair, medium_spectrum, equal_priors):
    batch = run_trials(
        medium_pair, optimal_state(medium_spectrum, 0.0), equal_priors, 0.5, 4000, seed=3, fixed_split=True
    )
    lo, hi = batch.ci
    assert lo <= 0.5 <= hi
    assert batch.predicted_error == pytest.approx(0.5)


def test_same_seed_same_batch(medium_pair, medium_spectrum, equal_priors):
    state = optimal_state(medium_spectrum, 5.0)
    first = run_trials(medium_pair, state, equal_priors, 0.5, 500, seed=42)
    second = run_trials(medium_pair, state, equal_priors, 0.5, 500, seed=42)
    np.testing.assert_array_equal(first.llr, second.llr)
    np.testing.assert_array_equal(first.decisions, second.decisions)


def test_reference_means_from_the_true_pair_equal_oracle(medium_pair, medium_spectrum, equal_priors):
    state = optimal_state(medium_spectrum, 5.0)
    oracle = run_trials(medium_pair, state, equal_priors, 0.5, 800, seed=8)
    reference = run_trials(
        medium_pair,
        state,
        equal_priors,
        0.5,
        800,
        MeanStrategy.REFERENCE_MEANS,
        seed=8,
        reference=medium_pair,
    )
    np.testing.assert_allclose(reference.llr, oracle.llr, rtol=1e-12, atol=1e-12)


def test_reference_means_needs_a_reference(medium_pair, medium_spectrum, equal_priors):
    with pytest.raises(ConfigValidationError):
        run_trials(
            medium_pair,
            optimal_state(medium_spectrum, 1.0),
            equal_priors,
            0.5,
            10,
            MeanStrategy.REFERENCE_MEANS,
        )


@pytest.mark.parametrize("leave_one_out", [False, True])
def test_empirical_sum_mean_tracks_oracle(medium_pair, medium_spectrum, equal_priors, leave_one_out):
    n = photons_for_error(0.1, medium_spectrum.eigenvalues[0], 0.5)
    batch = run_trials(
        medium_pair,
        optimal_state(medium_spectrum, n),
        equal_priors,
        0.5,
        4000,
        MeanStrategy.EMPIRICAL_SUM_MEAN,
        seed=77,
        leave_one_out=leave_one_out,
    )
    assert batch.error_rate == pytest.approx(0.1, abs=0.03)


def test_leave_one_out_needs_two_trials(medium_pair, medium_spectrum, equal_priors):
    with pytest.raises(ConfigValidationError):
        run_trials(
            medium_pair,
            optimal_state(medium_spectrum, 1.0),
            equal_priors,
            0.5,
            1,
            MeanStrategy.EMPIRICAL_SUM_MEAN,
            leave_one_out=True,
        )


def test_state_dimension_checked(small_pair, medium_spectrum, equal_priors):
    with pytest.raises(DimensionError):
        run_trials(small_pair, optimal_state(medium_spectrum, 1.0), equal_priors, 0.5, 10)


def test_batch_records(medium_pair, medium_spectrum, equal_priors):
    state = optimal_state(medium_spectrum, 20.0)
    batch = run_trials(medium_pair, state, equal_priors, 0.5, 300, seed=5)
    frame = batch.samples()
    assert list(frame.columns) == ["trial", "truth", "llr", "decision"]
    assert len(frame) == 300
    assert batch.detected_photons[0] == pytest.approx(expected_detected_photons(medium_pair, state, 1))
    summary = batch.summary()
    assert summary["state"] == "optimal"
    assert summary["incident_per_detected"] > 1.0
    json.dumps(summary, allow_nan=False)


def test_noiseless_limit(rng):
    expected = np.array([1.0 + 2.0j, -0.5j, 3.0])
    np.testing.assert_allclose(sample_homodyne(expected, 1e-20, rng), expected, atol=1e-8)


def test_llr_matches_gaussian_density_ratio(rng):
    sigma_sq = 0.5
    for _ in range(20):
        e1, e2, z = (rng.standard_normal(5) + 1j * rng.standard_normal(5) for _ in range(3))
        # log of the circular complex Gaussian density, constant terms cancel
        log_p1 = -np.sum(np.abs(z - e1) ** 2) / (2 * sigma_sq)
        log_p2 = -np.sum(np.abs(z - e2) ** 2) / (2 * sigma_sq)
        assert log_likelihood_ratio(z, e1, e2, sigma_sq) == pytest.approx(log_p2 - log_p1, abs=1e-9)


def test_llr_scalar_case():
    a = 1.5
    assert log_likelihood_ratio([a], [-a], [a], 0.5) == pytest.approx(2 * a * a / 0.5)
    assert log_likelihood_ratio([0.3 + 1j], [2.0], [2.0], 0.5) == 0.0


def test_single_measurement(medium_pair, medium_spectrum, rng):
    state = optimal_state(medium_spectrum, 1e12)
    shot = measure(medium_pair, state, 2, 0.5, rng)
    assert shot.truth == 2
    assert shot.z.shape == (medium_pair.n_out,)
    # at 1e12 photons the noise is negligible next to the field
    expected = 1e6 * (medium_pair.s2 @ state.amplitudes)
    assert np.linalg.norm(shot.z - expected) < 1e-3 * np.linalg.norm(expected)


def test_prediction_inside_interval_across_seeds(medium_pair, medium_spectrum, equal_priors):
    n = photons_for_error(0.1, medium_spectrum.eigenvalues[0], 0.5)
    state = optimal_state(medium_spectrum, n)
    inside = 0
    for seed in range(40):
        batch = run_trials(medium_pair, state, equal_priors, 0.5, 4000, seed=500 + seed)
        lo, hi = batch.ci
        inside += lo <= batch.predicted_error <= hi
    # 95.4% coverage over 40 runs: seven or more misses has probability below 0.3%
    assert inside >= 34


def test_llr_means_separate_by_signal_over_noise(medium_pair, medium_spectrum, equal_priors):
    n = photons_for_error(0.1, medium_spectrum.eigenvalues[0], 0.5)
    batch = run_trials(medium_pair, optimal_state(medium_spectrum, n), equal_priors, 0.5, 4000, seed=31)
    gap = batch.llr[batch.truths == 2].mean() - batch.llr[batch.truths == 1].mean()
    # each class mean has variance n·d12²/σ² over ~2000 draws
    assert gap == pytest.approx(batch.photons * batch.d12sq / 0.5, abs=0.4)


def test_empirical_means_do_not_beat_oracle(medium_pair, medium_spectrum, equal_priors):
    n = photons_for_error(0.1, medium_spectrum.eigenvalues[0], 0.5)
    state = optimal_state(medium_spectrum, n)
    oracle = run_trials(medium_pair, state, equal_priors, 0.5, 4000, seed=64)
    empirical = run_trials(
        medium_pair, state, equal_priors, 0.5, 4000, MeanStrategy.EMPIRICAL_SUM_MEAN, seed=64
    )
    lo, hi = oracle.ci
    assert empirical.error_rate >= oracle.error_rate - (hi - lo)


def test_nearly_noiseless_trials_never_err(medium_pair, medium_spectrum, equal_priors):
    batch = run_trials(medium_pair, optimal_state(medium_spectrum, 1.0), equal_priors, 1e-12, 500, seed=2)
    assert batch.error_rate == 0.0
    assert batch.predicted_error < 1e-100
    np.testing.assert_array_equal(batch.decisions, batch.truths)
