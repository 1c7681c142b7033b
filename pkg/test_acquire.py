"""
Tests for virtual transmission-matrix acquisition
"""

import numpy as np
import pytest

from helion.core.errors import ConfigValidationError, DimensionError
from helion.core.rng import make_rng
from helion.schemas.config import AcquisitionConfig, ProbeBasis, SystemConfig
from helion.services.acquire import (
    end_to_end_spectrum,
    eta_d,
    fidelity_metrics,
    fidelity_report,
    measure_matrix,
    measure_pair,
    measure_outgoing,
    probe_basis,
)
from helion.services.discrim import build_discrimination_operator, optimal_state, spectrum
from helion.services.scatter import gen_system


@pytest.fixture
def system_32():
    config = SystemConfig(
        m_in=32, n_out=32, n_plane=48, target_pixels=[4, 30], target_transmittance=0.0, seed=31
    )
    return gen_system(config)


@pytest.mark.parametrize("basis", list(ProbeBasis))
def test_probe_basis_is_unitary(basis):
    u = probe_basis(10, basis)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(10), atol=1e-12)


@pytest.mark.parametrize("basis", list(ProbeBasis))
def test_measured_matrix_is_close(medium_pair, basis):
    cfg = AcquisitionConfig(n0_per_column=1e8, probe_basis=basis, seed=4)
    measured = measure_matrix(medium_pair, 2, cfg)
    # per-entry noise is √(2σ²/n0) = 1e-4
    assert np.max(np.abs(measured - medium_pair.s2)) < 1e-3


def test_acquired_distance_fidelity(system_32, acquisition):
    measured = measure_pair(system_32, acquisition)
    spec = spectrum(build_discrimination_operator(measured), strict=False)
    report = fidelity_report(system_32, measured, optimal_state(spec, 1.0), acquisition)
    assert 0.9 <= report["eta_d"] <= 1.1
    assert report["corr_1"] > 0.99
    assert report["corr_2"] > 0.99


def test_bright_acquisition_is_exact(system_32):
    cfg = AcquisitionConfig(n0_per_column=1e16, seed=2)
    measured = measure_pair(system_32, cfg)
    spec = spectrum(build_discrimination_operator(measured), strict=False)
    report = fidelity_report(system_32, measured, optimal_state(spec, 1.0), cfg)
    assert report["eta_d"] == pytest.approx(1.0, abs=1e-5)


def test_end_to_end_spectrum_tracks_true_spectrum(system_32, acquisition):
    true_spec = spectrum(build_discrimination_operator(system_32))
    measured_spec = end_to_end_spectrum(system_32, acquisition)
    assert measured_spec.eigenvalues[0] == pytest.approx(true_spec.eigenvalues[0], rel=1e-2)
    assert np.all(measured_spec.eigenvalues >= 0.0)


def test_modulation_efficiency_shows_in_norm_ratio(system_32):
    cfg = AcquisitionConfig(n0_per_column=1e8, modulation_efficiency=0.7, seed=6)
    measured = measure_pair(system_32, cfg)
    spec = spectrum(build_discrimination_operator(measured), strict=False)
    report = fidelity_report(system_32, measured, optimal_state(spec, 1.0), cfg)
    assert report["t_mod_estimate"] == pytest.approx(0.7, rel=0.01)
    assert report["eta_d_fields"] == pytest.approx(1.0, rel=0.02)


def test_phase_jitter_rotates_columns(medium_pair):
    steady = AcquisitionConfig(n0_per_column=1e8, seed=5)
    jittery = steady.model_copy(update={"phase_jitter": 0.3})
    a = measure_matrix(medium_pair, 1, steady, make_rng(5))
    b = measure_matrix(medium_pair, 1, jittery, make_rng(5))
    np.testing.assert_allclose(np.linalg.norm(a, axis=0), np.linalg.norm(b, axis=0), rtol=1e-12)
    assert not np.allclose(a, b)


def test_correlation_ignores_phase_and_scale(rng):
    x = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    corr, ratio = fidelity_metrics(x, 3.0 * np.exp(0.7j) * x)
    assert corr == pytest.approx(1.0)
    assert ratio == pytest.approx(9.0)


def test_fidelity_metric_edge_cases():
    with pytest.raises(ConfigValidationError):
        fidelity_metrics(np.zeros(3), np.ones(3))
    assert fidelity_metrics(np.ones(3), np.zeros(3)) == (0.0, 0.0)


def test_eta_d_needs_positive_prediction():
    assert eta_d(0.45, 0.5) == pytest.approx(0.9)
    with pytest.raises(ConfigValidationError):
        eta_d(0.1, 0.0)


def test_zero_photons_rejected(medium_pair):
    with pytest.raises(ConfigValidationError):
        measure_matrix(medium_pair, 1, AcquisitionConfig(n0_per_column=0.0))


def test_entry_estimates_are_unbiased_with_shot_noise_variance():
    config = SystemConfig(m_in=4, n_out=4, n_plane=4, target_pixels=[1], target_transmittance=0.5, seed=3)
    pair = gen_system(config)
    cfg = AcquisitionConfig(n0_per_column=100.0, sigma_sq=0.5, seed=1)
    rng = make_rng(21)
    estimates = np.stack([measure_matrix(pair, 1, cfg, rng) for _ in range(10_000)])
    # per quadrature σ²/n0 = 0.005, so the mean of 10⁴ draws sits within ~7e-4
    np.testing.assert_allclose(estimates.mean(axis=0), pair.s1, atol=5e-3)
    np.testing.assert_allclose(estimates.real.var(axis=0), 0.005, rtol=0.08)
    np.testing.assert_allclose(estimates.imag.var(axis=0), 0.005, rtol=0.08)


def test_noiseless_acquisition_reproduces_spectrum(system_32):
    cfg = AcquisitionConfig(n0_per_column=1.0, sigma_sq=1e-30, seed=8)
    true_spec = spectrum(build_discrimination_operator(system_32))
    measured_spec = end_to_end_spectrum(system_32, cfg)
    np.testing.assert_allclose(measured_spec.eigenvalues, true_spec.eigenvalues, atol=1e-7)


def test_noise_floor_stays_below_target_modes(system_32, acquisition):
    true_spec = spectrum(build_discrimination_operator(system_32))
    measured_spec = end_to_end_spectrum(system_32, acquisition)
    # two target pixels: everything past the second eigenvalue is noise
    assert np.max(measured_spec.eigenvalues[2:]) < true_spec.eigenvalues[1]
    assert np.max(measured_spec.eigenvalues[2:]) < 1e-3 * measured_spec.eigenvalues[1]


def test_shaped_probe_fields_average_repeated_shots(system_32):
    cfg = AcquisitionConfig(n0_per_column=1e4, repeats=400, seed=13)
    spec = spectrum(build_discrimination_operator(system_32))
    state = optimal_state(spec, 1.0)
    field = measure_outgoing(system_32, state, 2, cfg)
    expected = 100.0 * (system_32.s2 @ state.amplitudes)
    # averaged noise per quadrature has variance σ²/repeats
    assert np.max(np.abs(field - expected)) < 6 * np.sqrt(0.5 / 400)
    with pytest.raises(DimensionError):
        measure_outgoing(system_32, optimal_state(spectrum(np.eye(3, dtype=complex)), 1.0), 1, cfg)
