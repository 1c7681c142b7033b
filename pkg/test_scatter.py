"""
Tests for synthetic scattering systems
"""

import numpy as np
import pytest
from pydantic import ValidationError

from helion.core.errors import ConfigValidationError, DimensionError
from helion.schemas.config import LossModel, SystemConfig
from helion.services.discrim import average_state, build_discrimination_operator, optimal_state, spectrum
from helion.services.scatter import (
    ScatteringPair,
    gen_ginibre,
    gen_random_unitary,
    gen_system,
    is_unitary,
    target_intensity_fraction,
    target_mode_count,
    target_plane_field,
)


def test_haar_unitary_is_unitary():
    u = gen_random_unitary(16, 4)
    assert is_unitary(u)


def test_ginibre_variance():
    g = gen_ginibre(200, 200, 1)
    assert np.mean(np.abs(g) ** 2) == pytest.approx(1.0, rel=0.02)
    assert np.var(g.real) == pytest.approx(0.5, rel=0.03)


def test_ginibre_rejects_empty_shape():
    with pytest.raises(ConfigValidationError):
        gen_ginibre(0, 3, 1)


def test_subunitary_system_is_scaled(medium_pair):
    assert medium_pair.sigma_max == pytest.approx(0.95, abs=1e-8)
    assert medium_pair.s1.shape == (24, 16)
    assert not medium_pair.unitary


def test_same_seed_same_system(small_config):
    first = gen_system(small_config)
    second = gen_system(small_config)
    np.testing.assert_array_equal(first.s1, second.s1)
    np.testing.assert_array_equal(first.s2, second.s2)


def test_different_seed_different_system(small_config):
    other = gen_system(small_config.model_copy(update={"seed": 12}))
    assert not np.allclose(gen_system(small_config).s1, other.s1)


def test_unitary_embed_with_phase_mask_is_unitary(unitary_pair):
    assert unitary_pair.unitary
    assert unitary_pair.sigma_max == pytest.approx(1.0, abs=1e-9)


def test_unitary_embed_with_absorbing_target_is_flagged_lossy():
    config = SystemConfig(
        m_in=6,
        n_out=6,
        n_plane=6,
        target_pixels=[1],
        target_transmittance=0.0,
        loss_model=LossModel.UNITARY_EMBED,
        seed=3,
    )
    pair = gen_system(config)
    assert not pair.unitary
    assert pair.sigma_max <= 1.0 + 1e-9


def test_no_target_gives_identical_matrices():
    pair = gen_system(SystemConfig(m_in=5, n_out=7, n_plane=9, seed=1))
    np.testing.assert_array_equal(pair.s1, pair.s2)


def test_unitary_embed_requires_square_geometry():
    with pytest.raises(ValidationError):
        SystemConfig(m_in=8, n_out=8, n_plane=10, loss_model="unitary_embed")


def test_target_pixel_out_of_plane_rejected():
    with pytest.raises(ValidationError):
        SystemConfig(m_in=4, n_out=4, n_plane=4, target_pixels=[4])


def test_duplicate_target_pixels_rejected():
    with pytest.raises(ValidationError):
        SystemConfig(m_in=4, n_out=4, n_plane=4, target_pixels=[1, 1])


def test_from_matrices_derives_flags():
    u = gen_random_unitary(4, 8)
    pair = ScatteringPair.from_matrices(u, u)
    assert pair.unitary
    assert pair.sigma_max == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        ScatteringPair.from_matrices(u, u[:, :3])


def test_target_plane_field_applies_mask(small_pair):
    x = np.zeros(8, dtype=complex)
    x[0] = 1.0
    before = target_plane_field(small_pair, x, 1)
    after = target_plane_field(small_pair, x, 2)
    np.testing.assert_allclose(before, small_pair.a[:, 0])
    expected = before.copy()
    expected[3] *= small_pair.mask2[3]
    np.testing.assert_allclose(after, expected)


def test_target_plane_field_rejects_bad_hypothesis(small_pair):
    with pytest.raises(ConfigValidationError):
        target_plane_field(small_pair, np.ones(8) / np.sqrt(8), 3)


def test_target_intensity_fraction_bounds(small_pair):
    x = np.ones(8, dtype=complex) / np.sqrt(8)
    fraction = target_intensity_fraction(small_pair, x)
    assert 0.0 <= fraction <= 1.0
    assert target_intensity_fraction(small_pair, x, pixels=range(8)) == pytest.approx(1.0)


def test_target_mode_count():
    # one square wavelength at NA 1 holds 2π modes
    assert target_mode_count(1.0, 1.0, 1.0) == pytest.approx(2 * np.pi)
    with pytest.raises(ConfigValidationError):
        target_mode_count(1.0, 0.5, 0.0)


def test_ginibre_quadratures_are_uncorrelated():
    g = gen_ginibre(200, 200, 9)
    assert np.mean(g.real * g.imag) == pytest.approx(0.0, abs=0.0125)


@pytest.mark.parametrize("loss_model", list(LossModel))
def test_matrices_factor_through_the_target_plane(loss_model):
    config = SystemConfig(
        m_in=10,
        n_out=10,
        n_plane=10,
        target_pixels=[1, 7],
        target_transmittance=0.4,
        target_phase=0.3,
        loss_model=loss_model,
        seed=17,
    )
    pair = gen_system(config)
    for s, mask in ((pair.s1, pair.mask1), (pair.s2, pair.mask2)):
        np.testing.assert_allclose(s, pair.b @ np.diag(mask) @ pair.a, atol=1e-10)


def test_optimal_state_focuses_on_the_target():
    for seed in range(20):
        config = SystemConfig(
            m_in=32, n_out=32, n_plane=64, target_pixels=[5], target_transmittance=0.0, seed=seed
        )
        pair = gen_system(config)
        spec = spectrum(build_discrimination_operator(pair))
        focused = target_intensity_fraction(pair, optimal_state(spec, 1.0))
        spread = target_intensity_fraction(pair, average_state(spec, 1.0))
        assert focused > spread
