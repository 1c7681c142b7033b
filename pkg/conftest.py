"""
Shared fixtures for the Helion test suite
"""

import numpy as np
import pytest

from helion.schemas.config import AcquisitionConfig, LossModel, Priors, SystemConfig
from helion.services.discrim import build_discrimination_operator, spectrum
from helion.services.scatter import gen_system


@pytest.fixture
def small_config():
    return SystemConfig(m_in=8, n_out=8, n_plane=8, target_pixels=[3], target_transmittance=0.3, seed=11)


@pytest.fixture
def small_pair(small_config):
    return gen_system(small_config)


@pytest.fixture
def medium_pair():
    """Sub-unitary system with a three-pixel absorbing target"""
    config = SystemConfig(
        m_in=16,
        n_out=24,
        n_plane=32,
        target_pixels=[2, 9, 20],
        target_transmittance=0.2,
        seed=2024,
    )
    return gen_system(config)


@pytest.fixture
def medium_spectrum(medium_pair):
    return spectrum(build_discrimination_operator(medium_pair))


@pytest.fixture
def unitary_pair():
    config = SystemConfig(
        m_in=12,
        n_out=12,
        n_plane=12,
        target_pixels=[0, 5],
        target_phase=1.1,
        loss_model=LossModel.UNITARY_EMBED,
        seed=7,
    )
    return gen_system(config)


@pytest.fixture
def equal_priors():
    return Priors()


@pytest.fixture
def acquisition():
    return AcquisitionConfig(n0_per_column=1e8, seed=99)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))
