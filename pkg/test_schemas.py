"""
Tests for run configuration validation
"""

import pytest
from pydantic import ValidationError

from helion.schemas.config import AcquisitionConfig, Priors, SystemConfig
from helion.schemas.runs import BoundsRun, SweepRun, TrialsRun


def test_priors_must_sum_to_one():
    with pytest.raises(ValidationError):
        Priors(pi1=0.6, pi2=0.6)
    assert Priors(pi1=0.25, pi2=0.75).log_ratio < 0


def test_unknown_keys_rejected():
    with pytest.raises(ValidationError):
        SystemConfig(m_in=2, n_out=2, n_plane=2, colour="blue")
    with pytest.raises(ValidationError):
        AcquisitionConfig(n0=5)


def test_seed_range():
    SystemConfig(m_in=1, n_out=1, n_plane=1, seed=2**64 - 1)
    with pytest.raises(ValidationError):
        SystemConfig(m_in=1, n_out=1, n_plane=1, seed=2**64)


def test_non_finite_phase_rejected():
    with pytest.raises(ValidationError):
        SystemConfig(m_in=1, n_out=1, n_plane=1, target_phase=float("inf"))


def test_bounds_grid_checked():
    with pytest.raises(ValidationError):
        BoundsRun(photons=[1.0], d12sq=[4.5])
    with pytest.raises(ValidationError):
        BoundsRun(photons=[-1.0], d12sq=[1.0])


@pytest.mark.parametrize("state", ["optimal", "average", "eigen:3"])
def test_valid_state_names(state):
    assert TrialsRun(state=state, photons=1.0).state == state


@pytest.mark.parametrize("state", ["best", "eigen:", "eigen:x"])
def test_invalid_state_names(state):
    with pytest.raises(ValidationError):
        TrialsRun(state=state, photons=1.0)


def test_reference_strategy_needs_reference():
    with pytest.raises(ValidationError):
        TrialsRun(photons=1.0, mean_strategy="reference_means")


def test_budgets_stand_in_for_photons():
    budget = {"n0": 1e6, "t_nd": 1e-3}
    assert BoundsRun(budgets=[budget], d12sq=[1.0]).budgets[0].t_nd == 1e-3
    with pytest.raises(ValidationError):
        BoundsRun(d12sq=[1.0])
    run = SweepRun(states=["optimal"], budgets=[budget])
    assert run.grid("optimal", [1e3]) == [1e3]
    with pytest.raises(ValidationError):
        SweepRun(budgets=[{"n0": 1.0, "t_va": 2.0}], states=["optimal"])


def test_sweep_grid_per_state():
    run = SweepRun(photons=[1.0, 2.0], photons_by_state={"average": [10.0, 20.0]})
    assert run.grid("optimal") == [1.0, 2.0]
    assert run.grid("average") == [10.0, 20.0]
    with pytest.raises(ValidationError):
        SweepRun(states=["optimal"], photons_by_state={"average": [1.0]})
    with pytest.raises(ValidationError):
        SweepRun(states=["optimal"])
