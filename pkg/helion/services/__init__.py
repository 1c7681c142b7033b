"""
Computational services: linear algebra, system synthesis, discrimination,
bounds, Monte Carlo receiver and acquisition
"""

from .discrim import DiscriminationSpectrum, ProbeState
from .receiver import TrialBatch
from .scatter import ScatteringPair

__all__ = ["DiscriminationSpectrum", "ProbeState", "ScatteringPair", "TrialBatch"]
