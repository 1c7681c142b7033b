"""
Helion - optimal coherent probes for binary decisions on scattering systems
"""

__version__ = "1.0.0"
