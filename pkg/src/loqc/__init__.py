"""Stabilizer simulation of codes and gates whose failures are detected ``Z`` measurements."""

from .noise import NoiseParams
from .pauli import PauliProduct, Rotation
from .resources import ResourceVector
from .tableau import StabilizerState

__version__ = "0.1.0"

__all__ = ["NoiseParams", "PauliProduct", "ResourceVector", "Rotation", "StabilizerState"]
