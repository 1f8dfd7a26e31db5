"""Quantum-Zeno two-photon gate simulator and design toolkit."""

from . import absorber, enhancement, gate, numerics, optimizer

__version__ = "0.1.0"

__all__ = ["absorber", "enhancement", "gate", "numerics", "optimizer", "__version__"]
