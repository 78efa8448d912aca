"""Exact bound states of the 1+1 dimensional Klein-Gordon equation with
position-dependent mass and PT-symmetric vector potentials, solved by
supersymmetric quantum mechanics and checked against a finite-difference
eigensolver."""

from .analytic import (
    InadmissibleLevel,
    LevelBounds,
    SpectrumLevel,
    WavefunctionSpec,
    bound_energies,
    level_bounds,
    wavefunction,
)
from .core import Model, ModelParams, effective_potential, mass_at, vector_potential_at
from .susy import Superpotential, epsilon_spectrum, verify_shape_invariance

__all__ = [
    "InadmissibleLevel",
    "LevelBounds",
    "Model",
    "ModelParams",
    "SpectrumLevel",
    "Superpotential",
    "WavefunctionSpec",
    "bound_energies",
    "effective_potential",
    "epsilon_spectrum",
    "level_bounds",
    "mass_at",
    "vector_potential_at",
    "verify_shape_invariance",
    "wavefunction",
]
__version__ = "0.1.0"
