"""Non-commutative integration on SO(3): lambda-representation kernels, Wigner functions,
spin coherent states and reduced spectra."""

from .geometry import GroupElement, SpherePoint, compose, identity, inverse
from .lambda_rep import OrbitLabel, QFunction, kernel_D, q_plane_grid
from .lie import StructureConstants, validate_structure
from .reduction import HamiltonianSpec, reduced_spectrum
from .special import spherical_Y, wigner_D

__version__ = "0.1.0"

__all__ = [
    "GroupElement",
    "HamiltonianSpec",
    "OrbitLabel",
    "QFunction",
    "SpherePoint",
    "StructureConstants",
    "compose",
    "identity",
    "inverse",
    "kernel_D",
    "q_plane_grid",
    "reduced_spectrum",
    "spherical_Y",
    "validate_structure",
    "wigner_D",
]
