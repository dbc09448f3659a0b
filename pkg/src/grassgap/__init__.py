"""Numerical toolkit for the gap metric on the Grassmannian of projections."""
from .errors import *  # noqa: F401,F403
from .projection import (
    Projection,
    ScalarField,
    SubspaceBasis,
    complement,
    projection_from_basis,
    random_projection,
    subspace_intersect,
    validate,
)
from .halmos import HalmosForm, halmos_decompose, principal_angles, reconstruct
from .metric import gap_direct, gap_formula, gap_lower_bound, gap_rank1

__version__ = "0.1.0"
