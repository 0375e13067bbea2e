"""Exact rational geometric chains on finite simplicial complexes."""
from __future__ import annotations

from .corners import CornersManifold, double, product_corners, simplex_manifold, validate_corners
from .exactla import RationalSparseMatrix, kernel_basis, rank, solve_in_image
from .geochain import (
    GeometricChain,
    GeometricTerm,
    boundary,
    fundamental_chain,
    normalize,
    product,
    pullback,
    pushforward,
)
from .homology import chain_map_check, comparison, kunneth_check, lift_cycle, simplicial_homology
from .quotient import CornersAction, FiniteGroup, orbit_space, orbit_type_strata, regularize
from .simplicial import SimplexChain, SimplicialComplex, SimplicialMap, barycentric_subdivision

__version__ = "0.1.0"
