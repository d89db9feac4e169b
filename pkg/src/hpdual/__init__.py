"""Biorthogonal dual functions for interior hp-FEM shape functions.

Interior H1 bubbles and H(curl) fields on the quadrilateral, hexahedron,
triangle and tetrahedron, with L2-dual families whose Gram matrix against the
basis is the identity.
"""

from hpdual.biorth import (
    BiorthReport, GramMatrix, RecombinationError, assemble_gram,
    solve_recombination, sparsity_pattern, verify_biorthogonality,
)
from hpdual.catalog import FamilySpec
from hpdual.family import Family, ShapeIndex
from hpdual.project import ProjectionResult, project, projection_matrix_diagnostic

__all__ = [
    "BiorthReport", "Family", "FamilySpec", "GramMatrix", "ProjectionResult",
    "RecombinationError", "ShapeIndex", "assemble_gram", "project",
    "projection_matrix_diagnostic", "solve_recombination", "sparsity_pattern",
    "verify_biorthogonality",
]
