"""Constant scalar curvature metrics on boundary complexes of cyclic 4-polytopes."""
from .complex import (
    Complex,
    TetraType,
    build_complex,
    classify_tetra,
    cyclic_distance,
    gale_facets_oracle,
    type_census,
    verify_dihedral_symmetry,
    vertex_star_census,
)
from .conformal import (
    ConformalData,
    conformal_lengths,
    cyclic_admissibility,
    find_critical_point,
    grad_lehr_fd,
    grad_vehr_fd,
)
from .curvature import (
    CurvatureReport,
    Metric,
    check_csc,
    cyclic_metric,
    edge_curvature,
    report,
    vertex_curvature,
)
from .errors import ArgumentError, DomainError, NumericalError, ReggeError

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "Complex",
    "ConformalData",
    "CurvatureReport",
    "DomainError",
    "Metric",
    "NumericalError",
    "ReggeError",
    "TetraType",
    "build_complex",
    "check_csc",
    "classify_tetra",
    "conformal_lengths",
    "cyclic_admissibility",
    "cyclic_distance",
    "cyclic_metric",
    "edge_curvature",
    "find_critical_point",
    "gale_facets_oracle",
    "grad_lehr_fd",
    "grad_vehr_fd",
    "report",
    "type_census",
    "verify_dihedral_symmetry",
    "vertex_curvature",
    "vertex_star_census",
]
