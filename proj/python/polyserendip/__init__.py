"""Quadratic serendipity finite elements on convex polygons."""

from ._polyserendip import (
    CoordinateKind,
    Error,
    Polygon,
    SerendipityMap,
    Strategy,
    basis_nodes,
    build_map,
    convergence,
    coordinates,
    eval_basis,
    nodal_table,
    trapezoid_mesh,
    verify_constraints,
)

__all__ = [
    "CoordinateKind",
    "Error",
    "Polygon",
    "SerendipityMap",
    "Strategy",
    "basis_nodes",
    "build_map",
    "convergence",
    "coordinates",
    "eval_basis",
    "nodal_table",
    "trapezoid_mesh",
    "verify_constraints",
]
