from .curves import Circle, Curve, Kite, Peanut, PointLocation, Polygon, curve_from_dict
from .mesh import (
    BoundaryQuadrature,
    graded_parameter_derivative,
    graded_parameter_map,
    sample_curve,
)

__all__ = [
    "Circle",
    "Curve",
    "Kite",
    "Peanut",
    "PointLocation",
    "Polygon",
    "curve_from_dict",
    "BoundaryQuadrature",
    "graded_parameter_derivative",
    "graded_parameter_map",
    "sample_curve",
]
