"""Measures with homogeneous p-concave densities: quadrature, mixed measures
and numerical checks of Loomis-Whitney type inequalities."""

from .bodies import ConvexBody, box, cube, hpolytope, minkowski_sum, vpolytope, zonotope
from .densities import Density, DirectionalPower, MinLinearPower
from .frames import WeightedFrame, isotropic_position, projection_family, verify_isotropic
from .measure import homogeneity_exponent, measure_body, measure_face
from .mixed import mixed_measure_facet_sum, mixed_measure_fd, projection_functional
from .report import CheckReport

__all__ = [
    "CheckReport", "ConvexBody", "Density", "DirectionalPower", "MinLinearPower",
    "WeightedFrame", "box", "cube", "homogeneity_exponent", "hpolytope", "isotropic_position",
    "measure_body", "measure_face", "minkowski_sum", "mixed_measure_facet_sum",
    "mixed_measure_fd", "projection_family", "projection_functional", "verify_isotropic",
    "vpolytope", "zonotope",
]

__version__ = "0.1.0"
