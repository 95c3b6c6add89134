"""Intrinsic volumes of regular polytopes and expected volumes of Gaussian polytopes."""
from gausspoly.expectations import Model, RandomPolytopeModel, expected_intrinsic_volume, expected_volume
from gausspoly.regular import Family, RegularFamily, external_angle, intrinsic_volume

__version__ = "0.1.0"

__all__ = [
    "Family",
    "Model",
    "RandomPolytopeModel",
    "RegularFamily",
    "expected_intrinsic_volume",
    "expected_volume",
    "external_angle",
    "intrinsic_volume",
]
