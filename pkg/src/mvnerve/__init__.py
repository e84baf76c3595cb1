"""Persistent homology of filtered covers, nerves and the Mayer-Vietoris spectral sequence."""

from __future__ import annotations

from ._backend import BACKEND
from .bounds import BoundReport, certify, sharpness_suite
from .complex import (
    ComplexError,
    CoverError,
    FilteredComplex,
    FilteredCover,
    GridMap,
    build_complex,
    check_cover,
    cover_from_members,
    discretize,
    induced_cover,
    intersection,
    lower_star,
)
from .io import ParseError, parse_complex, parse_cover, serialize_complex, serialize_cover
from .lowerbounds import generate_bipyramid_example, generate_sphere_example
from .modules import (
    TowerMorphism,
    bottleneck,
    bottleneck_matching,
    cokernel,
    eps_trivial,
    image,
    kernel,
    point_distance,
    shift,
)
from .nerve import AcyclicityReport, NerveComplex, acyclicity, nerve
from .persistence import INF, Barcode, Interval, PersistenceTower, barcode, barcode_of_tower, tower_homology
from .spectral import DoubleComplex, SpectralPage, build_double_complex, column_quotients, page, total_barcode

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "INF", "AcyclicityReport", "Barcode", "BoundReport", "ComplexError", "CoverError",
    "DoubleComplex", "FilteredComplex", "FilteredCover", "GridMap", "Interval", "NerveComplex",
    "ParseError", "PersistenceTower", "SpectralPage", "TowerMorphism", "acyclicity", "barcode",
    "barcode_of_tower", "bottleneck", "bottleneck_matching", "build_complex", "build_double_complex",
    "certify", "check_cover", "cokernel", "column_quotients", "cover_from_members", "discretize",
    "eps_trivial", "generate_bipyramid_example", "generate_sphere_example", "image", "induced_cover",
    "intersection", "kernel", "lower_star", "nerve", "page", "parse_complex", "parse_cover",
    "point_distance", "serialize_complex", "serialize_cover", "sharpness_suite", "shift",
    "total_barcode", "tower_homology",
]
