"""Exact topology computations on 2D/3D binary segmentation grids.

The package computes Euler characteristics by bit-quad / bit-octet pattern
counting (cross-checked against an explicit cubical-complex oracle), Betti
numbers and their error metrics, patch-local chi maps, topology-violation
maps, and the noise-masked grids used to train topology correction
networks.
"""

from .calibration import (
    CalibrationResult,
    CalibrationSample,
    OctetClassTable,
    VerificationReport,
    enumerate_classes,
    grouped_counts,
    sample_volumes,
    solve_coefficients,
    verify_coefficients,
)
from .cubical import CellCounts, cell_counts, chi_exact
from .errors import (
    CalibrationError,
    ConsistencyError,
    DimensionalityError,
    FormatError,
    InvalidDimensionsError,
)
from .grid import (
    BinaryGrid,
    Connectivity,
    complement,
    flip_cell,
    from_array,
    from_probabilities,
    make_grid,
    pad_background,
)
from .homology import (
    BettiError,
    BettiVector,
    betti,
    betti_2d,
    betti_3d,
    betti_error,
    bounded_background_components,
    component_count,
    dice,
)
from .patterns import (
    ChiMap,
    CoefficientVector,
    PatternHistogram,
    chi,
    chi_gray,
    chi_map,
    chi_octet,
    default_coefficients,
    flip_delta_chi,
    octet_histogram,
    quad_histogram,
)
from .tvd import (
    MaskedGrid,
    ViolationMap,
    chi_error,
    noise_mask,
    sample_threshold,
    threshold_mask,
    violation_map,
)

__version__ = "0.1.0"

__all__ = [
    "BettiError",
    "BettiVector",
    "BinaryGrid",
    "CalibrationError",
    "CalibrationResult",
    "CalibrationSample",
    "CellCounts",
    "ChiMap",
    "CoefficientVector",
    "Connectivity",
    "ConsistencyError",
    "DimensionalityError",
    "FormatError",
    "InvalidDimensionsError",
    "MaskedGrid",
    "OctetClassTable",
    "PatternHistogram",
    "VerificationReport",
    "ViolationMap",
    "betti",
    "betti_2d",
    "betti_3d",
    "betti_error",
    "bounded_background_components",
    "cell_counts",
    "chi",
    "chi_error",
    "chi_exact",
    "chi_gray",
    "chi_map",
    "chi_octet",
    "complement",
    "component_count",
    "default_coefficients",
    "dice",
    "enumerate_classes",
    "flip_cell",
    "flip_delta_chi",
    "from_array",
    "from_probabilities",
    "grouped_counts",
    "make_grid",
    "noise_mask",
    "octet_histogram",
    "pad_background",
    "quad_histogram",
    "sample_threshold",
    "sample_volumes",
    "solve_coefficients",
    "threshold_mask",
    "verify_coefficients",
    "violation_map",
]
